#pragma once

#include <cstdint>
#include <vector>

#include "growth/rng.hpp"

namespace growth::randkit {

// Pareto law with CCDF (xmin/x)^mu for x >= xmin.
struct ParetoParams {
    double xmin = 1.0;
    double mu = 1.0;
};

// Stable law in the type-1 ("S1") parameterization: X = scale*Z + location
// where Z is standard stable(alpha, beta). Under this convention alpha = 2
// is Gaussian with variance 2*scale^2 and alpha = 1, beta = 0 is Cauchy.
// The same convention is used everywhere in this project, including the
// reference quantiles the experiment harness emits.
struct StableParams {
    double alpha = 2.0;
    double beta = 0.0;
    double scale = 1.0;
    double location = 0.0;
};

void validate(const ParetoParams& p);
void validate(const StableParams& p);

// Single draws, used by the model engines.
double pareto_draw(const ParetoParams& p, Rng& rng);
double stable_draw(const StableParams& p, Rng& rng);
std::uint64_t geometric_draw(double mean, Rng& rng);

// Exact inverse-CDF sampler for P(K = k) proportional to k^-(1+alpha),
// k >= kmin. A normalized cumulative table covers [kmin, kmax]; the
// remaining tail mass (Euler-Maclaurin remainder, ~1e-9 of the total at the
// defaults) falls back to a continuous power-law inverse.
class DiscretePowerLaw {
public:
    static constexpr std::uint64_t kDefaultTableMax = 10'000'000;

    DiscretePowerLaw(double alpha, std::uint64_t kmin,
                     std::uint64_t kmax = kDefaultTableMax);

    std::uint64_t draw(Rng& rng) const;
    double alpha() const { return alpha_; }

private:
    double alpha_;
    std::uint64_t kmin_;
    std::uint64_t kmax_;
    std::vector<double> cdf_;
};

// Batch samplers. Each is a pure function of (parameters, n, stream):
// repeated calls with equal arguments return identical sequences.
std::vector<double> sample_pareto(const ParetoParams& params, std::size_t n,
                                  RngStream stream);
std::vector<double> sample_lognormal(double log_mean, double log_sd,
                                     std::size_t n, RngStream stream);
std::vector<double> sample_stable(const StableParams& params, std::size_t n,
                                  RngStream stream);
std::vector<std::uint64_t> sample_discrete_power_law(double alpha,
                                                     std::uint64_t kmin,
                                                     std::size_t n,
                                                     RngStream stream);
std::vector<std::uint64_t> sample_geometric(double mean, std::size_t n,
                                            RngStream stream);

} // namespace growth::randkit
