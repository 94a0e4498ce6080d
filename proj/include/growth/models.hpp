#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "growth/distributions.hpp"
#include "growth/firm.hpp"
#include "growth/rng.hpp"

namespace growth::models {

// Fixed firm structures: K drawn from a discrete power law with exponent
// alpha, unit sizes Pareto(mu), growth conditionally Gaussian with variance
// sigma_unit^2 * H. Requires 1 < alpha < mu < 2.
struct WyartBouchaudConfig {
    double alpha = 1.2;
    double mu = 1.4;
    double sigma_unit = 1.0;
    std::uint64_t n_firms = 100000;
    std::uint64_t seed = 0;
};

// Sequential unit arrivals: each founds a new firm with probability b,
// otherwise joins an existing firm with probability proportional to its
// unit count. With b = 0 the process needs a seed population.
struct SimonConfig {
    double b = 0.1;
    std::uint64_t n_steps = 1000000;
    std::uint64_t n_seed_firms = 0; // used when b == 0
    std::uint64_t seed = 0;
};

// Proportional-growth panel: firm structures from the arrival process,
// log-normal unit sizes, one multiplicative shock per unit and period over
// the measurement window with the unit count held fixed.
struct GpgConfig {
    double b = 0.0;
    std::uint64_t n_steps = 1000000;
    std::uint64_t n_seed_firms = 10000; // used when b == 0
    double unit_log_sd = 1.0;
    double gibrat_log_sd = 0.3;
    std::uint32_t measure_window = 1;
    std::uint64_t seed = 0;
};

// Exponential mixture of Gaussians: K ~ Exponential(lambda) (continuous),
// g ~ Normal(0, sigma^2 * K^psi).
struct PsiMixtureConfig {
    double psi = 0.0;
    double lambda = 1.0;
    double sigma = 1.0;
    std::uint64_t n_firms = 1000000;
    std::uint64_t seed = 0;
};

enum class ShockKind { gaussian, laplace };

// Firms as uniform random integer partitions of S; i.i.d. unit percent
// shocks with mean zero and the given standard deviation.
struct SuttonConfig {
    std::vector<std::uint32_t> size_grid;
    std::uint64_t samples_per_size = 1000;
    double unit_shock_sd = 0.1;
    ShockKind unit_shock_kind = ShockKind::gaussian;
    std::uint64_t seed = 0;
};

// Unit-replacement branching: every unit is replaced by n new units drawn
// from a heavy-tailed law with mean exactly one; sizes equal unit counts.
struct FasConfig {
    double mu = 1.5;
    std::vector<std::uint64_t> k0_grid;
    std::uint32_t n_periods = 1;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
};

using ModelConfig = std::variant<WyartBouchaudConfig, SimonConfig, GpgConfig,
                                 PsiMixtureConfig, SuttonConfig, FasConfig>;

// Estimated exponent or slope with its standard error and the abscissa
// range it was fitted over.
struct FitResult {
    double exponent = 0.0;
    double stderr_ = 0.0;
    std::size_t n_points = 0;
    double range_low = 0.0;
    double range_high = 0.0;
};

GrowthPanel simulate_wyart_bouchaud(const WyartBouchaudConfig& cfg);
std::vector<std::uint64_t> simulate_simon(const SimonConfig& cfg);
GrowthPanel simulate_gpg(const GpgConfig& cfg);
GrowthPanel simulate_psi_mixture(const PsiMixtureConfig& cfg);
GrowthPanel simulate_sutton(const SuttonConfig& cfg);
GrowthPanel simulate_fas(const FasConfig& cfg);

// Dispatch over the tagged union.
GrowthPanel simulate(const ModelConfig& cfg);

// Short hex digest identifying a model configuration and seed.
std::string config_digest(const ModelConfig& cfg);

namespace detail {

// Replication law for the branching model: P(n) proportional to n^-(1+mu)
// for n >= 1 with P(0) chosen so the mean is exactly one.
class ReplicationLaw {
public:
    static ReplicationLaw power_tail(double mu);
    static ReplicationLaw point_mass(std::uint64_t value);

    std::uint64_t draw(randkit::Rng& rng) const;
    double p0() const { return head_.empty() ? 0.0 : head_[0]; }

private:
    std::vector<double> head_; // cumulative P(N <= k) for k = 0..cutoff
    double mu_ = 0.0;
    std::uint64_t fixed_ = 0;
    bool is_point_ = false;
};

// One period of the branching dynamics from unit count k.
std::uint64_t fas_step(std::uint64_t k, const ReplicationLaw& law, randkit::Rng& rng);

// Conditional growth draw for a firm with Herfindahl h.
double wb_growth_draw(double h, double sigma_unit, randkit::Rng& rng);

} // namespace detail

} // namespace growth::models
