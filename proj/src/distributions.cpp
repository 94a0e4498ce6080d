#include "growth/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "growth/errors.hpp"

namespace growth::randkit {

namespace {
constexpr double kPi = 3.1415926535897932385;
constexpr double kHalfPi = 1.5707963267948966192;
} // namespace

void validate(const ParetoParams& p) {
    if (!(p.xmin > 0.0)) throw parameter_error("pareto: xmin must be positive");
    if (!(p.mu > 0.0)) throw parameter_error("pareto: mu must be positive");
}

void validate(const StableParams& p) {
    if (!(p.alpha > 0.0) || p.alpha > 2.0)
        throw parameter_error("stable: alpha must lie in (0, 2]");
    if (p.beta < -1.0 || p.beta > 1.0)
        throw parameter_error("stable: beta must lie in [-1, 1]");
    if (!(p.scale > 0.0)) throw parameter_error("stable: scale must be positive");
    if (!std::isfinite(p.location)) throw parameter_error("stable: location must be finite");
}

double pareto_draw(const ParetoParams& p, Rng& rng) {
    return p.xmin * std::pow(rng.u01(), -1.0 / p.mu);
}

// Chambers-Mallows-Stuck construction for the standard stable variate,
// composed into the S1 parameterization.
double stable_draw(const StableParams& p, Rng& rng) {
    const double v = kPi * (rng.u01() - 0.5); // uniform on (-pi/2, pi/2)
    const double w = rng.exponential();
    const double a = p.alpha;
    const double b = p.beta;
    if (a == 1.0) {
        const double t = kHalfPi + b * v;
        double z = (t * std::tan(v) -
                    b * std::log((kHalfPi * w * std::cos(v)) / t)) / kHalfPi;
        double x = p.scale * z + p.location;
        if (b != 0.0) x += b * p.scale * std::log(p.scale) / kHalfPi;
        return x;
    }
    const double tan_half = std::tan(kHalfPi * a);
    const double b0 = std::atan(b * tan_half) / a;
    const double s = std::pow(1.0 + b * b * tan_half * tan_half, 0.5 / a);
    const double z = s * std::sin(a * (v + b0)) / std::pow(std::cos(v), 1.0 / a) *
                     std::pow(std::cos(v - a * (v + b0)) / w, (1.0 - a) / a);
    return p.scale * z + p.location;
}

std::uint64_t geometric_draw(double mean, Rng& rng) {
    // Success probability 1/(1+mean) gives P(X = k) = p (1-p)^k on {0,1,...}.
    const double log_q = std::log(mean / (1.0 + mean));
    if (!std::isfinite(log_q)) return 0; // mean underflows to the point mass at 0
    const double x = std::floor(std::log(rng.u01()) / log_q);
    return x < 0.0 ? 0 : static_cast<std::uint64_t>(x);
}

DiscretePowerLaw::DiscretePowerLaw(double alpha, std::uint64_t kmin,
                                   std::uint64_t kmax)
    : alpha_(alpha), kmin_(kmin), kmax_(kmax) {
    if (!(alpha > 0.0)) throw parameter_error("discrete power law: alpha must be positive");
    if (kmin < 1) throw parameter_error("discrete power law: kmin must be >= 1");
    if (kmax <= kmin) throw parameter_error("discrete power law: kmax must exceed kmin");
    const std::size_t count = static_cast<std::size_t>(kmax - kmin + 1);
    cdf_.resize(count);
    double cum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        cum += std::pow(static_cast<double>(kmin + i), -1.0 - alpha);
        cdf_[i] = cum;
    }
    // Euler-Maclaurin remainder of sum_{k > kmax} k^-(1+alpha).
    const double m = static_cast<double>(kmax);
    const double tail = std::pow(m, -alpha) / alpha - 0.5 * std::pow(m, -1.0 - alpha) +
                        (1.0 + alpha) * std::pow(m, -2.0 - alpha) / 12.0;
    const double norm = cum + tail;
    for (double& c : cdf_) c /= norm;
}

std::uint64_t DiscretePowerLaw::draw(Rng& rng) const {
    const double u = rng.u01();
    if (u <= cdf_.back()) {
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return kmin_ + static_cast<std::uint64_t>(it - cdf_.begin());
    }
    // Analytic continuation beyond the table: conditional on K > kmax the law
    // is approximated by its continuous envelope (x/kmax)^-alpha.
    const double v = (u - cdf_.back()) / (1.0 - cdf_.back());
    const double x = static_cast<double>(kmax_) * std::pow(1.0 - v, -1.0 / alpha_);
    if (!(x < 9.0e18)) return static_cast<std::uint64_t>(9.0e18);
    return static_cast<std::uint64_t>(x) + 1;
}

std::vector<double> sample_pareto(const ParetoParams& params, std::size_t n,
                                  RngStream stream) {
    validate(params);
    if (n < 1) throw parameter_error("sample_pareto: n must be >= 1");
    Rng rng(stream);
    std::vector<double> out(n);
    for (auto& x : out) x = pareto_draw(params, rng);
    return out;
}

std::vector<double> sample_lognormal(double log_mean, double log_sd,
                                     std::size_t n, RngStream stream) {
    if (!(log_sd > 0.0)) throw parameter_error("sample_lognormal: log_sd must be positive");
    Rng rng(stream);
    std::vector<double> out(n);
    for (auto& x : out) x = std::exp(log_mean + log_sd * rng.normal());
    return out;
}

std::vector<double> sample_stable(const StableParams& params, std::size_t n,
                                  RngStream stream) {
    validate(params);
    Rng rng(stream);
    std::vector<double> out(n);
    for (auto& x : out) x = stable_draw(params, rng);
    return out;
}

std::vector<std::uint64_t> sample_discrete_power_law(double alpha,
                                                     std::uint64_t kmin,
                                                     std::size_t n,
                                                     RngStream stream) {
    DiscretePowerLaw law(alpha, kmin);
    Rng rng(stream);
    std::vector<std::uint64_t> out(n);
    for (auto& k : out) k = law.draw(rng);
    return out;
}

std::vector<std::uint64_t> sample_geometric(double mean, std::size_t n,
                                            RngStream stream) {
    if (!(mean > 0.0)) throw parameter_error("sample_geometric: mean must be positive");
    Rng rng(stream);
    std::vector<std::uint64_t> out(n);
    for (auto& k : out) k = geometric_draw(mean, rng);
    return out;
}

} // namespace growth::randkit
