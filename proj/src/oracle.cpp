#include "growth/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "growth/errors.hpp"
#include "growth/special.hpp"

namespace growth::oracle {

namespace {
constexpr double kPi = 3.1415926535897932385;
constexpr double kHalfPi = 1.5707963267948966192;

// Double-exponential (tanh-sinh) rule on (a, b) at step h, summed until the
// node weights underflow. Node offsets from the endpoints are computed as
// 1 - tanh(u) = 2/(exp(2u) + 1) directly, which keeps nodes distinct from
// the endpoints far beyond where tanh saturates; integrable endpoint
// singularities then contribute their full mass.
double tanh_sinh_level(const std::function<double(double)>& f, double a,
                       double b, double h) {
    const double half = 0.5 * (b - a);
    double sum = f(0.5 * (a + b)) * half * kHalfPi; // t = 0 node
    for (int j = 1;; ++j) {
        const double t = h * j;
        const double u = kHalfPi * std::sinh(t);
        const double w = kHalfPi * std::cosh(t) / std::pow(std::cosh(u), 2);
        const double d = 2.0 / (std::exp(2.0 * u) + 1.0); // 1 - tanh(u)
        if (w * half < 1e-320 || half * d == 0.0) break;
        const double term = f(a + half * d) + f(b - half * d);
        if (std::isfinite(term)) sum += term * w * half;
    }
    return sum * h;
}
} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(b > a)) throw parameter_error("integrate: requires b > a");
    double h = 1.0;
    double prev = tanh_sinh_level(f, a, b, h);
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        const double cur = tanh_sinh_level(f, a, b, h);
        if (std::abs(cur - prev) < abs_tol && level >= 3) return cur;
        prev = cur;
    }
    throw numeric_error("integrate: quadrature did not reach tolerance");
}

void validate(const MixtureSpec& spec) {
    if (!(spec.sigma > 0.0)) throw parameter_error("mixture: sigma must be positive");
    if (spec.k_law == KLaw::exponential && !(spec.lambda > 0.0))
        throw parameter_error("mixture: lambda must be positive");
    if (spec.k_law == KLaw::point_mass && !(spec.k0 > 0.0))
        throw parameter_error("mixture: k0 must be positive");
}

namespace {

// Integral of w(K) * f(K) over K in (0, inf) for the exponential weight,
// split at 1/lambda: K = t^2 tames the K -> 0 behaviour, u = exp(-lambda K)
// compactifies the upper range.
double exponential_mixture_integral(double lambda,
                                    const std::function<double(double)>& f,
                                    double abs_tol) {
    const double k_split = 1.0 / lambda;
    const auto lower = [&](double t) {
        const double k = t * t;
        return lambda * std::exp(-lambda * k) * f(k) * 2.0 * t;
    };
    const double i1 = integrate(lower, 0.0, std::sqrt(k_split), abs_tol * 0.5);
    const double u_split = std::exp(-1.0);
    const auto upper = [&](double u) { return f(-std::log(u) / lambda); };
    const double i2 = integrate(upper, 0.0, u_split, abs_tol * 0.5);
    return i1 + i2;
}

} // namespace

double mixture_density_point(const MixtureSpec& spec, double g) {
    validate(spec);
    if (spec.k_law == KLaw::point_mass)
        return normal_pdf(g, 0.0, spec.sigma * std::pow(spec.k0, 0.5 * spec.psi));
    const double psi = spec.psi;
    const double sigma = spec.sigma;
    const auto conditional = [&](double k) {
        if (!(k > 0.0)) return 0.0;
        const double sd = sigma * std::pow(k, 0.5 * psi);
        return normal_pdf(g, 0.0, sd);
    };
    return exponential_mixture_integral(spec.lambda, conditional, 1e-12);
}

double mixture_cdf(const MixtureSpec& spec, double g) {
    validate(spec);
    if (spec.k_law == KLaw::point_mass)
        return normal_cdf(g, 0.0, spec.sigma * std::pow(spec.k0, 0.5 * spec.psi));
    const double psi = spec.psi;
    const double sigma = spec.sigma;
    const auto conditional = [&](double k) {
        if (!(k > 0.0)) return 0.5;
        const double sd = sigma * std::pow(k, 0.5 * psi);
        return normal_cdf(g, 0.0, sd);
    };
    return exponential_mixture_integral(spec.lambda, conditional, 1e-12);
}

stats::DensityCurve mixture_density_numeric(const MixtureSpec& spec,
                                            const std::vector<double>& g_grid) {
    validate(spec);
    for (std::size_t i = 1; i < g_grid.size(); ++i)
        if (!(g_grid[i] > g_grid[i - 1]))
            throw parameter_error("mixture grid must be strictly increasing");
    stats::DensityCurve curve;
    curve.points.resize(g_grid.size());
    for (std::size_t i = 0; i < g_grid.size(); ++i)
        curve.points[i] = stats::DensityPoint{g_grid[i],
                                              mixture_density_point(spec, g_grid[i])};
    return curve;
}

double mixture_total_mass(const MixtureSpec& spec) {
    validate(spec);
    if (spec.k_law == KLaw::point_mass) return 1.0;
    // Central part by direct integration of the numeric density, plus the
    // exact mixture tail mass beyond the cut.
    const double scale = spec.sigma * std::pow(1.0 / spec.lambda,
                                               0.5 * std::abs(spec.psi));
    const double cut = 25.0 * std::max(spec.sigma, scale);
    const auto dens = [&](double g) { return mixture_density_point(spec, g); };
    const double central = integrate(dens, 0.0, cut, 1e-9);
    const auto tail_weight = [&](double k) {
        const double sd = spec.sigma * std::pow(k, 0.5 * spec.psi);
        return 1.0 - normal_cdf(cut, 0.0, sd);
    };
    const double tail = exponential_mixture_integral(spec.lambda, tail_weight, 1e-12);
    return 2.0 * (central + tail); // the mixture density is even in g
}

double closed_form_density_psi_minus1(double lambda, double sigma, double g) {
    return lambda / (2.0 * std::sqrt(2.0) * sigma) *
           std::pow(lambda + g * g / (2.0 * sigma * sigma), -1.5);
}

double closed_form_cdf_psi_minus1(double lambda, double sigma, double g) {
    const double u = g / (sigma * std::sqrt(2.0 * lambda));
    return 0.5 + 0.5 * u / std::sqrt(1.0 + u * u);
}

double closed_form_density_psi_plus1(double lambda, double sigma, double g) {
    return std::sqrt(0.5 * lambda) / sigma *
           std::exp(-std::sqrt(2.0 * lambda) * std::abs(g) / sigma);
}

double laplace_scale_for_psi1(double lambda, double sigma) {
    return sigma / std::sqrt(2.0 * lambda);
}

namespace {
void enumerate_rec(std::uint32_t remaining, std::uint32_t max_part,
                   std::vector<std::uint32_t>& stack,
                   std::vector<randkit::Partition>& out) {
    if (remaining == 0) {
        randkit::Partition p;
        p.parts = stack;
        for (std::uint32_t v : stack) p.total += v;
        out.push_back(std::move(p));
        return;
    }
    for (std::uint32_t part = std::min(remaining, max_part); part >= 1; --part) {
        stack.push_back(part);
        enumerate_rec(remaining - part, part, stack, out);
        stack.pop_back();
    }
}
} // namespace

std::vector<randkit::Partition> enumerate_partitions(std::uint32_t total) {
    if (total < 1 || total > 60)
        throw parameter_error("enumerate_partitions: total must lie in [1, 60]");
    std::vector<randkit::Partition> out;
    std::vector<std::uint32_t> stack;
    enumerate_rec(total, total, stack, out);
    return out;
}

double laplace_scale_mixture_check(const std::vector<double>& samples,
                                   double lambda, double sigma) {
    if (!(lambda > 0.0) || !(sigma > 0.0))
        throw parameter_error("laplace check: lambda and sigma must be positive");
    const double scale = laplace_scale_for_psi1(lambda, sigma);
    return stats::ks_distance(samples,
                              [scale](double x) { return laplace_cdf(x, scale); });
}

double fas_stable_scale(double mu) {
    if (!(mu > 1.0 && mu < 2.0))
        throw regime_error("fas_stable_scale: mu must lie in (1, 2)");
    const double theta = 1.0 / riemann_zeta(mu);
    const double tail_coeff = theta / mu; // P(N > x) ~ tail_coeff * x^-mu
    const double c_alpha = 2.0 / kPi * std::tgamma(mu) * std::sin(kHalfPi * mu);
    return std::pow(tail_coeff / c_alpha, 1.0 / mu);
}

std::vector<ExponentPrediction> scaling_exponent_table(const ScalingParams& p) {
    std::vector<ExponentPrediction> out;
    out.push_back({"sutton_log_variance_vs_log_size", -0.5, false});
    if (p.mu) {
        const double mu = *p.mu;
        if (!(mu > 1.0) || mu > 2.0)
            throw regime_error("scaling table: mu must lie in (1, 2]");
        const bool boundary = mu == 2.0;
        out.push_back({"wb_typical_herfindahl_vs_unit_count", 2.0 * (1.0 - mu) / mu, boundary});
        out.push_back({"wb_mean_herfindahl_vs_unit_count", 1.0 - mu, boundary});
        out.push_back({"wb_herfindahl_ccdf_tail", 0.5 * mu, boundary});
        out.push_back({"wb_mean_volatility_vs_size", (mu - 1.0) / mu, boundary});
        out.push_back({"fas_rms_volatility_vs_size", (1.0 - mu) / mu, boundary});
        if (p.alpha) {
            const double alpha = *p.alpha;
            if (!(alpha > 1.0) || !(alpha < mu))
                throw regime_error("scaling table: requires 1 < alpha < mu");
            out.push_back({"wb_rms_volatility_vs_size", 0.5 * (alpha - mu), boundary});
            out.push_back({"wb_firm_size_ccdf_tail", alpha, false});
            out.push_back({"wb_growth_ccdf_tail", mu, boundary});
        }
    }
    if (p.b) {
        const double b = *p.b;
        if (b < 0.0 || b >= 1.0)
            throw regime_error("scaling table: b must lie in [0, 1)");
        out.push_back({"simon_unit_count_density_exponent", 2.0 + b / (1.0 - b), b == 0.0});
    }
    return out;
}

} // namespace growth::oracle
