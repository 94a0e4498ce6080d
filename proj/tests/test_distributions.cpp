#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "growth/distributions.hpp"
#include "growth/errors.hpp"
#include "growth/special.hpp"
#include "growth/stats.hpp"

using namespace growth;
using namespace growth::randkit;

namespace {
double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}
} // namespace

TEST_CASE("pareto inverse transform hits the lower boundary at u = 1") {
    // x = xmin * u^(-1/mu), so the largest uniform maps to xmin itself.
    const ParetoParams p{1.0, 1.4};
    CHECK(p.xmin * std::pow(1.0, -1.0 / p.mu) == 1.0);
    const auto draws = sample_pareto(p, 100000, RngStream{1, 0});
    CHECK(*std::min_element(draws.begin(), draws.end()) >= p.xmin);
}

TEST_CASE("pareto sample median matches the closed-form quantile") {
    const auto draws = sample_pareto({1.0, 1.4}, 1000000, RngStream{2, 0});
    CHECK(median_of(draws) == doctest::Approx(std::pow(2.0, 1.0 / 1.4)).epsilon(0.006));
}

TEST_CASE("pareto tail index is recovered by the hill estimator") {
    const auto draws = sample_pareto({1.0, 1.4}, 1000000, RngStream{3, 0});
    const auto fit = stats::hill_estimator(draws, stats::hill_default_k(draws.size()));
    CHECK(std::abs(fit.exponent - 1.4) < 0.02);
}

TEST_CASE("pareto empirical CCDF at the median quantile is one half") {
    for (double mu : {0.5, 1.0, 1.7, 3.0}) {
        const auto draws = sample_pareto({2.0, mu}, 200000, RngStream{4, static_cast<std::uint64_t>(mu * 8)});
        const double q = 2.0 * std::pow(2.0, 1.0 / mu);
        double above = 0;
        for (double x : draws)
            if (x > q) above += 1;
        const double frac = above / static_cast<double>(draws.size());
        CHECK(std::abs(frac - 0.5) < 3.0 * 0.5 / std::sqrt(200000.0 / 4.0));
    }
}

TEST_CASE("pareto rejects invalid parameters") {
    CHECK_THROWS_AS(sample_pareto({0.0, 1.4}, 10, RngStream{}), parameter_error);
    CHECK_THROWS_AS(sample_pareto({1.0, -1.0}, 10, RngStream{}), parameter_error);
    CHECK_THROWS_AS(sample_pareto({1.0, 1.4}, 0, RngStream{}), parameter_error);
}

TEST_CASE("lognormal sample mean matches exp(1/2) for standard parameters") {
    const auto draws = sample_lognormal(0.0, 1.0, 1000000, RngStream{5, 0});
    double mean = 0;
    for (double x : draws) mean += x;
    mean /= static_cast<double>(draws.size());
    CHECK(mean == doctest::Approx(std::exp(0.5)).epsilon(0.006));
}

TEST_CASE("log of lognormal draws is Gaussian") {
    auto draws = sample_lognormal(0.3, 0.7, 1000000, RngStream{6, 0});
    for (double& x : draws) x = std::log(x);
    const double d = stats::ks_distance(
        draws, [](double x) { return normal_cdf(x, 0.3, 0.7); });
    CHECK(d < 0.005);
}

TEST_CASE("lognormal degenerates to a point as log_sd shrinks to zero") {
    const auto draws = sample_lognormal(1.5, 1e-300, 1000, RngStream{7, 0});
    for (double x : draws) CHECK(x == std::exp(1.5));
    CHECK_THROWS_AS(sample_lognormal(0.0, 0.0, 10, RngStream{}), parameter_error);
    CHECK_THROWS_AS(sample_lognormal(0.0, -1.0, 10, RngStream{}), parameter_error);
}

TEST_CASE("stable alpha = 2 is Gaussian with variance 2 under the S1 convention") {
    const auto draws = sample_stable({2.0, 0.0, 1.0, 0.0}, 1000000, RngStream{8, 0});
    const double d = stats::ks_distance(
        draws, [](double x) { return normal_cdf(x, 0.0, std::sqrt(2.0)); });
    CHECK(d < 0.005);
}

TEST_CASE("stable alpha = 2 forces Gaussian regardless of beta") {
    const auto draws = sample_stable({2.0, 0.9, 1.0, 0.0}, 200000, RngStream{9, 0});
    const double d = stats::ks_distance(
        draws, [](double x) { return normal_cdf(x, 0.0, std::sqrt(2.0)); });
    CHECK(d < 0.01);
}

TEST_CASE("stable alpha = 1, beta = 0 is standard Cauchy") {
    const auto draws = sample_stable({1.0, 0.0, 1.0, 0.0}, 1000000, RngStream{10, 0});
    const double d = stats::ks_distance(draws, [](double x) { return cauchy_cdf(x); });
    CHECK(d < 0.005);
}

TEST_CASE("stable alpha = 1.5 tail index matches alpha") {
    auto draws = sample_stable({1.5, 0.0, 1.0, 0.0}, 1000000, RngStream{11, 0});
    for (double& x : draws) x = std::abs(x);
    const auto fit = stats::hill_estimator(draws, stats::hill_default_k(draws.size()));
    CHECK(std::abs(fit.exponent - 1.5) < 0.05);
}

TEST_CASE("stable alpha = 2 has vanishing excess kurtosis") {
    const auto draws = sample_stable({2.0, 0.0, 1.0, 0.0}, 1000000, RngStream{12, 0});
    CHECK(std::abs(stats::excess_kurtosis(draws)) < 0.05);
}

TEST_CASE("stable alpha < 2 sample variance diverges with batch size") {
    // Median batch variance over independent batches grows as batches lengthen.
    const auto var_of = [](const std::vector<double>& v, std::size_t lo, std::size_t hi) {
        double m = 0;
        for (std::size_t i = lo; i < hi; ++i) m += v[i];
        m /= static_cast<double>(hi - lo);
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += (v[i] - m) * (v[i] - m);
        return s / static_cast<double>(hi - lo);
    };
    const auto draws = sample_stable({1.3, 0.0, 1.0, 0.0}, 1 << 20, RngStream{13, 0});
    std::vector<double> small_batches, large_batches;
    const std::size_t small = 1 << 10, large = 1 << 16;
    for (std::size_t lo = 0; lo + small <= draws.size() && small_batches.size() < 64; lo += small)
        small_batches.push_back(var_of(draws, lo, lo + small));
    for (std::size_t lo = 0; lo + large <= draws.size(); lo += large)
        large_batches.push_back(var_of(draws, lo, lo + large));
    CHECK(median_of(large_batches) > 4.0 * median_of(small_batches));
}

TEST_CASE("stable rejects out-of-range parameters") {
    CHECK_THROWS_AS(sample_stable({2.5, 0.0, 1.0, 0.0}, 10, RngStream{}), parameter_error);
    CHECK_THROWS_AS(sample_stable({1.0, 1.5, 1.0, 0.0}, 10, RngStream{}), parameter_error);
    CHECK_THROWS_AS(sample_stable({1.0, 0.0, 0.0, 0.0}, 10, RngStream{}), parameter_error);
}

TEST_CASE("discrete power law respects the support floor") {
    const auto draws = sample_discrete_power_law(1.2, 5, 100000, RngStream{14, 0});
    CHECK(*std::min_element(draws.begin(), draws.end()) == 5);
}

TEST_CASE("discrete power law tail index matches alpha") {
    const auto draws = sample_discrete_power_law(1.2, 1, 1000000, RngStream{15, 0});
    std::vector<double> v(draws.begin(), draws.end());
    const auto fit = stats::hill_estimator(v, stats::hill_default_k(v.size()));
    CHECK(std::abs(fit.exponent - 1.2) < 0.05);
}

TEST_CASE("discrete power law head probabilities have the exact mass ratio") {
    const auto draws = sample_discrete_power_law(1.2, 1, 1000000, RngStream{16, 0});
    double n1 = 0, n2 = 0;
    for (auto k : draws) {
        if (k == 1) n1 += 1;
        if (k == 2) n2 += 1;
    }
    CHECK(n1 / n2 == doctest::Approx(std::pow(2.0, 2.2)).epsilon(0.03));
}

TEST_CASE("discrete power law rejects non-positive exponents") {
    CHECK_THROWS_AS(sample_discrete_power_law(0.0, 1, 10, RngStream{}), parameter_error);
}

TEST_CASE("geometric mass at zero is 1/2 when the mean is one") {
    const auto draws = sample_geometric(1.0, 1000000, RngStream{17, 0});
    double zeros = 0;
    for (auto k : draws)
        if (k == 0) zeros += 1;
    CHECK(zeros / 1e6 == doctest::Approx(0.5).epsilon(0.004));
}

TEST_CASE("geometric collapses to zero as the mean vanishes") {
    const auto draws = sample_geometric(1e-300, 1000, RngStream{18, 0});
    for (auto k : draws) CHECK(k == 0);
    CHECK_THROWS_AS(sample_geometric(0.0, 10, RngStream{}), parameter_error);
    CHECK_THROWS_AS(sample_geometric(-1.0, 10, RngStream{}), parameter_error);
}

TEST_CASE("geometric log-CCDF is linear with slope -log 2 at mean one") {
    const auto draws = sample_geometric(1.0, 1000000, RngStream{19, 0});
    std::vector<double> counts(12, 0.0);
    for (auto k : draws)
        for (std::size_t j = 0; j < counts.size(); ++j)
            if (k > j) counts[j] += 1;
    // least squares of log CCDF(k) on k, k = 1..12
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const double x = static_cast<double>(j + 1);
        const double y = std::log(counts[j] / 1e6);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(counts.size());
    const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    CHECK(std::abs(slope + std::log(2.0)) / std::log(2.0) < 0.02);
}

TEST_CASE("zeta helper matches reference values") {
    CHECK(riemann_zeta(2.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
    CHECK(riemann_zeta(4.0) == doctest::Approx(1.0823232337111382).epsilon(1e-12));
    CHECK(riemann_zeta(1.5) == doctest::Approx(2.6123753486854883).epsilon(1e-12));
    CHECK(riemann_zeta(3.0) == doctest::Approx(1.2020569031595943).epsilon(1e-12));
}
