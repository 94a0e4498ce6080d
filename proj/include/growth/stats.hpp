#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "growth/firm.hpp"
#include "growth/models.hpp"

namespace growth::stats {

using models::FitResult;

struct DensityPoint {
    double x = 0.0;
    double density = 0.0;
};

// Grid of (abscissa, density) pairs with strictly increasing abscissas.
struct DensityCurve {
    std::vector<DensityPoint> points;
    double trapezoid_mass() const;
};

struct BinPoint {
    double center = 0.0;
    double value = 0.0;
    std::uint64_t count = 0;
};

struct BinnedCurve {
    std::vector<BinPoint> points;
};

enum class DispersionStat { mean_abs, rms, sd };

// Default Hill order-statistic count: n^(2/3) clamped to [10, n/10].
std::size_t hill_default_k(std::size_t n);

// Hill tail-index estimate from the top k order statistics of the positive
// samples. Estimates the CCDF exponent m of P(X > x) ~ x^-m; a density
// quoted as x^-(1+m) therefore corresponds to a Hill estimate of m.
FitResult hill_estimator(const std::vector<double>& samples, std::size_t k);

// Least-squares slope of log(value) on log(center).
FitResult fit_loglog_slope(const BinnedCurve& curve);

// Dispersion of log growth in logarithmic size bins. Bins under the minimum
// occupancy are dropped; records with non-finite log growth are skipped.
BinnedCurve size_volatility_curve(const models::GrowthPanel& panel,
                                  std::size_t n_bins, DispersionStat stat,
                                  std::uint64_t min_count = 30);

// Gaussian kernel density on an evenly spaced grid over [min, max] of the
// samples. bandwidth <= 0 selects 0.9 * min(sd, IQR/1.34) * n^(-1/5).
DensityCurve kde_density(const std::vector<double>& samples, double bandwidth,
                         std::size_t grid_size);

// Two-sided sup distance between the empirical CDF and a reference CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

// Bias-corrected sample excess kurtosis.
double excess_kurtosis(const std::vector<double>& samples);

// Effective number of independent units, 1/H.
double effective_units(const models::FirmComposition& c);

// Interpolated sample quantile (expects 0 <= q <= 1).
double sample_quantile(std::vector<double> samples, double q);

} // namespace growth::stats
