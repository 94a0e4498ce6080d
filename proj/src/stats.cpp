#include "growth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "growth/errors.hpp"
#include "growth/parallel.hpp"

namespace growth::stats {

double DensityCurve::trapezoid_mass() const {
    double mass = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        mass += 0.5 * (points[i].density + points[i - 1].density) *
                (points[i].x - points[i - 1].x);
    return mass;
}

std::size_t hill_default_k(std::size_t n) {
    const auto k = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    return std::clamp<std::size_t>(k, 10, std::max<std::size_t>(10, n / 10));
}

FitResult hill_estimator(const std::vector<double>& samples, std::size_t k) {
    if (k < 10) throw parameter_error("hill: k must be >= 10");
    std::vector<double> pos;
    pos.reserve(samples.size());
    for (double x : samples)
        if (x > 0.0) pos.push_back(x);
    if (pos.size() < k + 1)
        throw insufficient_data_error("hill: need more than k positive samples");
    std::nth_element(pos.begin(), pos.end() - static_cast<std::ptrdiff_t>(k + 1),
                     pos.end());
    const double threshold = pos[pos.size() - k - 1];
    double mean_log = 0.0;
    for (std::size_t i = pos.size() - k; i < pos.size(); ++i)
        mean_log += std::log(pos[i] / threshold);
    mean_log /= static_cast<double>(k);
    if (!(mean_log > 0.0))
        throw degenerate_data_error("hill: no variation in the top order statistics");
    FitResult fit;
    fit.exponent = 1.0 / mean_log;
    fit.stderr_ = fit.exponent / std::sqrt(static_cast<double>(k));
    fit.n_points = k;
    fit.range_low = threshold;
    fit.range_high = *std::max_element(pos.end() - static_cast<std::ptrdiff_t>(k),
                                       pos.end());
    return fit;
}

FitResult fit_loglog_slope(const BinnedCurve& curve) {
    if (curve.points.size() < 3)
        throw insufficient_data_error("loglog fit: need at least 3 bins");
    std::vector<double> xs, ys;
    xs.reserve(curve.points.size());
    ys.reserve(curve.points.size());
    for (const BinPoint& p : curve.points) {
        if (!(p.center > 0.0) || !(p.value > 0.0))
            throw domain_error("loglog fit: centers and values must be positive");
        xs.push_back(std::log(p.center));
        ys.push_back(std::log(p.value));
    }
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw degenerate_data_error("loglog fit: degenerate abscissas");
    FitResult fit;
    fit.exponent = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ys[i] - my - fit.exponent * (xs[i] - mx);
        ss_res += resid * resid;
    }
    fit.stderr_ = n > 2 ? std::sqrt(ss_res / (static_cast<double>(n - 2) * sxx)) : 0.0;
    fit.n_points = n;
    fit.range_low = std::exp(*std::min_element(xs.begin(), xs.end()));
    fit.range_high = std::exp(*std::max_element(xs.begin(), xs.end()));
    return fit;
}

BinnedCurve size_volatility_curve(const models::GrowthPanel& panel,
                                  std::size_t n_bins, DispersionStat stat,
                                  std::uint64_t min_count) {
    if (panel.records.empty())
        throw insufficient_data_error("size_volatility_curve: empty panel");
    if (n_bins < 3) throw parameter_error("size_volatility_curve: need >= 3 bins");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& r : panel.records) {
        if (!std::isfinite(r.log_growth) || !(r.size_before > 0.0)) continue;
        lo = std::min(lo, r.size_before);
        hi = std::max(hi, r.size_before);
    }
    if (!(lo > 0.0) || !(hi > lo))
        throw insufficient_data_error("size_volatility_curve: no usable size range");
    const double log_lo = std::log(lo);
    const double width = (std::log(hi) - log_lo) / static_cast<double>(n_bins);
    struct Acc {
        double mean = 0.0, m2 = 0.0, sum_sq = 0.0, sum_abs = 0.0;
        std::uint64_t n = 0;
    };
    std::vector<Acc> acc(n_bins);
    for (const auto& r : panel.records) {
        if (!std::isfinite(r.log_growth) || !(r.size_before > 0.0)) continue;
        auto b = static_cast<std::size_t>((std::log(r.size_before) - log_lo) / width);
        b = std::min(b, n_bins - 1);
        Acc& slot = acc[b];
        ++slot.n;
        // Welford update keeps the sd exact for constant growth.
        const double delta = r.log_growth - slot.mean;
        slot.mean += delta / static_cast<double>(slot.n);
        slot.m2 += delta * (r.log_growth - slot.mean);
        slot.sum_sq += r.log_growth * r.log_growth;
        slot.sum_abs += std::abs(r.log_growth);
    }
    BinnedCurve curve;
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (acc[b].n < min_count) continue;
        const double n = static_cast<double>(acc[b].n);
        double value = 0.0;
        switch (stat) {
            case DispersionStat::mean_abs: value = acc[b].sum_abs / n; break;
            case DispersionStat::rms: value = std::sqrt(acc[b].sum_sq / n); break;
            case DispersionStat::sd: value = std::sqrt(acc[b].m2 / n); break;
        }
        curve.points.push_back(BinPoint{
            std::exp(log_lo + width * (static_cast<double>(b) + 0.5)), value,
            acc[b].n});
    }
    return curve;
}

DensityCurve kde_density(const std::vector<double>& samples, double bandwidth,
                         std::size_t grid_size) {
    if (samples.size() < 100)
        throw insufficient_data_error("kde: need at least 100 samples");
    if (grid_size < 2) throw parameter_error("kde: grid_size must be >= 2");
    const double n = static_cast<double>(samples.size());
    if (bandwidth <= 0.0) {
        std::vector<double> sorted(samples);
        std::sort(sorted.begin(), sorted.end());
        double mean = 0.0;
        for (double x : sorted) mean += x;
        mean /= n;
        double var = 0.0;
        for (double x : sorted) var += (x - mean) * (x - mean);
        var /= n;
        const double iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
        const double spread = std::min(std::sqrt(var), iqr / 1.34);
        bandwidth = 0.9 * spread * std::pow(n, -0.2);
    }
    if (!(bandwidth > 0.0))
        throw degenerate_data_error("kde: samples have no spread");
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    if (!(*mx > *mn)) throw degenerate_data_error("kde: samples have no spread");
    DensityCurve curve;
    curve.points.resize(grid_size);
    const double step = (*mx - *mn) / static_cast<double>(grid_size - 1);
    const double inv_h = 1.0 / bandwidth;
    const double norm = 1.0 / (n * bandwidth * 2.5066282746310005024);
    // Each grid point sums over all samples independently, so the result is
    // identical for any worker count.
    parallel_for(grid_size, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double x = *mn + step * static_cast<double>(i);
            double acc = 0.0;
            for (double s : samples) {
                const double z = (x - s) * inv_h;
                acc += std::exp(-0.5 * z * z);
            }
            curve.points[i] = DensityPoint{x, acc * norm};
        }
    });
    return curve;
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
    if (samples.size() < 1) throw insufficient_data_error("ks: empty sample");
    for (double x : samples)
        if (std::isnan(x)) throw domain_error("ks: NaN in samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double sup = 0.0;
    double prev_f = -1.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        if (f < prev_f - 1e-12) throw domain_error("ks: cdf not monotone on samples");
        prev_f = f;
        sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
        sup = std::max(sup, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return sup;
}

double excess_kurtosis(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 4) throw insufficient_data_error("kurtosis: need at least 4 samples");
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (!(m2 > 0.0)) throw degenerate_data_error("kurtosis: zero variance");
    const double g2 = m4 / (m2 * m2) - 3.0;
    const double nd = static_cast<double>(n);
    return ((nd + 1.0) * g2 + 6.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
}

double effective_units(const models::FirmComposition& c) {
    return 1.0 / models::herfindahl(c);
}

double sample_quantile(std::vector<double> samples, double q) {
    if (samples.empty()) throw insufficient_data_error("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw parameter_error("quantile: q must lie in [0, 1]");
    std::sort(samples.begin(), samples.end());
    const double pos = q * static_cast<double>(samples.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= samples.size()) return samples.back();
    const double frac = pos - static_cast<double>(i);
    return samples[i] * (1.0 - frac) + samples[i + 1] * frac;
}

} // namespace growth::stats
