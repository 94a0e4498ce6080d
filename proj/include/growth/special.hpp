#pragma once

#include <cmath>

#include "growth/errors.hpp"

namespace growth {

// Riemann zeta for real s > 1, Euler-Maclaurin with a direct head sum.
inline double riemann_zeta(double s) {
    if (!(s > 1.0)) throw domain_error("riemann_zeta requires s > 1");
    const int n = 1000;
    double sum = 0.0;
    for (int k = 1; k < n; ++k) sum += std::pow(static_cast<double>(k), -s);
    const double nd = n;
    sum += std::pow(nd, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(nd, -s);
    sum += s * std::pow(nd, -s - 1.0) / 12.0;
    sum -= s * (s + 1.0) * (s + 2.0) * std::pow(nd, -s - 3.0) / 720.0;
    return sum;
}

inline double normal_cdf(double x, double mean = 0.0, double sd = 1.0) {
    return 0.5 * std::erfc(-(x - mean) / (sd * 1.4142135623730950488));
}

inline double normal_pdf(double x, double mean = 0.0, double sd = 1.0) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * 2.5066282746310005024);
}

inline double laplace_cdf(double x, double scale) {
    return x < 0.0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

inline double cauchy_cdf(double x, double scale = 1.0) {
    return 0.5 + std::atan(x / scale) / 3.1415926535897932385;
}

inline double exponential_cdf(double x, double rate) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * x);
}

} // namespace growth
