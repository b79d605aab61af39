#pragma once

// Standard normal density, distribution and quantile functions.

#include <cmath>

#include "conic/common.hpp"

namespace conic::num {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684759;
inline constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490392848;
inline constexpr double kSqrt2Pi = 2.5066282746310005024157652848110452530070;

inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Phi(x) through the complementary error function; interior absolute error
// is at the few-ulp level of erfc, well inside the 1e-12 budget.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

// log Phi(x), usable deep in the lower tail where norm_cdf underflows.
inline double log_norm_cdf(double x) {
    if (x > -8.0) return std::log(norm_cdf(x));
    // Asymptotic expansion of Mills ratio: Phi(x) ~ phi(x)/|x| (1 - 1/x^2 + 3/x^4 - ...)
    const double x2 = x * x;
    const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x * kSqrt2Pi) + std::log(series);
}

// Quantile: rational lower-tail seed (Abramowitz-Stegun 26.2.23) polished by
// Halley iterations on norm_cdf. Round-trips against norm_cdf to ~1e-15.
inline double norm_inv_cdf(double p) {
    require(p > 0.0 && p < 1.0, "norm_inv_cdf: p must lie in (0,1)");
    if (p == 0.5) return 0.0;
    const bool upper = p > 0.5;
    const double q = upper ? 1.0 - p : p;

    const double t = std::sqrt(-2.0 * std::log(q));
    double x = -(t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                         (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308))));

    for (int iter = 0; iter < 3; ++iter) {
        const double err = norm_cdf(x) - q;
        const double u = err / norm_pdf(x);
        const double step = u / (1.0 + 0.5 * x * u);
        x -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(x))) break;
    }
    return upper ? -x : x;
}

}  // namespace conic::num
