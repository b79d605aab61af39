#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: an erf power series in extended precision, double factorials, and
// a brute-force 2-D quadrature of the bivariate normal density.

#include <cmath>
#include <cstddef>

namespace oracles {

// erf(x) = 2/sqrt(pi) sum (-1)^n x^(2n+1) / (n! (2n+1)), long double terms.
inline long double erf_series(long double x) {
    const long double two_over_sqrt_pi = 1.1283791670955125738961589031215L;
    long double term = x, sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= -x * x / n;
        const long double c = term / (2 * n + 1);
        sum += c;
        if (std::abs(c) < 1e-30L * std::abs(sum)) break;
    }
    return two_over_sqrt_pi * sum;
}

inline double norm_cdf_series(double x) {
    // Phi(x) = (1 + erf(x/sqrt(2)))/2; the series is accurate for |x| <= ~7
    const long double inv_sqrt2 = 0.70710678118654752440084436210485L;
    return static_cast<double>(0.5L * (1.0L + erf_series(x * inv_sqrt2)));
}

inline double double_factorial_odd(int n) {  // n!! for odd n
    double v = 1.0;
    for (int k = n; k >= 1; k -= 2) v *= k;
    return v;
}

// Adaptive Simpson in one dimension (independent of the library's).
template <class F>
double simpson(F&& f, double a, double b, double tol, int depth = 30) {
    auto rec = [&](auto&& self, double lo, double hi, double flo, double fm, double fhi,
                   double whole, double eps, int d) -> double {
        const double m = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fm);
        const double right = (hi - m) / 6.0 * (fm + 4.0 * frm + fhi);
        const double delta = left + right - whole;
        if (d <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
        return self(self, lo, m, flo, flm, fm, left, 0.5 * eps, d - 1) +
               self(self, m, hi, fm, frm, fhi, right, 0.5 * eps, d - 1);
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(rec, a, b, fa, fm, fb, whole, tol, depth);
}

// Phi2(x, y; rho) by iterated adaptive quadrature over the joint density.
inline double bvn_cdf_bruteforce(double x, double y, double rho, double tol = 1e-10) {
    const double s = std::sqrt(1.0 - rho * rho);
    const double norm = 1.0 / (2.0 * M_PI * s);
    auto inner = [&](double u) {
        auto density = [&](double v) {
            return norm *
                   std::exp(-(u * u - 2.0 * rho * u * v + v * v) / (2.0 * (1.0 - rho * rho)));
        };
        const double lo = std::min(y, -8.5);
        return simpson(density, lo - 0.5, y, tol * 0.05);
    };
    const double lo = std::min(x, -8.5);
    return simpson(inner, lo - 0.5, x, tol * 0.05);
}

}  // namespace oracles
