#pragma once

// Standard bivariate normal CDF Phi2(x,y;rho) and its first partials.
//
// Phi2 is evaluated from the single-integral reduction
//   Phi2(x,y;rho) = Phi(x)Phi(y)
//                 + 1/(2pi) int_0^{asin rho} exp(-(x^2+y^2-2xy sin t)/(2cos^2 t)) dt
// with Gauss-Legendre on the bulk of the correlation range and a tanh-sinh
// tail segment as |rho| -> 1, plus exact branches at rho in {-1,0,1}.

#include <algorithm>
#include <cmath>

#include "conic/common.hpp"
#include "conic/numerics/normal.hpp"
#include "conic/numerics/quadrature.hpp"

namespace conic::num {

namespace detail {

inline const QuadratureRule& bvn_gl_rule(int n) {
    static const QuadratureRule r20 = gauss_legendre(20);
    static const QuadratureRule r48 = gauss_legendre(48);
    return n <= 20 ? r20 : r48;
}

inline double bvn_theta_integral(double x, double y, double t_lo, double t_hi,
                                 const QuadratureRule& rule) {
    const double quad = 0.5 * (x * x + y * y);
    auto f = [&](double t) {
        const double ct = std::cos(t);
        return std::exp((x * y * std::sin(t) - quad) / (ct * ct));
    };
    return integrate_gl(f, t_lo, t_hi, rule);
}

}  // namespace detail

inline double bvn_cdf(double x, double y, double rho) {
    require(rho >= -1.0 && rho <= 1.0, "bvn_cdf: rho must lie in [-1,1]");
    require(!std::isnan(x) && !std::isnan(y), "bvn_cdf: NaN argument");

    // +-inf sentinels collapse to univariate or trivial values
    if (std::isinf(x) || std::isinf(y)) {
        if ((std::isinf(x) && x < 0.0) || (std::isinf(y) && y < 0.0)) return 0.0;
        if (std::isinf(x) && std::isinf(y)) return 1.0;
        return std::isinf(x) ? norm_cdf(y) : norm_cdf(x);
    }

    if (rho == 0.0) return norm_cdf(x) * norm_cdf(y);
    if (rho == 1.0) return norm_cdf(std::min(x, y));
    if (rho == -1.0) return std::max(0.0, norm_cdf(x) + norm_cdf(y) - 1.0);

    const double product = norm_cdf(x) * norm_cdf(y);
    const double alpha = std::asin(rho);
    double corr;
    if (std::abs(rho) <= 0.925) {
        const int n = std::abs(rho) <= 0.6 ? 20 : 48;
        corr = detail::bvn_theta_integral(x, y, 0.0, alpha, detail::bvn_gl_rule(n));
    } else {
        // bulk up to |rho0| with Gauss-Legendre, boundary-layer tail with tanh-sinh
        const double rho0 = std::copysign(0.925, rho);
        const double alpha0 = std::asin(rho0);
        corr = detail::bvn_theta_integral(x, y, 0.0, alpha0, detail::bvn_gl_rule(48));
        const double quad = 0.5 * (x * x + y * y);
        auto f = [&](double t) {
            const double ct = std::cos(t);
            return std::exp((x * y * std::sin(t) - quad) / (ct * ct));
        };
        corr += integrate_tanh_sinh(f, alpha0, alpha, 1e-13, 11);
    }
    const double val = product + corr / (2.0 * M_PI);
    return std::clamp(val, 0.0, 1.0);
}

struct BvnPartials {
    double h;  // d Phi2 / dx = phi(x) Phi((y - rho x)/sqrt(1-rho^2))
    double g;  // d^2 Phi2 / dx dy = phi(x) phi((y - rho x)/sqrt(1-rho^2)) / sqrt(1-rho^2)
};

inline BvnPartials bvn_partials(double x, double y, double rho) {
    require(std::abs(rho) < 1.0, "bvn_partials: degenerate correlation |rho| = 1");
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
    const double u = (y - rho * x) / s;
    return {norm_pdf(x) * norm_cdf(u), norm_pdf(x) * norm_pdf(u) / s};
}

}  // namespace conic::num
