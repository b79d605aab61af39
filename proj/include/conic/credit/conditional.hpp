#pragma once

// Survival probability conditional on no default up to t:
//   Q(t,T;z) = Phi(m(t,T) + sqrt(v(t)) z) / Phi(m(t,t) + sqrt(v(t)) z),
// its Gauss-Hermite expectation over the standardized factor, and the exact
// CDF of Q_t(T) through the unique root of
//   G(z) = x Phi(m(t,t) + sqrt(v) z) - Phi(m(t,T) + sqrt(v) z).

#include <cmath>

#include "conic/credit/surface.hpp"
#include "conic/numerics/quadrature.hpp"
#include "conic/numerics/roots.hpp"

namespace conic::credit {

inline double conditional_survival(const SurvivalSurfaceParams& p, double t, double T,
                                   double z) {
    require(T >= t && t >= 0.0, "conditional_survival: need T >= t >= 0");
    if (T == t) return 1.0;
    const double ratio = p.curve.survival(T) / p.curve.survival(t);
    const double v = p.v(t);
    if (v <= 0.0) return ratio;  // frozen factor (eta = 0 or t = 0)
    const double sv = std::sqrt(v);
    const double num_cdf = num::norm_cdf(p.m(t, T) + sv * z);
    const double den_cdf = num::norm_cdf(p.m(t, t) + sv * z);
    if (den_cdf <= 0.0) return ratio;  // both tails vanish; deterministic limit
    return num_cdf / den_cdf;
}

inline double expected_conditional_survival(const SurvivalSurfaceParams& p, double t, double T,
                                            int n_quad = 16) {
    require(T >= t && t >= 0.0, "expected_conditional_survival: need T >= t >= 0");
    if (T == t) return 1.0;
    if (p.v(t) <= 0.0) return p.curve.survival(T) / p.curve.survival(t);
    const num::QuadratureRule rule = num::gauss_hermite(n_quad);
    double acc = 0.0;
    for (int i = 0; i < rule.order; ++i)
        acc += rule.weights[i] * conditional_survival(p, t, T, rule.nodes[i]);
    return acc;
}

// CDF of Q_t(T) at x: Phi(z*) with G(z*) = 0. Boundary conventions F(0) = 0,
// F(1) = 1; for eta = 0 the law is a point mass at S0(T)/S0(t).
inline double q_cdf(const SurvivalSurfaceParams& p, double t, double T, double x) {
    require(T >= t && t > 0.0, "q_cdf: need T >= t > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double s0T = p.curve.survival(T), s0t = p.curve.survival(t);
    require(s0T < s0t, "q_cdf: requires S0(T) < S0(t)");
    const double v = p.v(t);
    if (v <= 0.0) return x >= s0T / s0t ? 1.0 : 0.0;  // degenerate point mass

    const double sv = std::sqrt(v);
    const double mtt = p.m(t, t), mtT = p.m(t, T);
    auto G = [&](double z) {
        return x * num::norm_cdf(mtt + sv * z) - num::norm_cdf(mtT + sv * z);
    };

    double lo = -10.0, hi = 10.0;
    while (G(lo) <= 0.0 && lo > -60.0) lo *= 2.0;
    while (G(hi) >= 0.0 && hi < 60.0) hi *= 2.0;
    if (G(lo) <= 0.0 || G(hi) >= 0.0)
        throw std::runtime_error("q_cdf: failed to bracket the root of G within |z| <= 60");
    const double z_star = num::find_root_bracketed(G, lo, hi, 1e-12);
    return num::norm_cdf(z_star);
}

}  // namespace conic::credit
