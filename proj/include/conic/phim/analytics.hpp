#pragma once

// Closed-form statistics of the Phi-martingale Y = Phi(X), where X is the
// Vasicek-type latent process X_t = x0 e^{eta^2 t/2} + sqrt(e^{eta^2 t}-1) Z,
// plus the matching quantities for the exponential martingale used as a
// comparison.

#include <cmath>

#include "conic/common.hpp"
#include "conic/numerics/bivariate_normal.hpp"
#include "conic/numerics/normal.hpp"

namespace conic::phim {

struct PhiMartingaleParams {
    double y0;
    double eta;
    double x0;  // Phi^{-1}(y0)

    PhiMartingaleParams(double y0_, double eta_) : y0(y0_), eta(eta_) {
        require(y0 > 0.0 && y0 < 1.0, "PhiMartingaleParams: y0 must lie in (0,1)");
        require(eta >= 0.0 && std::isfinite(eta), "PhiMartingaleParams: eta must be finite, >= 0");
        x0 = num::norm_inv_cdf(y0);
    }
};

struct MeanStd {
    double mean;
    double std;
};

// Latent mean and standard deviation at time t.
inline MeanStd phi_mean_std(const PhiMartingaleParams& p, double t) {
    require(t >= 0.0, "phi_mean_std: t must be >= 0");
    const double a = p.eta * p.eta * t;
    return {p.x0 * std::exp(0.5 * a), std::sqrt(std::expm1(a))};
}

// CDF of Y_t; degenerates to a step at y0 when the latent spread is zero.
inline double phi_cdf(const PhiMartingaleParams& p, double t, double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    const auto [m, s] = phi_mean_std(p, t);
    if (s == 0.0) return y >= p.y0 ? 1.0 : 0.0;
    return num::norm_cdf((num::norm_inv_cdf(y) - m) / s);
}

// E[Y_t^2] = Phi2(x0, x0; 1 - e^{-eta^2 t}); the correlation is clamped just
// below 1 so the large-t limit Phi(x0) is reached without a degenerate call.
inline double phi_second_moment(const PhiMartingaleParams& p, double t) {
    require(t >= 0.0, "phi_second_moment: t must be >= 0");
    double rho = -std::expm1(-p.eta * p.eta * t);
    if (rho > 1.0 - 1e-16) rho = 1.0 - 1e-16;
    return num::bvn_cdf(p.x0, p.x0, rho);
}

inline double phi_variance(const PhiMartingaleParams& p, double t) {
    return phi_second_moment(p, t) - p.y0 * p.y0;
}

// Var[Y_{t+delta} - Y_t]: a difference of second moments.
inline double phi_increment_variance(const PhiMartingaleParams& p, double t, double delta) {
    require(delta >= 0.0, "phi_increment_variance: delta must be >= 0");
    const double v = phi_second_moment(p, t + delta) - phi_second_moment(p, t);
    return v > 0.0 ? v : 0.0;
}

inline double phi_quantile(const PhiMartingaleParams& p, double t, double prob) {
    require(prob > 0.0 && prob < 1.0, "phi_quantile: prob must lie in (0,1)");
    const auto [m, s] = phi_mean_std(p, t);
    if (s == 0.0) return p.y0;
    return num::norm_cdf(m + s * num::norm_inv_cdf(prob));
}

// Bernoulli parameter of the limiting law: P{Y_inf = 1} = y0.
inline double phi_asymptotic_law(const PhiMartingaleParams& p) { return p.y0; }

struct ExpMartingaleStats {
    double quantile;
    double increment_variance;
};

// For M_t = m0 e^{-eta^2 t/2 + eta W_t}: the p-quantile at time t and
// Var[M_t - M_s]. The variance uses m0^2 (squared initial value), verified
// against exact lognormal sampling.
inline ExpMartingaleStats exp_martingale_stats(double m0, double eta, double s, double t,
                                               double prob) {
    require(m0 > 0.0, "exp_martingale_stats: m0 must be > 0");
    require(eta >= 0.0, "exp_martingale_stats: eta must be >= 0");
    require(s >= 0.0 && s <= t, "exp_martingale_stats: need 0 <= s <= t");
    require(prob > 0.0 && prob < 1.0, "exp_martingale_stats: prob must lie in (0,1)");
    const double e2 = eta * eta;
    const double q =
        m0 * std::exp(eta * std::sqrt(t) * num::norm_inv_cdf(prob) - 0.5 * e2 * t);
    const double iv = m0 * m0 * std::exp(e2 * s) * std::expm1(e2 * (t - s));
    return {q, iv};
}

}  // namespace conic::phim
