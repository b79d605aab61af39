#pragma once

// Bivariate Gaussian-copula survival martingale
//   G_t(T1,T2) = Phi2(X^1_t(T1), X^2_t(T2); r)
// with correlated latent factors and the drift-kill copula correlation
//   r = 2 rho eta1 eta2 / (eta1^2 + eta2^2).

#include <cmath>
#include <optional>
#include <vector>

#include "conic/credit/surface.hpp"
#include "conic/numerics/bivariate_normal.hpp"

namespace conic::credit {

struct BivariateParams {
    SurvivalCurve curve1, curve2;
    double eta1, eta2;
    double rho;  // Brownian correlation

    BivariateParams(SurvivalCurve c1, SurvivalCurve c2, double e1, double e2, double rho_)
        : curve1(std::move(c1)), curve2(std::move(c2)), eta1(e1), eta2(e2), rho(rho_) {
        require(eta1 >= 0.0 && eta2 >= 0.0, "BivariateParams: volatilities must be >= 0");
        require(rho >= -1.0 && rho <= 1.0, "BivariateParams: rho must lie in [-1,1]");
    }

    double mu1() const { return 0.5 * eta1 * eta1; }
    double mu2() const { return 0.5 * eta2 * eta2; }
};

// The only copula correlation that keeps G a martingale.
inline double copula_correlation(const BivariateParams& b) {
    require(b.eta1 > 0.0 || b.eta2 > 0.0, "copula_correlation: etas must not both be zero");
    return 2.0 * b.rho * b.eta1 * b.eta2 / (b.eta1 * b.eta1 + b.eta2 * b.eta2);
}

struct BivariatePaths {
    sde::PathSet G;   // joint survival martingale
    sde::PathSet S1;  // marginal surface 1 at T1
    sde::PathSet S2;  // marginal surface 2 at T2
    double r = 0.0;   // copula correlation used
};

// Exact joint simulation. T1/T2 may be fixed maturities or, when
// running_maturity is true, the running time (G_t(t,t)). override_r replaces
// the drift-kill correlation (negative-control studies).
inline BivariatePaths simulate_bivariate(const BivariateParams& b, double T1, double T2,
                                         const sde::TimeGrid& grid, std::size_t n_paths,
                                         const sde::RngSpec& rng,
                                         std::optional<double> override_r = std::nullopt,
                                         bool running_maturity = false,
                                         unsigned max_threads = 0) {
    require(n_paths >= 1, "simulate_bivariate: need n_paths >= 1");
    if (!running_maturity)
        require(T1 > 0.0 && T2 > 0.0, "simulate_bivariate: maturities must be > 0");

    const double r = override_r ? *override_r : copula_correlation(b);
    require(r >= -1.0 && r <= 1.0, "simulate_bivariate: copula correlation outside [-1,1]");

    const std::size_t nt = grid.n_times();
    BivariatePaths out{sde::make_path_set(grid, n_paths, rng.seed, "bivariate_G"),
                       sde::make_path_set(grid, n_paths, rng.seed, "bivariate_S1"),
                       sde::make_path_set(grid, n_paths, rng.seed, "bivariate_S2"), r};

    // per-step joint Gaussian increments of the two OU factors
    const double mu1 = b.mu1(), mu2 = b.mu2();
    std::vector<double> g1(nt - 1), g2(nt - 1), sd1(nt - 1), sd2(nt - 1), r12(nt - 1);
    for (std::size_t k = 0; k + 1 < nt; ++k) {
        const double dt = grid.dt(k);
        g1[k] = std::exp(mu1 * dt);
        g2[k] = std::exp(mu2 * dt);
        const double v1 = mu1 > 0.0 ? std::expm1(2.0 * mu1 * dt) / (2.0 * mu1) : dt;
        const double v2 = mu2 > 0.0 ? std::expm1(2.0 * mu2 * dt) / (2.0 * mu2) : dt;
        const double ms = mu1 + mu2;
        const double cov = b.rho * (ms > 0.0 ? std::expm1(ms * dt) / ms : dt);
        sd1[k] = std::sqrt(v1);
        sd2[k] = std::sqrt(v2);
        r12[k] = (sd1[k] > 0.0 && sd2[k] > 0.0) ? cov / (sd1[k] * sd2[k]) : 0.0;
    }

    // m_i(t_k, T_i) with T fixed or running
    std::vector<double> m1(nt), m2(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        const double t = grid.times[k];
        const double Ti1 = running_maturity ? t : T1;
        const double Ti2 = running_maturity ? t : T2;
        const double x01 = (running_maturity && t == 0.0)
                               ? kInf
                               : num::norm_inv_cdf(b.curve1.survival(Ti1));
        const double x02 = (running_maturity && t == 0.0)
                               ? kInf
                               : num::norm_inv_cdf(b.curve2.survival(Ti2));
        m1[k] = x01 * std::exp(mu1 * t);
        m2[k] = x02 * std::exp(mu2 * t);
    }

    sde::parallel_for(
        n_paths,
        [&](std::size_t p_lo, std::size_t p_hi) {
            for (std::size_t path = p_lo; path < p_hi; ++path) {
                double z1 = 0.0, z2 = 0.0;
                for (std::size_t k = 0; k < nt; ++k) {
                    if (k > 0) {
                        const double w1 = sde::normal_draw(rng, path, k - 1, 0);
                        const double w2 = sde::normal_draw(rng, path, k - 1, 1);
                        const double c = r12[k - 1];
                        const double e1 = sd1[k - 1] * w1;
                        const double e2 = sd2[k - 1] * (c * w1 + std::sqrt(1.0 - c * c) * w2);
                        z1 = z1 * g1[k - 1] + e1;
                        z2 = z2 * g2[k - 1] + e2;
                    }
                    const double x1 = m1[k] + b.eta1 * z1;
                    const double x2 = m2[k] + b.eta2 * z2;
                    const double s1 = std::isinf(m1[k]) ? 1.0 : num::norm_cdf(x1);
                    const double s2 = std::isinf(m2[k]) ? 1.0 : num::norm_cdf(x2);
                    const std::size_t idx = path * nt + k;
                    out.S1.values[idx] = s1;
                    out.S2.values[idx] = s2;
                    out.G.values[idx] = num::bvn_cdf(x1, x2, r);
                }
            }
        },
        max_threads);
    return out;
}

// Convenience wrapper: the joint martingale paths only.
inline sde::PathSet bivariate_surface(const BivariateParams& b, double T1, double T2,
                                      const sde::TimeGrid& grid, std::size_t n_paths,
                                      const sde::RngSpec& rng,
                                      std::optional<double> override_r = std::nullopt,
                                      unsigned max_threads = 0) {
    return simulate_bivariate(b, T1, T2, grid, n_paths, rng, override_r).G;
}

struct BivariateAzemaCoefficients {
    double xi1;
    double xi2;
};

// xi^i = e^{mu_i t} h(Phi^{-1}(S^i), Phi^{-1}(S^j), r) / phi(Phi^{-1}(S0^i(t))),
// the drift-correction coefficients of the running bivariate process.
inline BivariateAzemaCoefficients bivariate_azema_coefficients(const BivariateParams& b,
                                                               double t, double s1, double s2) {
    require(s1 > 0.0 && s1 < 1.0 && s2 > 0.0 && s2 < 1.0,
            "bivariate_azema_coefficients: s1, s2 must lie in (0,1)");
    require(t >= 0.0, "bivariate_azema_coefficients: t must be >= 0");
    const double r = copula_correlation(b);
    const double u1 = num::norm_inv_cdf(s1);
    const double u2 = num::norm_inv_cdf(s2);
    const double h12 = num::bvn_partials(u1, u2, r).h;
    const double h21 = num::bvn_partials(u2, u1, r).h;
    // at t = 0 the curve value is 1 and the density ratio is taken as the
    // cancellation limit against the state value
    const double s01 = b.curve1.survival(t), s02 = b.curve2.survival(t);
    const double d1 = s01 >= 1.0 ? num::norm_pdf(u1) : num::norm_pdf(num::norm_inv_cdf(s01));
    const double d2 = s02 >= 1.0 ? num::norm_pdf(u2) : num::norm_pdf(num::norm_inv_cdf(s02));
    return {std::exp(b.mu1() * t) * h12 / d1, std::exp(b.mu2() * t) * h21 / d2};
}

}  // namespace conic::credit
