#pragma once

// Stochastic survival-probability surface S_t(T) = Phi(m(t,T) + eta Z_t),
// driven by one exactly-sampled OU-type factor Z per path, and the running
// (Azema) process S_t = S_t(t) with its SDE coefficients.

#include <cmath>
#include <vector>

#include "conic/credit/survival_curve.hpp"
#include "conic/numerics/normal.hpp"
#include "conic/sde/engine.hpp"

namespace conic::credit {

struct SurvivalSurfaceParams {
    SurvivalCurve curve;
    double eta;

    SurvivalSurfaceParams(SurvivalCurve c, double eta_) : curve(std::move(c)), eta(eta_) {
        require(eta >= 0.0 && std::isfinite(eta), "SurvivalSurfaceParams: eta must be >= 0");
    }

    double x0(double T) const { return num::norm_inv_cdf(curve.survival(T)); }
    double m(double t, double T) const { return x0(T) * std::exp(0.5 * eta * eta * t); }
    // v(t) = e^{eta^2 t} - 1, the variance of eta Z_t
    double v(double t) const { return std::expm1(eta * eta * t); }
};

namespace detail {

// One exact step of the factor recursion Z_{t+dt} = Z_t e^{eta^2 dt/2} + eps,
// Var[eps] = (e^{eta^2 dt} - 1)/eta^2 so that Var[eta Z_t] = v(t).
struct FactorStep {
    double growth;
    double sd;
    FactorStep(double eta, double dt) {
        const double a = eta * eta;
        growth = std::exp(0.5 * a * dt);
        sd = a > 0.0 ? std::sqrt(std::expm1(a * dt) / a) : std::sqrt(dt);
    }
};

}  // namespace detail

// One PathSet per maturity, all driven by the same factor paths.
inline std::vector<sde::PathSet> simulate_surface(const SurvivalSurfaceParams& p,
                                                  const std::vector<double>& maturities,
                                                  const sde::TimeGrid& grid, std::size_t n_paths,
                                                  const sde::RngSpec& rng,
                                                  unsigned max_threads = 0) {
    require(n_paths >= 1, "simulate_surface: need n_paths >= 1");
    require_arg(!maturities.empty(), "simulate_surface: need at least one maturity");
    for (double T : maturities)
        require(T > 0.0 && std::isfinite(T), "simulate_surface: maturities must be > 0");

    const std::size_t nt = grid.n_times();
    const std::size_t nj = maturities.size();

    // m(t_k, T_j) tabulated once
    std::vector<double> m_kj(nt * nj);
    for (std::size_t k = 0; k < nt; ++k) {
        const double growth = std::exp(0.5 * p.eta * p.eta * grid.times[k]);
        for (std::size_t j = 0; j < nj; ++j) m_kj[k * nj + j] = p.x0(maturities[j]) * growth;
    }
    std::vector<detail::FactorStep> steps;
    steps.reserve(nt - 1);
    for (std::size_t k = 0; k + 1 < nt; ++k) steps.emplace_back(p.eta, grid.dt(k));

    std::vector<sde::PathSet> out;
    out.reserve(nj);
    for (std::size_t j = 0; j < nj; ++j)
        out.push_back(sde::make_path_set(grid, n_paths, rng.seed,
                                         "surface_T=" + std::to_string(maturities[j])));

    sde::parallel_for(
        n_paths,
        [&](std::size_t p_lo, std::size_t p_hi) {
            for (std::size_t path = p_lo; path < p_hi; ++path) {
                double z = 0.0;
                for (std::size_t k = 0; k < nt; ++k) {
                    if (k > 0) {
                        const auto& st = steps[k - 1];
                        z = z * st.growth + st.sd * sde::normal_draw(rng, path, k - 1);
                    }
                    const double ez = p.eta * z;
                    for (std::size_t j = 0; j < nj; ++j)
                        out[j].values[path * nt + k] = num::norm_cdf(m_kj[k * nj + j] + ez);
                }
            }
        },
        max_threads);
    return out;
}

struct AzemaCoefficients {
    double zeta;       // multiplies dS0(t)
    double diffusion;  // eta phi(Phi^{-1}(S_t))
};

// Coefficients of dS_t = zeta_t dS0(t) + eta phi(Phi^{-1}(S_t)) dW_t.
// The s_t -> 1 limit (only reachable at t = 0, where S0(0) = 1 as well)
// returns the cancellation value zeta = e^{eta^2 t/2}, diffusion = 0.
inline AzemaCoefficients azema_coefficients(const SurvivalSurfaceParams& p, double t,
                                            double s_t) {
    require(t >= 0.0, "azema_coefficients: t must be >= 0");
    require(s_t > 0.0 && s_t <= 1.0, "azema_coefficients: s_t must lie in (0,1]");
    const double growth = std::exp(0.5 * p.eta * p.eta * t);
    const double s0 = p.curve.survival(t);
    if (s_t >= 1.0) return {growth, 0.0};
    const double num_phi = num::norm_pdf(num::norm_inv_cdf(s_t));
    const double den_phi = s0 >= 1.0 ? num_phi : num::norm_pdf(num::norm_inv_cdf(s0));
    return {num_phi * growth / den_phi, p.eta * num_phi};
}

struct AzemaComparison {
    double mean_sup_error = 0.0;   // mean over paths of sup_t |euler - exact|
    double max_sup_error = 0.0;
};

// Euler discretization of the running-survival SDE against the exact factor
// representation, driven by the same normal draws. Used for strong-order
// refinement studies.
inline AzemaComparison azema_euler_vs_exact(const SurvivalSurfaceParams& p, double horizon,
                                            std::size_t n_steps, std::size_t n_paths,
                                            const sde::RngSpec& rng, unsigned max_threads = 0) {
    const sde::TimeGrid grid = sde::TimeGrid::uniform(horizon, n_steps);
    const std::size_t nt = grid.n_times();
    std::vector<detail::FactorStep> steps;
    steps.reserve(nt - 1);
    for (std::size_t k = 0; k + 1 < nt; ++k) steps.emplace_back(p.eta, grid.dt(k));
    std::vector<double> s0_grid(nt), m_tt(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        s0_grid[k] = p.curve.survival(grid.times[k]);
        m_tt[k] = k == 0 ? 0.0 : p.m(grid.times[k], grid.times[k]);
    }

    std::vector<double> sup_err(n_paths, 0.0);
    sde::parallel_for(
        n_paths,
        [&](std::size_t p_lo, std::size_t p_hi) {
            for (std::size_t path = p_lo; path < p_hi; ++path) {
                double z = 0.0;
                double s_euler = 1.0;
                double worst = 0.0;
                for (std::size_t k = 0; k + 1 < nt; ++k) {
                    const double t = grid.times[k];
                    const auto coeff = azema_coefficients(p, t, s_euler);
                    const double w = sde::normal_draw(rng, path, k);
                    const auto& st = steps[k];
                    s_euler += coeff.zeta * (s0_grid[k + 1] - s0_grid[k]) +
                               coeff.diffusion * std::sqrt(grid.dt(k)) * w;
                    s_euler = std::clamp(s_euler, 1e-15, 1.0);
                    z = z * st.growth + st.sd * w;
                    const double s_exact = num::norm_cdf(m_tt[k + 1] + p.eta * z);
                    worst = std::max(worst, std::abs(s_euler - s_exact));
                }
                sup_err[path] = worst;
            }
        },
        max_threads);

    AzemaComparison cmp;
    for (double e : sup_err) {
        cmp.mean_sup_error += e;
        cmp.max_sup_error = std::max(cmp.max_sup_error, e);
    }
    cmp.mean_sup_error /= static_cast<double>(n_paths);
    return cmp;
}

}  // namespace conic::credit
