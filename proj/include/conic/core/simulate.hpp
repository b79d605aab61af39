#pragma once

// Mapped simulation of bounded martingales: simulate the latent diffusion
// dX = g^2/2 psi(X) dt + g dW with Euler and push every state through F, so
// paths respect the image interval by construction. Also the Phi analogue of
// the Doleans-Dade exponential, M(Z) = Phi(Z_t / sqrt(1 - [Z]_t)).

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "conic/core/mapping.hpp"
#include "conic/numerics/normal.hpp"
#include "conic/sde/engine.hpp"

namespace conic::core {

// mu(t,x) = g(t)^2/2 * psi(x) for the latent process of a given mapping.
template <class G>
auto latent_drift(const Mapping& m, G&& g) {
    return [psi = m.psi, g = std::forward<G>(g)](double t, double x) {
        const double gt = g(t);
        return 0.5 * gt * gt * psi(x);
    };
}

// sigma(t,y) = f(F^{-1}(y)) * eta(t, F^{-1}(y)); zero at the image endpoints.
// eta is expressed in the mapping's original (possibly decreasing) latent
// coordinates.
template <class Eta>
auto mapped_sigma(const Mapping& m, Eta&& eta) {
    return [m, eta = std::forward<Eta>(eta)](double t, double y) {
        if (y <= m.image.lo || y >= m.image.hi) return 0.0;
        const double u = m.inverse(y);
        return m.f(u) * eta(t, m.from_latent(u));
    };
}

// Simulate Y = F(X) with time-only latent volatility g. Once a path value
// rounds onto an image endpoint it stays there (absorption).
template <class G>
sde::PathSet simulate_conic(const Mapping& m, G&& g, double y0, const sde::TimeGrid& grid,
                            std::size_t n_paths, const sde::RngSpec& rng,
                            unsigned max_threads = 0) {
    require(m.image.interior(y0), "simulate_conic: y0 must lie in the interior of the image");
    require(n_paths >= 1, "simulate_conic: need n_paths >= 1");
    const double x0 = m.inverse(y0);
    const double lo = m.image.lo, hi = m.image.hi;

    sde::PathSet ps = sde::make_path_set(grid, n_paths, rng.seed, "simulate_conic");
    const std::size_t nt = grid.n_times();
    sde::parallel_for(
        n_paths,
        [&](std::size_t p_lo, std::size_t p_hi) {
            for (std::size_t p = p_lo; p < p_hi; ++p) {
                double x = x0;
                double y = y0;
                double* row = ps.values.data() + p * nt;
                row[0] = y;
                bool absorbed = false;
                for (std::size_t k = 0; k + 1 < nt; ++k) {
                    if (!absorbed) {
                        const double t = grid.times[k];
                        const double gt = g(t);
                        const double dt = grid.dt(k);
                        const double w = sde::normal_draw(rng, p, k);
                        x += 0.5 * gt * gt * m.psi(x) * dt + gt * std::sqrt(dt) * w;
                        if (!std::isfinite(x)) sde::detail::throw_non_finite("latent state", p, k);
                        y = m.F(x);
                        if (y <= lo) {
                            y = lo;
                            absorbed = true;
                        } else if (y >= hi) {
                            y = hi;
                            absorbed = true;
                        }
                    }
                    row[k + 1] = y;
                }
            }
        },
        max_threads);
    return ps;
}

// M(Z)_t = Phi(Z_t / sqrt(1 - [Z]_t)) for Z_t = z0 + int_0^t sigma(s) dW_s
// with deterministic sigma. Z is simulated exactly; the per-step increment
// variance matches the midpoint quadratic variation so the discrete process
// has mean Phi(z0) at every grid time.
template <class SigmaT>
sde::PathSet doleans_phi(SigmaT&& sigma_t, double z0, const sde::TimeGrid& grid,
                         std::size_t n_paths, const sde::RngSpec& rng,
                         unsigned max_threads = 0) {
    require(n_paths >= 1, "doleans_phi: need n_paths >= 1");
    require_finite(z0, "z0");
    const std::vector<double> qv = sde::quadratic_variation(sigma_t, grid);
    for (std::size_t k = 0; k < qv.size(); ++k) {
        if (qv[k] >= 1.0) {
            // locate tau = inf{t : [Z]_t = 1} by linear interpolation
            const double t_prev = grid.times[k - 1], t_cur = grid.times[k];
            const double tau =
                t_prev + (1.0 - qv[k - 1]) / (qv[k] - qv[k - 1]) * (t_cur - t_prev);
            throw std::domain_error("doleans_phi: grid extends past [Z]=1, tau ~= " +
                                    std::to_string(tau));
        }
    }

    sde::PathSet ps = sde::make_path_set(grid, n_paths, rng.seed, "doleans_phi");
    const std::size_t nt = grid.n_times();
    std::vector<double> step_sd(nt - 1), upsilon(nt);
    for (std::size_t k = 0; k + 1 < nt; ++k) step_sd[k] = std::sqrt(qv[k + 1] - qv[k]);
    for (std::size_t k = 0; k < nt; ++k) upsilon[k] = 1.0 / std::sqrt(1.0 - qv[k]);

    sde::parallel_for(
        n_paths,
        [&](std::size_t p_lo, std::size_t p_hi) {
            for (std::size_t p = p_lo; p < p_hi; ++p) {
                double z = z0;
                double* row = ps.values.data() + p * nt;
                row[0] = num::norm_cdf(z0);
                for (std::size_t k = 0; k + 1 < nt; ++k) {
                    z += step_sd[k] * sde::normal_draw(rng, p, k);
                    row[k + 1] = num::norm_cdf(z * upsilon[k + 1]);
                }
            }
        },
        max_threads);
    return ps;
}

// Max pointwise residual |mu(t,x) f(x) + g^2(t)/2 f'(x)| with f' taken by
// central differences; zero (to FD accuracy) exactly when Y = F(X) is
// driftless under the supplied latent drift.
template <class G>
double verify_driftless(const Mapping& m, G&& g, const std::vector<double>& x_samples,
                        std::optional<std::function<double(double, double)>> mu = std::nullopt,
                        double t_eval = 0.0) {
    auto drift = mu ? *mu : std::function<double(double, double)>(latent_drift(m, g));
    double worst = 0.0;
    for (double x : x_samples) {
        const double dx = 1e-5 * (1.0 + std::abs(x));
        const double fprime = (m.f(x + dx) - m.f(x - dx)) / (2.0 * dx);
        const double gt = g(t_eval);
        const double res = std::abs(drift(t_eval, x) * m.f(x) + 0.5 * gt * gt * fprime);
        worst = std::max(worst, res);
    }
    return worst;
}

}  // namespace conic::core
