#pragma once

// Monte-Carlo path generation: Euler-Maruyama for driftless and drifted SDEs,
// exact sampling of the Vasicek-type latent process, and deterministic
// quadratic variation. Paths are generated in parallel; draws come from the
// counter-based generator so results do not depend on the thread count.

#include <cmath>
#include <string>
#include <vector>

#include "conic/sde/parallel.hpp"
#include "conic/sde/path_set.hpp"
#include "conic/sde/rng.hpp"
#include "conic/sde/time_grid.hpp"

namespace conic::sde {

namespace detail {

[[noreturn]] inline void throw_non_finite(const char* what, std::size_t path, std::size_t step) {
    throw std::runtime_error(std::string("sde: non-finite ") + what + " at path " +
                             std::to_string(path) + ", step " + std::to_string(step));
}

}  // namespace detail

// dY = sigma(t, Y) dW, Euler scheme: Y_{k+1} = Y_k + sigma(t_k, Y_k) sqrt(dt) w.
template <class SigmaFn>
PathSet euler_driftless(SigmaFn&& sigma, double y0, const TimeGrid& grid, std::size_t n_paths,
                        const RngSpec& rng, unsigned max_threads = 0) {
    require(n_paths >= 1, "euler_driftless: need n_paths >= 1");
    require_finite(y0, "y0");
    PathSet ps = make_path_set(grid, n_paths, rng.seed, "euler_driftless");
    const std::size_t nt = grid.n_times();
    parallel_for(
        n_paths,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                double y = y0;
                double* row = ps.values.data() + p * nt;
                row[0] = y;
                for (std::size_t k = 0; k + 1 < nt; ++k) {
                    const double s = sigma(grid.times[k], y);
                    if (!std::isfinite(s)) detail::throw_non_finite("sigma", p, k);
                    const double w = normal_draw(rng, p, k);
                    y += s * std::sqrt(grid.dt(k)) * w;
                    if (!std::isfinite(y)) detail::throw_non_finite("state", p, k);
                    row[k + 1] = y;
                }
            }
        },
        max_threads);
    return ps;
}

// dX = mu(t, X) dt + eta(t, X) dW. Shares the (path, step) draw stream with
// euler_driftless, so mu == 0 reproduces it bit-for-bit.
template <class MuFn, class EtaFn>
PathSet euler_drifted(MuFn&& mu, EtaFn&& eta, double x0, const TimeGrid& grid,
                      std::size_t n_paths, const RngSpec& rng, unsigned max_threads = 0) {
    require(n_paths >= 1, "euler_drifted: need n_paths >= 1");
    require_finite(x0, "x0");
    PathSet ps = make_path_set(grid, n_paths, rng.seed, "euler_drifted");
    const std::size_t nt = grid.n_times();
    parallel_for(
        n_paths,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                double x = x0;
                double* row = ps.values.data() + p * nt;
                row[0] = x;
                for (std::size_t k = 0; k + 1 < nt; ++k) {
                    const double t = grid.times[k];
                    const double m = mu(t, x);
                    const double s = eta(t, x);
                    if (!std::isfinite(m) || !std::isfinite(s))
                        detail::throw_non_finite("coefficient", p, k);
                    const double dt = grid.dt(k);
                    const double w = normal_draw(rng, p, k);
                    x += m * dt + s * std::sqrt(dt) * w;
                    if (!std::isfinite(x)) detail::throw_non_finite("state", p, k);
                    row[k + 1] = x;
                }
            }
        },
        max_threads);
    return ps;
}

// i.i.d. draws of X_t = x0 e^{eta^2 t / 2} + sqrt(e^{eta^2 t} - 1) Z at a
// fixed time; the exact law of the Vasicek-type latent process.
inline std::vector<double> sample_vasicek_exact(double x0, double eta, double t, std::size_t n,
                                                const RngSpec& rng, unsigned max_threads = 0) {
    require(eta >= 0.0, "sample_vasicek_exact: eta must be >= 0");
    require(t >= 0.0, "sample_vasicek_exact: t must be >= 0");
    const double mean = x0 * std::exp(0.5 * eta * eta * t);
    const double sd = std::sqrt(std::expm1(eta * eta * t));
    std::vector<double> out(n);
    parallel_for(
        n,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) out[p] = mean + sd * normal_draw(rng, p, 0);
        },
        max_threads);
    return out;
}

// Cumulative int_0^{t_k} sigma^2(s) ds, per-interval midpoint rule.
template <class SigmaT>
std::vector<double> quadratic_variation(SigmaT&& sigma_t, const TimeGrid& grid) {
    std::vector<double> qv(grid.n_times(), 0.0);
    for (std::size_t k = 0; k + 1 < grid.n_times(); ++k) {
        const double mid = 0.5 * (grid.times[k] + grid.times[k + 1]);
        const double s = sigma_t(mid);
        require_finite(s, "quadratic_variation: sigma(t)");
        qv[k + 1] = qv[k] + s * s * grid.dt(k);
    }
    return qv;
}

}  // namespace conic::sde
