#pragma once

// Law of the Verhulst-type latent process X_t = Theta_t / (1 - mu int Theta),
// Theta_t = x0 exp(-eta^2 t/2 + eta W_t), mu = lambda eta^2/2, which explodes
// when int Theta reaches 2/(lambda eta^2). The pre-explosion density comes
// from the conditional law of the time-integral of geometric Brownian motion
// (kernel a_t(y,z)), evaluated through theta_density; a seeded Monte-Carlo
// oracle simulates Theta exactly and reports the histogram of survivors.

#include <cmath>
#include <vector>

#include "conic/numerics/normal.hpp"
#include "conic/sde/parallel.hpp"
#include "conic/sde/rng.hpp"
#include "conic/stats.hpp"
#include "conic/yor/hartman_watson.hpp"

namespace conic::yor {

struct VerhulstParams {
    double x0;
    double eta;
    double lambda;

    VerhulstParams(double x0_, double eta_, double lambda_) : x0(x0_), eta(eta_), lambda(lambda_) {
        require(x0 > 0.0 && std::isfinite(x0), "VerhulstParams: x0 must be > 0");
        require(eta > 0.0 && std::isfinite(eta), "VerhulstParams: eta must be > 0");
        require(lambda > 0.0 && std::isfinite(lambda), "VerhulstParams: lambda must be > 0");
    }

    double mu() const { return 0.5 * lambda * eta * eta; }
    double explosion_barrier() const { return 2.0 / (lambda * eta * eta); }
};

// ln a_t(y,z): density of A_t(0) = int_0^t e^{2W_s} ds given W_t = y.
inline double log_conditional_density_A(double t, double y, double z) {
    require(z > 0.0, "conditional_density_A: z must be > 0");
    require(t > 0.0, "conditional_density_A: t must be > 0");
    const double r = std::exp(y) / z;
    return 0.5 * std::log(t) - std::log(z) - std::log(num::norm_pdf(y / std::sqrt(t))) -
           0.5 * (1.0 + std::exp(2.0 * y)) / z + log_theta_density(r, t);
}

inline double conditional_density_A(double t, double y, double z) {
    const double lv = log_conditional_density_A(t, y, z);
    return std::isfinite(lv) ? std::exp(lv) : 0.0;
}

// Pre-explosion density of X_t at z. The scaled time is t' = eta^2 t/4; for
// a given Brownian coordinate y the integrand composes the kernel a_{t'} at
//   A(y,z) = eta^2/(4 x0) (z - Theta(y)) / (mu z),  Theta(y) = x0 e^{2(y-t')},
// with the Gaussian weight phi(y/sqrt(t')) and the change-of-variable factor
// dA/dz = eta^2/(4 x0) Theta(y)/(mu z^2).
//
// The kernel is sharply peaked in y: the A-argument matches its conditional
// mean ~ t' at y_mode = t' + ln(z(1 - 2 lambda x0 t')/x0)/2 with width
// sigma_y ~ sd[A|W]/|dA/dy| ~ t'^{3/2}/sqrt(3). The quadrature is a
// Gauss-Legendre core across the peak plus marching tails: a stepped
// boundary-layer scan toward y_up (where the kernel argument reaches zero)
// and a coarse walk toward y_lo, both cut off by a relevance gate.
inline double verhulst_density(const VerhulstParams& p, double t, double z, int refine = 1) {
    require(t > 0.0, "verhulst_density: t must be > 0");
    require(z > 0.0, "verhulst_density: z must be > 0");
    require(refine >= 1 && refine <= 4, "verhulst_density: refine must lie in [1,4]");
    const double tp = 0.25 * p.eta * p.eta * t;
    const double sq_tp = std::sqrt(tp);
    const double scale = 0.25 * p.eta * p.eta / p.x0;  // eta^2/(4 x0)
    const double mu = p.mu();

    const double y_up = tp + 0.5 * std::log(z / p.x0);
    const double y_lo = -9.0 * sq_tp;
    if (y_up <= y_lo) return 0.0;

    // everything in the integrand except ln theta itself
    auto log_prefix = [&](double y, double a_arg, double theta_y) {
        const double yk = y - tp;
        return 0.5 * std::log(tp) - std::log(a_arg) -
               std::log(num::norm_pdf(yk / sq_tp)) -
               0.5 * (1.0 + std::exp(2.0 * yk)) / a_arg +
               std::log(scale * theta_y / (mu * z * z)) +
               std::log(num::norm_pdf(y / sq_tp) / sq_tp);
    };
    auto log_integrand = [&](double y, double skip_below) {
        const double theta_y = p.x0 * std::exp(2.0 * (y - tp));
        const double a_arg = scale * (z - theta_y) / (mu * z);
        if (a_arg <= 0.0) return -kInf;
        const double prefix = log_prefix(y, a_arg, theta_y);
        const double r = std::exp(y - tp) / a_arg;
        // cheap gate: skip the theta evaluation when even its upper bound
        // cannot lift the node above the relevance threshold
        if (prefix + log_theta_upper_bound(r, tp) < skip_below) return -kInf;
        return prefix + log_theta_density(r, tp);
    };

    // peak location and width estimates: the A-argument meets its
    // conditional mean at Theta = z(1 - 2 lambda x0 t'); the kernel width is
    // sd[A|W] ~ t'^{3/2}/sqrt(3) divided by |dA/dy| = 2 scale Theta/(mu z)
    const double mode_arg = 1.0 - 2.0 * p.lambda * p.x0 * tp;
    const double gap = mode_arg > 0.0 ? -0.5 * std::log(mode_arg)
                                      : 0.5 * (y_up - std::max(y_lo, y_up - 1.0));
    const double y_mode = y_up - gap;
    const double theta_mode = p.x0 * std::exp(2.0 * (y_mode - tp));
    const double dady = 2.0 * scale * theta_mode / (mu * z);
    const double sigma = tp * sq_tp / std::sqrt(3.0) / std::max(1e-300, dady);

    const double core_half = 10.0 * sigma;
    const double core_lo = std::max(y_lo, y_mode - core_half);
    const double core_hi = std::min(y_mode + core_half, y_up - 0.25 * gap);

    // Gauss-Legendre core across the peak
    static const num::QuadratureRule rule_by_refine[4] = {
        num::gauss_legendre(48), num::gauss_legendre(96), num::gauss_legendre(144),
        num::gauss_legendre(192)};
    const num::QuadratureRule& rule = rule_by_refine[refine - 1];
    const double c = 0.5 * (core_lo + core_hi), hw = 0.5 * (core_hi - core_lo);
    std::vector<double> lv(rule.order);
    double peak = -kInf;
    for (int i = 0; i < rule.order; ++i) {
        lv[i] = log_integrand(c + hw * rule.nodes[i], -kInf);
        if (lv[i] > peak) peak = lv[i];
    }
    if (!std::isfinite(peak)) return 0.0;
    double core = 0.0;
    for (int i = 0; i < rule.order; ++i)
        if (std::isfinite(lv[i])) core += rule.weights[i] * std::exp(lv[i] - peak);
    core *= hw;

    // right tail: trapezoid in w with y = y_up - e^w across the boundary layer
    double tail_right = 0.0;
    {
        const double w_start = std::log(y_up - core_hi);
        const double w_step = std::min(0.25, 0.5 * sigma / (y_up - core_hi)) / refine;
        for (double w = w_start - 0.5 * w_step;; w -= w_step) {
            const double y = y_up - std::exp(w);
            const double v = log_integrand(y, peak - 46.0 - w) + w;
            if (!std::isfinite(v) || v < peak - 45.0) break;
            tail_right += std::exp(v - peak);
        }
        tail_right *= w_step;
    }

    // left tail: plain marching steps of 2 sigma down to y_lo
    double tail_left = 0.0;
    {
        const double step = 2.0 * sigma / refine;
        for (double y = core_lo - 0.5 * step; y > y_lo; y -= step) {
            const double v = log_integrand(y, peak - 46.0);
            if (!std::isfinite(v) || v < peak - 45.0) break;
            tail_left += std::exp(v - peak);
        }
        tail_left *= step;
    }

    return std::exp(peak) * (core + tail_right + tail_left);
}

// Average analytic density over [lo, hi] (Simpson), the right comparison
// against a histogram bin whose width resolves real curvature.
inline double verhulst_bin_average(const VerhulstParams& p, double t, double lo, double hi,
                                   int refine = 1) {
    const double mid = 0.5 * (lo + hi);
    return (verhulst_density(p, t, lo, refine) + 4.0 * verhulst_density(p, t, mid, refine) +
            verhulst_density(p, t, hi, refine)) /
           6.0;
}

struct VerhulstOracleResult {
    stats::Histogram histogram;       // density-normalized counts of surviving X_t
    double explosion_fraction = 0.0;  // paths with int Theta >= 2/(lambda eta^2)
    std::size_t n_paths = 0;
    std::vector<double> survivors;    // retained only when keep_samples
};

// Exact lognormal stepping of Theta, trapezoidal integral, explosion flag at
// the barrier crossing; histogram over the supplied edges.
inline VerhulstOracleResult mc_verhulst_oracle(const VerhulstParams& p, double t,
                                               std::size_t n_paths, std::size_t n_steps,
                                               const sde::RngSpec& rng,
                                               std::vector<double> edges,
                                               bool keep_samples = false,
                                               unsigned max_threads = 0) {
    require(t > 0.0, "mc_verhulst_oracle: t must be > 0");
    require(n_paths >= 1 && n_steps >= 1, "mc_verhulst_oracle: need paths and steps");
    const double dt = t / static_cast<double>(n_steps);
    const double barrier = p.explosion_barrier();
    const double drift = -0.5 * p.eta * p.eta * dt;
    const double vol = p.eta * std::sqrt(dt);

    std::vector<double> terminal(n_paths);
    std::vector<unsigned char> exploded(n_paths, 0);
    sde::parallel_for(
        n_paths,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t path = lo; path < hi; ++path) {
                double theta = p.x0;
                double integral = 0.0;
                bool dead = false;
                for (std::size_t k = 0; k < n_steps; ++k) {
                    const double theta_next =
                        theta * std::exp(drift + vol * sde::normal_draw(rng, path, k));
                    integral += 0.5 * (theta + theta_next) * dt;
                    theta = theta_next;
                    if (integral >= barrier) {
                        dead = true;
                        break;
                    }
                }
                exploded[path] = dead ? 1 : 0;
                terminal[path] = dead ? 0.0 : theta / (1.0 - p.mu() * integral);
            }
        },
        max_threads);

    VerhulstOracleResult res;
    res.n_paths = n_paths;
    std::size_t n_dead = 0;
    std::vector<double> survivors;
    survivors.reserve(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        if (exploded[i])
            ++n_dead;
        else
            survivors.push_back(terminal[i]);
    }
    res.explosion_fraction = static_cast<double>(n_dead) / static_cast<double>(n_paths);
    res.histogram = stats::histogram(survivors, std::move(edges));
    // density normalization counts all paths, so mass integrates to <= 1
    res.histogram.n_total = n_paths;
    if (keep_samples) res.survivors = std::move(survivors);
    return res;
}

}  // namespace conic::yor
