#pragma once

// Numeric mapping construction from the autonomous ODE dy/dx = h(y): fixed
// step RK4 outward from a reference point, then monotone cubic Hermite
// interpolation of the tabulated solution. The latent domain actually reached
// before the step collapses near the image boundaries is recorded in
// Mapping::domain.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "conic/core/mapping.hpp"
#include "conic/numerics/roots.hpp"

namespace conic::core {

struct OdeMappingOptions {
    double step = 1e-3;          // RK4 step on x
    double x_half_width = 30.0;  // maximum latent extent on each side of x_ref
    double y_cap = 1e12;         // stop when |y| exceeds this (open image side)
    double stall_tol = 1e-16;    // stop when the per-step increment stalls
};

namespace detail {

struct MappingTable {
    std::vector<double> x, y, dydx;  // strictly increasing x and y

    // cubic Hermite on the bracketing segment; clamps outside the table
    double eval(double xq) const {
        if (xq <= x.front()) return y.front();
        if (xq >= x.back()) return y.back();
        const auto it = std::upper_bound(x.begin(), x.end(), xq);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double hx = x[i + 1] - x[i];
        const double t = (xq - x[i]) / hx;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * y[i] + h10 * hx * dydx[i] + h01 * y[i + 1] + h11 * hx * dydx[i + 1];
    }

    double invert(double yq) const {
        if (yq <= y.front()) return x.front();
        if (yq >= y.back()) return x.back();
        const auto it = std::upper_bound(y.begin(), y.end(), yq);
        const std::size_t i = static_cast<std::size_t>(it - y.begin()) - 1;
        return num::find_root_bracketed([&](double xx) { return eval(xx) - yq; }, x[i],
                                        x[i + 1], 1e-14);
    }
};

}  // namespace detail

template <class H>
Mapping solve_mapping_ode(H&& h, double x_ref, double y_ref,
                          const OdeMappingOptions& opts = {}) {
    require_finite(x_ref, "x_ref");
    require_finite(y_ref, "y_ref");
    require(h(y_ref) > 0.0, "solve_mapping_ode: h(y_ref) must be positive in the interior");

    auto rk4_step = [&](double y, double dx) {
        const double k1 = h(y);
        const double k2 = h(y + 0.5 * dx * k1);
        const double k3 = h(y + 0.5 * dx * k2);
        const double k4 = h(y + dx * k3);
        return y + dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    auto march = [&](double direction) {
        std::vector<double> xs{x_ref}, ys{y_ref};
        const double dx = direction * opts.step;
        double x = x_ref, y = y_ref;
        const std::size_t max_steps =
            static_cast<std::size_t>(opts.x_half_width / opts.step) + 1;
        for (std::size_t k = 0; k < max_steps; ++k) {
            const double y_next = rk4_step(y, dx);
            if (!std::isfinite(y_next)) break;
            const double slope = h(y_next);
            if (!std::isfinite(slope)) break;
            if (std::abs(y_next - y) <= opts.stall_tol * (1.0 + std::abs(y)) || slope <= 0.0) {
                // boundary reached: the step has collapsed
                break;
            }
            x += dx;
            y = y_next;
            xs.push_back(x);
            ys.push_back(y);
            if (std::abs(y) > opts.y_cap) break;
        }
        return std::pair{xs, ys};
    };

    auto [xs_up, ys_up] = march(+1.0);
    auto [xs_dn, ys_dn] = march(-1.0);

    auto table = std::make_shared<detail::MappingTable>();
    const std::size_t n = xs_dn.size() + xs_up.size() - 1;
    table->x.reserve(n);
    table->y.reserve(n);
    for (std::size_t i = xs_dn.size(); i-- > 1;) {
        table->x.push_back(xs_dn[i]);
        table->y.push_back(ys_dn[i]);
    }
    for (std::size_t i = 0; i < xs_up.size(); ++i) {
        table->x.push_back(xs_up[i]);
        table->y.push_back(ys_up[i]);
    }
    require(table->x.size() >= 2, "solve_mapping_ode: domain collapsed at the reference point");
    table->dydx.resize(table->x.size());
    for (std::size_t i = 0; i < table->x.size(); ++i) table->dydx[i] = h(table->y[i]);

    Mapping m;
    m.domain = {table->x.front(), table->x.back()};
    m.image = {table->y.front(), table->y.back()};
    m.F = [table](double x) { return table->eval(x); };
    m.f = [table, hf = std::function<double(double)>(h)](double x) {
        return hf(table->eval(x));
    };
    m.psi = [table, hf = std::function<double(double)>(h)](double x) {
        // psi = -f'/f with f = h(F): f' = h'(F) h(F), so psi = -h'(F)
        const double y = table->eval(x);
        const double dy = 1e-6 * (1.0 + std::abs(y));
        return -(hf(y + dy) - hf(y - dy)) / (2.0 * dy);
    };
    m.inverse = [table](double y) { return table->invert(y); };
    return m;
}

}  // namespace conic::core
