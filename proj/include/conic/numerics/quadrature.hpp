#pragma once

// Gaussian quadrature rules built by the Golub-Welsch approach: eigenvalues
// of the symmetric tridiagonal Jacobi matrix give the nodes, the squared
// first eigenvector components give the weights.

#include <cmath>
#include <cstddef>
#include <vector>

#include "conic/common.hpp"

namespace conic::num {

struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // nonnegative
    int order = 0;
};

namespace detail {

// Implicit-shift QL sweep for a symmetric tridiagonal matrix (diagonal d,
// off-diagonal e, e[n-1] unused). On return d holds eigenvalues in ascending
// order and z the first component of each normalized eigenvector.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e[n - 1] = 0.0;
    const double eps = 2.220446049250313e-16;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iter > 64) throw std::runtime_error("tridiag_ql: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // insertion sort by node, carrying the eigenvector component
    for (int i = 1; i < n; ++i) {
        const double dv = d[i], zv = z[i];
        int j = i - 1;
        while (j >= 0 && d[j] > dv) {
            d[j + 1] = d[j];
            z[j + 1] = z[j];
            --j;
        }
        d[j + 1] = dv;
        z[j + 1] = zv;
    }
}

inline QuadratureRule golub_welsch(std::vector<double> diag, std::vector<double> offdiag, double mu0) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    tridiag_ql(diag, offdiag, z);
    QuadratureRule rule;
    rule.order = n;
    rule.nodes = std::move(diag);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) rule.weights[i] = mu0 * z[i] * z[i];
    return rule;
}

}  // namespace detail

// Gauss-Hermite rule normalized for expectations against the standard normal
// density: sum_i w_i f(z_i) ~ E[f(Z)], Z ~ N(0,1). Built in the physicists'
// convention (weight e^{-x^2}) and rescaled: nodes *sqrt(2), weights /sqrt(pi).
inline QuadratureRule gauss_hermite(int n) {
    require(n >= 1 && n <= 128, "gauss_hermite: order must lie in [1,128]");
    std::vector<double> d(n, 0.0), e(n, 0.0);
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(0.5 * k);
    QuadratureRule rule = detail::golub_welsch(std::move(d), std::move(e), std::sqrt(M_PI));

    const double sqrt2 = std::sqrt(2.0);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] *= sqrt2;
        rule.weights[i] *= inv_sqrt_pi;
    }
    // enforce exact symmetry about zero
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// Gauss-Legendre on [-1,1] (weight 1). Used internally for smooth integrals.
inline QuadratureRule gauss_legendre(int n) {
    require(n >= 1 && n <= 256, "gauss_legendre: order must lie in [1,256]");
    std::vector<double> d(n, 0.0), e(n, 0.0);
    for (int k = 1; k < n; ++k) e[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    QuadratureRule rule = detail::golub_welsch(std::move(d), std::move(e), 2.0);
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// Integrate f over [a,b] with a cached Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, const QuadratureRule& rule) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < rule.order; ++i) acc += rule.weights[i] * f(c + hw * rule.nodes[i]);
    return acc * hw;
}

// Adaptive Simpson with absolute tolerance; plain recursion with depth cap.
namespace detail {
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol, int max_depth = 48) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Tanh-sinh quadrature over [a,b]; robust for integrands with hard endpoint
// behaviour. Doubles the node density until two consecutive refinements
// agree. Reversed limits integrate with the usual sign flip.
template <class F>
double integrate_tanh_sinh(F&& f, double a, double b, double tol, int max_level = 12) {
    if (a == b) return 0.0;
    if (a > b) return -integrate_tanh_sinh(f, b, a, tol, max_level);
    const double hw = 0.5 * (b - a);
    const double t_max = 3.8;  // tanh(pi/2*sinh(3.8)) == 1 in double precision
    double h = 1.0;
    auto node_sum = [&](double t) {
        const double sh = 0.5 * M_PI * std::sinh(t);
        // endpoint offset 1 - tanh(sh) = 2/(1 + e^{2 sh}), exact near the ends
        const double q = 2.0 / (1.0 + std::exp(2.0 * sh));
        const double w = 0.5 * M_PI * std::cosh(t) / sqr(std::cosh(sh));
        double acc = 0.0;
        const double xp = b - hw * q, xm = a + hw * q;
        if (xp > a && xp < b) acc += w * f(xp);
        if (t > 0.0 && xm > a && xm < b) acc += w * f(xm);
        return acc;
    };
    double sum = node_sum(0.0);
    for (double t = h; t <= t_max; t += h) sum += node_sum(t);
    double prev = hw * h * sum;
    int settled = 0;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        for (double t = h; t <= t_max; t += 2.0 * h) sum += node_sum(t);
        const double cur = hw * h * sum;
        settled = std::abs(cur - prev) <= tol * (1.0 + std::abs(cur)) ? settled + 1 : 0;
        if (level >= 4 && settled >= 2) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace conic::num
