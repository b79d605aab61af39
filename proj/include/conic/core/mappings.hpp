#pragma once

// The worked mapping families: logistic, tanh(x/2), decreasing exponential,
// the normal CDF, and the two-mode CDF mixture.

#include <cmath>

#include "conic/core/mapping.hpp"
#include "conic/numerics/normal.hpp"
#include "conic/numerics/roots.hpp"

namespace conic::core {

// F(x) = c e^x / (1 + c e^x), image (0,1); f = F(1-F); psi = 2F - 1.
inline Mapping mapping_logistic(double c) {
    require(c > 0.0 && std::isfinite(c), "mapping_logistic: we must have c > 0");
    const double log_c = std::log(c);
    Mapping m;
    m.F = [log_c](double x) { return 1.0 / (1.0 + std::exp(-(x + log_c))); };
    m.f = [F = m.F](double x) {
        const double y = F(x);
        return y * (1.0 - y);
    };
    m.psi = [F = m.F](double x) { return 2.0 * F(x) - 1.0; };
    m.inverse = [log_c](double y) {
        require(y > 0.0 && y < 1.0, "mapping_logistic: inverse needs y in (0,1)");
        return std::log(y) - std::log1p(-y) - log_c;
    };
    m.domain = {-kInf, kInf};
    m.image = {0.0, 1.0};
    return m;
}

// F(x) = tanh(x/2), image (-1,1); f = (1-F^2)/2; psi = tanh(x/2).
inline Mapping mapping_tanh_half() {
    Mapping m;
    m.F = [](double x) { return std::tanh(0.5 * x); };
    m.f = [](double x) {
        const double y = std::tanh(0.5 * x);
        return 0.5 * (1.0 - y * y);
    };
    m.psi = [](double x) { return std::tanh(0.5 * x); };
    m.inverse = [](double y) {
        require(y > -1.0 && y < 1.0, "mapping_tanh_half: inverse needs y in (-1,1)");
        return 2.0 * std::atanh(y);
    };
    m.domain = {-kInf, kInf};
    m.image = {-1.0, 1.0};
    return m;
}

// Decreasing original F(x) = e^{-lambda x} on (0, inf), image (0,1). Stored in
// increasing orientation as e^{lambda u} on u in (-inf, 0), flipped = true.
inline Mapping mapping_exp_neg(double lambda) {
    require(lambda > 0.0 && std::isfinite(lambda), "mapping_exp_neg: lambda must be > 0");
    Mapping m;
    m.F = [lambda](double u) { return std::exp(lambda * u); };
    m.f = [lambda](double u) { return lambda * std::exp(lambda * u); };
    m.psi = [lambda](double) { return -lambda; };
    m.inverse = [lambda](double y) {
        require(y > 0.0 && y <= 1.0, "mapping_exp_neg: inverse needs y in (0,1]");
        return std::log(y) / lambda;
    };
    m.domain = {-kInf, 0.0};
    m.image = {0.0, 1.0};
    m.flipped = true;
    return m;
}

// F = Phi, f = phi, psi(x) = x, image (0,1).
inline Mapping mapping_phi() {
    Mapping m;
    m.F = [](double x) { return num::norm_cdf(x); };
    m.f = [](double x) { return num::norm_pdf(x); };
    m.psi = [](double x) { return x; };
    m.inverse = [](double y) { return num::norm_inv_cdf(y); };
    m.domain = {-kInf, kInf};
    m.image = {0.0, 1.0};
    return m;
}

// F(x) = (Phi((x-(x0+mu))/s) + Phi((x-(x0-mu))/s))/2: a CDF mixture whose
// density is bimodal once mu/s is large enough for f' to change sign.
inline Mapping mapping_bimodal(double x0, double mu, double s) {
    require(mu > 0.0 && std::isfinite(mu), "mapping_bimodal: mu must be > 0");
    require(s > 0.0 && std::isfinite(s), "mapping_bimodal: s must be > 0");
    require_finite(x0, "x0");
    Mapping m;
    auto z1 = [x0, mu, s](double x) { return (x - (x0 + mu)) / s; };
    auto z2 = [x0, mu, s](double x) { return (x - (x0 - mu)) / s; };
    m.F = [z1, z2](double x) { return 0.5 * (num::norm_cdf(z1(x)) + num::norm_cdf(z2(x))); };
    m.f = [z1, z2, s](double x) {
        return 0.5 * (num::norm_pdf(z1(x)) + num::norm_pdf(z2(x))) / s;
    };
    m.psi = [z1, z2, s](double x) {
        const double a = z1(x), b = z2(x);
        const double pa = num::norm_pdf(a), pb = num::norm_pdf(b);
        return (a * pa + b * pb) / (s * (pa + pb));
    };
    m.inverse = [F = m.F, x0, mu, s](double y) {
        require(y > 0.0 && y < 1.0, "mapping_bimodal: inverse needs y in (0,1)");
        double lo = x0 - mu - 10.0 * s, hi = x0 + mu + 10.0 * s;
        while (F(lo) > y) lo -= 10.0 * s;
        while (F(hi) < y) hi += 10.0 * s;
        return num::find_root_bracketed([&](double x) { return F(x) - y; }, lo, hi, 1e-13);
    };
    m.domain = {-kInf, kInf};
    m.image = {0.0, 1.0};
    return m;
}

}  // namespace conic::core
