#pragma once

// The oscillatory integral behind the conditional law of the time-integral
// of geometric Brownian motion:
//
//   Psi_r(u)   = int_0^inf exp(-y^2/2u) exp(-r cosh y) sinh(y) sin(pi y/u) dy
//   theta_r(u) = r / sqrt(2 u pi^3) * exp(pi^2/2u) * Psi_r(u)
//
// The exp(pi^2/2u) prefactor is cancelled by the oscillation: evaluating Psi
// loses about pi^2/(2u) log2(e) bits to cancellation, so for small u the sum
// runs in fixed high-precision arithmetic. Both evaluation routes use a
// midpoint lattice with spacing u/m: sin(pi y/u) takes tabulated values
// there, and the aliasing error of the lattice is bounded through a contour
// shift by i pi/2, exp(pi^2/8u + pi^2/2u - pi^2 m/u) up to slowly varying
// factors. The lattice density m escalates until that bound clears the
// realized magnitude of the sum.

#include <algorithm>
#include <climits>
#include <cmath>
#include <vector>

#include "conic/common.hpp"
#include "conic/numerics/quadrature.hpp"
#include "conic/yor/bigfloat.hpp"

namespace conic::yor {

inline double psi_integrand(double r, double u, double y) {
    if (y <= 0.0) return 0.0;
    const double expo = -0.5 * y * y / u - r * std::cosh(y);
    if (expo < -745.0) return 0.0;
    return std::exp(expo) * std::sinh(y) * std::sin(M_PI * y / u);
}

// Direct evaluation per the damped-oscillation structure: adaptive quadrature
// between consecutive zeros of sin(pi y/u), compensated summation across
// intervals, truncation once the envelope is negligible.
inline double psi_integral(double r, double u, double tol = 1e-10) {
    require(r > 0.0 && u > 0.0, "psi_integral: need r > 0 and u > 0");
    require(tol > 0.0, "psi_integral: tol must be positive");

    double sum = 0.0, comp = 0.0;  // Kahan compensation
    double env_max = 0.0;
    const std::size_t max_intervals = 400000;
    for (std::size_t k = 0; k < max_intervals; ++k) {
        const double a = static_cast<double>(k) * u;
        const double b = a + u;
        const double env =
            std::exp(-0.5 * a * a / u - r * std::cosh(a) + std::log(std::sinh(b)));
        env_max = std::max(env_max, env);
        if (k > 2 && env < 1e-18 * env_max) {
            return sum;
        }
        const double piece = num::integrate_adaptive(
            [&](double y) { return psi_integrand(r, u, y); }, a, b, 0.05 * tol * u, 40);
        const double yv = piece - comp;
        const double t = sum + yv;
        comp = (t - sum) - yv;
        sum = t;
    }
    throw std::runtime_error("psi_integral: interval budget exhausted (achieved estimate " +
                             std::to_string(sum) + ")");
}

namespace detail {

struct LogPsiResult {
    double log_psi = -kInf;  // ln Psi_r(u), -inf when the sum is not resolved
    bool resolved = false;   // true when roundoff and aliasing are both cleared
    long cancelled_bits = 0; // bits lost between the largest term and the sum
};

// ln of the aliasing bound for lattice spacing u/m, relative to ln Psi = 0.
inline double alias_log_bound(double u, int m) {
    const double p2u = M_PI * M_PI / u;
    return p2u * (0.125 + 0.5 - static_cast<double>(m)) + 0.5 * std::log(2.0 * M_PI * u) +
           0.5 * u + 2.0;
}

// Double-precision midpoint sum over y_j = (j+1/2) u/m with log-scaled terms.
inline LogPsiResult log_psi_midpoint_double(double r, double u, int m) {
    const double h = u / static_cast<double>(m);
    std::vector<double> sin_table(2 * m);
    for (int i = 0; i < 2 * m; ++i)
        sin_table[i] = std::sin(M_PI * (static_cast<double>(i) + 0.5) / static_cast<double>(m));

    std::vector<double> expo;
    std::vector<int> phase;
    expo.reserve(1024);
    phase.reserve(1024);
    double emax = -kInf;
    for (std::size_t j = 0; j < 40000000; ++j) {
        const double y = (static_cast<double>(j) + 0.5) * h;
        const double e = -0.5 * y * y / u - r * std::cosh(y) + std::log(std::sinh(y));
        if (e > emax) emax = e;
        if (j > 2 && e < emax - 64.0) break;
        expo.push_back(e);
        phase.push_back(static_cast<int>(j % (2 * static_cast<std::size_t>(m))));
    }
    double sum = 0.0, comp = 0.0;
    for (std::size_t j = 0; j < expo.size(); ++j) {
        const double term = sin_table[phase[j]] * std::exp(expo[j] - emax);
        const double yv = term - comp;
        const double t = sum + yv;
        comp = (t - sum) - yv;
        sum = t;
    }
    LogPsiResult res;
    if (!(sum > 0.0)) return res;  // cancelled below double resolution
    res.log_psi = std::log(h) + emax + std::log(sum);
    const bool roundoff_ok = sum > 3e-5;
    const bool alias_ok = res.log_psi > alias_log_bound(u, m) + 40.0;
    res.resolved = roundoff_ok && alias_ok;
    return res;
}

// sin(pi (i+1/2)/m) for i in [0, 2m) as BigFloat values, m a power of two.
// Built from half-angle square roots and angle addition.
inline std::vector<BigFloat> big_sin_table(int m, int limbs) {
    // dyadic sin/cos at pi/2^t for t = 1..tmax
    const int tmax = static_cast<int>(std::lround(std::log2(static_cast<double>(m)))) + 1;
    std::vector<BigFloat> cos_d, sin_d;  // index t-1 holds angle pi/2^t
    cos_d.reserve(tmax);
    sin_d.reserve(tmax);
    BigFloat c = BigFloat::from_int64(0, limbs);  // cos(pi/2) = 0
    BigFloat s = BigFloat::from_int64(1, limbs);  // sin(pi/2) = 1
    cos_d.push_back(c);
    sin_d.push_back(s);
    const BigFloat one = BigFloat::from_int64(1, limbs);
    for (int t = 2; t <= tmax; ++t) {
        BigFloat cn = BigFloat::sqrt_bf(add(one, c).mul_pow2(-1));
        BigFloat sn = BigFloat::sqrt_bf(sub(one, c).mul_pow2(-1));
        cos_d.push_back(cn);
        sin_d.push_back(sn);
        c = cn;
        s = sn;
    }
    // angles pi (i + 1/2)/m for i < m lie in (0, pi); the second half mirrors
    // with a sign flip. Bit b of k = 2i+1 contributes the dyadic angle
    // pi 2^b/(2m) = pi/2^(tmax - b).
    std::vector<BigFloat> table(2 * m, BigFloat(limbs));
    for (int i = 0; i < m; ++i) {
        const unsigned k = static_cast<unsigned>(2 * i + 1);
        BigFloat ci = one, si = BigFloat::from_int64(0, limbs);
        for (int b = 0; b < tmax; ++b) {
            if (!(k & (1u << b))) continue;
            const int t = tmax - b;
            const BigFloat& cb = cos_d[t - 1];
            const BigFloat& sb = sin_d[t - 1];
            BigFloat ci_new = sub(mul(ci, cb), mul(si, sb));
            BigFloat si_new = add(mul(si, cb), mul(ci, sb));
            ci = ci_new;
            si = si_new;
        }
        table[i] = si;
        table[i + m] = si;
        table[i + m].negate();
    }
    return table;
}

// Fixed-precision midpoint sum, sized from the cancellation bound
// pi^2/(2u) log2(e) plus guard bits. e^{y} advances by one multiplication
// per node.
inline LogPsiResult log_psi_midpoint_big(double r, double u, int m, int limbs) {
    const double h = u / static_cast<double>(m);
    const BigFloat r_bf = BigFloat::from_double(r, limbs);
    const BigFloat inv2u = recip(BigFloat::from_double(2.0 * u, limbs));
    const BigFloat eh = exp_bf(BigFloat::from_double(h, limbs));
    const BigFloat ehinv = recip(eh);
    const BigFloat step = BigFloat::from_double(h, limbs);
    const BigFloat half_step = step.mul_pow2(-1);
    const std::vector<BigFloat> sin_table = big_sin_table(m, limbs);

    BigFloat ey = exp_bf(BigFloat::from_double(0.5 * h, limbs));  // e^{y_0}
    BigFloat eyinv = recip(ey);
    BigFloat sum(limbs);
    long max_exp2 = LONG_MIN;
    const long cutoff_bits = 64L * limbs + 16;

    for (std::uint32_t j = 0; j < 8000000; ++j) {
        if (j > 0) {
            ey = mul(ey, eh);
            eyinv = mul(eyinv, ehinv);
        }
        const BigFloat y = add(mul_u32(step, j), half_step);
        const BigFloat sinh_y = sub(ey, eyinv).mul_pow2(-1);
        const BigFloat cosh_y = add(ey, eyinv).mul_pow2(-1);
        BigFloat expo = mul(mul(y, y), inv2u);
        expo.negate();
        expo = sub(expo, mul(r_bf, cosh_y));
        BigFloat term = mul(mul(exp_bf(expo), sinh_y),
                            sin_table[j % (2 * static_cast<std::uint32_t>(m))]);
        if (!term.is_zero()) {
            if (term.exponent2() > max_exp2) max_exp2 = term.exponent2();
            sum = add(sum, term);
            if (j > 2 && term.exponent2() < max_exp2 - cutoff_bits) break;
            // once past the peak, the omitted tail is bounded by a small
            // multiple of the current term: stop when it cannot move the sum
            if (j > 2 && term.exponent2() < max_exp2 - 8 && sum.sign() != 0 &&
                term.exponent2() < sum.exponent2() - 160)
                break;
        } else if (j > 2 && max_exp2 != LONG_MIN) {
            break;
        }
    }

    LogPsiResult res;
    if (sum.sign() <= 0) return res;
    res.log_psi = mul(sum, BigFloat::from_double(h, limbs)).log_abs();
    res.cancelled_bits = max_exp2 - sum.exponent2();
    const bool roundoff_ok = res.cancelled_bits < 64L * limbs - 48;
    const bool alias_ok = res.log_psi > alias_log_bound(u, m) + 40.0;
    res.resolved = roundoff_ok && alias_ok;
    return res;
}

inline constexpr double kThetaDoubleCancelLimit = 23.0;  // pi^2/(2u) threshold

// ln Psi_r(u) with automatic route, lattice and precision escalation.
inline double log_psi(double r, double u) {
    const double cancel_bits = (M_PI * M_PI / (2.0 * u)) * 1.4426950408889634;
    if (M_PI * M_PI / (2.0 * u) <= kThetaDoubleCancelLimit) {
        int m = 4;
        while (m < 4.0 * u) m *= 2;  // keep the lattice spacing below ~1/4
        while (m <= 1 << 16) {
            const LogPsiResult res = log_psi_midpoint_double(r, u, m);
            if (res.resolved) return res.log_psi;
            // distinguish aliasing (raise m) from roundoff (go high precision)
            if (std::isfinite(res.log_psi) && res.log_psi <= alias_log_bound(u, m) + 40.0) {
                m *= 2;
                continue;
            }
            break;
        }
    }
    // scans through nearby (r,u) repeat similar extra cancellation; remember
    // the surplus over the pi^2/2u baseline so retries are not re-paid
    static thread_local int extra_limb_hint = 0;
    const int base_limbs = std::max(4, static_cast<int>((cancel_bits + 224.0) / 64.0) + 1);
    require(base_limbs <= BigFloat::kMaxLimbs,
            "theta_density: u too small for the configured precision ceiling");
    int limbs = std::min(static_cast<int>(BigFloat::kMaxLimbs),
                         base_limbs + std::min(extra_limb_hint, 80));
    int m = 2;
    for (int attempt = 0; attempt < 14; ++attempt) {
        const LogPsiResult res = log_psi_midpoint_big(r, u, m, limbs);
        if (res.resolved) {
            const int needed =
                std::max(4, static_cast<int>((static_cast<double>(res.cancelled_bits) + 224.0) /
                                             64.0) +
                                1);
            extra_limb_hint = std::max(0, needed - base_limbs);
            return res.log_psi;
        }
        if (std::isfinite(res.log_psi) && res.log_psi <= alias_log_bound(u, m) + 40.0 &&
            m < 2048) {
            m *= 2;  // aliasing-limited
            continue;
        }
        // roundoff-limited: grow the precision
        limbs = limbs + std::max(4, limbs / 2);
        require(limbs <= BigFloat::kMaxLimbs,
                "theta_density: cancellation exceeds the precision ceiling");
    }
    throw std::runtime_error("theta_density: high-precision summation did not stabilize");
}

}  // namespace detail

// Cheap upper bound for ln theta_r(u): Psi <= e^{-r} int e^{-y^2/2u} sinh y dy.
inline double log_theta_upper_bound(double r, double u) {
    const double log_psi_bound = -r + 0.5 * u + 0.5 * std::log(0.5 * M_PI * u) + 1.0;
    return std::log(r) + M_PI * M_PI / (2.0 * u) + log_psi_bound -
           0.5 * std::log(2.0 * u * M_PI * M_PI * M_PI);
}

// ln theta_r(u); the exp(pi^2/2u) factor is combined in log space so the
// result stays finite far outside the double range of theta itself.
inline double log_theta_density(double r, double u) {
    require(r > 0.0 && u > 0.0, "theta_density: need r > 0 and u > 0");
    // below the double underflow floor the value is certified negligible
    if (log_theta_upper_bound(r, u) < -750.0) return -kInf;
    const double log_psi = detail::log_psi(r, u);
    return std::log(r) + M_PI * M_PI / (2.0 * u) + log_psi -
           0.5 * std::log(2.0 * u * M_PI * M_PI * M_PI);
}

inline double theta_density(double r, double u) {
    const double lt = log_theta_density(r, u);
    return std::isfinite(lt) ? std::exp(lt) : 0.0;
}

}  // namespace conic::yor
