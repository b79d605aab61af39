#pragma once

// Fixed-precision binary floating point on 64-bit limbs, with just the
// operations the oscillatory-integral summation needs: +, -, *, reciprocal,
// exp, inverse square root, and the constants pi and ln 2. Precision is a
// per-value limb count; operands of binary operations must share it.
//
// value = sign * M * 2^(exp - 64 L), where M is the little-endian limb
// string, normalized so the top bit of the top limb is set. Magnitude lies
// in [2^(exp-1), 2^exp). Truncation (not rounding) after every operation;
// callers budget guard bits accordingly.

#include <cmath>
#include <cstdint>
#include <mutex>
#include <vector>

#include "conic/common.hpp"

namespace conic::yor {

class BigFloat {
public:
    static constexpr int kMaxLimbs = 144;  // 9216 bits

    explicit BigFloat(int limbs = 4) : mant_(static_cast<std::size_t>(limbs), 0) {
        require_arg(limbs >= 2 && limbs <= kMaxLimbs, "BigFloat: limb count out of range");
    }

    static BigFloat from_double(double v, int limbs) {
        BigFloat r(limbs);
        if (v == 0.0) return r;
        require(std::isfinite(v), "BigFloat: non-finite double");
        r.sign_ = v < 0.0 ? -1 : 1;
        int e2 = 0;
        const double frac = std::frexp(std::abs(v), &e2);  // in [0.5, 1)
        // 53 significant bits into the top limb(s)
        const std::uint64_t bits = static_cast<std::uint64_t>(std::ldexp(frac, 64));
        r.mant_[r.L() - 1] = bits;
        r.exp_ = e2;
        r.normalize();
        return r;
    }

    static BigFloat from_int64(long long v, int limbs) {
        BigFloat r(limbs);
        if (v == 0) return r;
        r.sign_ = v < 0 ? -1 : 1;
        r.mant_[r.L() - 1] = static_cast<std::uint64_t>(v < 0 ? -v : v);
        r.exp_ = 64;
        r.normalize();
        return r;
    }

    int limbs() const { return static_cast<int>(mant_.size()); }
    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    long exponent2() const { return exp_; }  // |x| in [2^(exp-1), 2^exp)

    BigFloat& negate() {
        sign_ = -sign_;
        return *this;
    }

    double to_double() const {
        if (sign_ == 0) return 0.0;
        const double top = top_fraction();
        return sign_ * std::ldexp(top, static_cast<int>(std::max<long>(
                                      std::min<long>(exp_, 1020), -1020)));
    }

    // ln |x| with double accuracy; valid for any representable magnitude.
    double log_abs() const {
        require(sign_ != 0, "BigFloat: log of zero");
        return std::log(top_fraction()) + static_cast<double>(exp_) * 0.6931471805599453094172321;
    }

    BigFloat truncated(int limbs) const {
        require_arg(limbs <= this->limbs(), "BigFloat: cannot extend by truncation");
        BigFloat r(limbs);
        r.sign_ = sign_;
        r.exp_ = exp_;
        for (int i = 0; i < limbs; ++i) r.mant_[i] = mant_[L() - limbs + i];
        if (r.sign_ != 0 && r.mant_[limbs - 1] == 0) r.normalize();
        return r;
    }

    // widen to a higher precision, padding low-order limbs with zeros
    BigFloat extended(int limbs) const {
        require_arg(limbs >= this->limbs(), "BigFloat: cannot shrink by extension");
        BigFloat r(limbs);
        r.sign_ = sign_;
        r.exp_ = exp_;
        for (int i = 0; i < L(); ++i) r.mant_[limbs - L() + i] = mant_[i];
        return r;
    }

    BigFloat at_prec(int limbs) const {
        return limbs <= this->limbs() ? truncated(limbs) : extended(limbs);
    }

    BigFloat mul_pow2(long k) const {
        BigFloat r = *this;
        if (r.sign_ != 0) r.exp_ += k;
        return r;
    }

    friend BigFloat add(const BigFloat& a, const BigFloat& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        if (a.sign_ == b.sign_) {
            BigFloat r = mag_add(a, b);
            r.sign_ = a.sign_;
            return r;
        }
        const int c = mag_cmp(a, b);
        if (c == 0) return BigFloat(a.limbs());
        BigFloat r = c > 0 ? mag_sub(a, b) : mag_sub(b, a);
        r.sign_ = c > 0 ? a.sign_ : b.sign_;
        return r;
    }

    friend BigFloat sub(const BigFloat& a, const BigFloat& b) {
        BigFloat nb = b;
        nb.sign_ = -nb.sign_;
        return add(a, nb);
    }

    friend BigFloat mul(const BigFloat& a, const BigFloat& b) {
        require_arg(a.limbs() == b.limbs(), "BigFloat: limb count mismatch");
        BigFloat r(a.limbs());
        if (a.sign_ == 0 || b.sign_ == 0) return r;
        const int n = a.limbs();
        std::vector<std::uint64_t> prod(2 * n, 0);
        for (int i = 0; i < n; ++i) {
            if (a.mant_[i] == 0) continue;
            unsigned __int128 carry = 0;
            const std::uint64_t ai = a.mant_[i];
            for (int j = 0; j < n; ++j) {
                unsigned __int128 cur = static_cast<unsigned __int128>(ai) * b.mant_[j] +
                                        prod[i + j] + carry;
                prod[i + j] = static_cast<std::uint64_t>(cur);
                carry = cur >> 64;
            }
            int k = i + n;
            while (carry != 0) {
                unsigned __int128 cur = static_cast<unsigned __int128>(prod[k]) + carry;
                prod[k] = static_cast<std::uint64_t>(cur);
                carry = cur >> 64;
                ++k;
            }
        }
        r.sign_ = a.sign_ * b.sign_;
        r.exp_ = a.exp_ + b.exp_;
        for (int i = 0; i < n; ++i) r.mant_[i] = prod[n + i];
        if (r.mant_[n - 1] == 0)
            r.sign_ = 0;  // cannot happen for normalized inputs, kept as a guard
        else if (!(r.mant_[n - 1] >> 63)) {
            // product of normalized mantissas lies in [1/4, 1): at most one shift
            shl1(r.mant_, prod[n - 1] >> 63);
            r.exp_ -= 1;
        }
        return r;
    }

    friend BigFloat mul_u32(const BigFloat& a, std::uint32_t m) {
        BigFloat r(a.limbs());
        if (a.sign_ == 0 || m == 0) return r;
        r = a;
        unsigned __int128 carry = 0;
        for (auto& limb : r.mant_) {
            unsigned __int128 cur = static_cast<unsigned __int128>(limb) * m + carry;
            limb = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        while (carry != 0) {
            // shift right one limb, absorb carry limb on top
            const std::uint64_t lost_top = static_cast<std::uint64_t>(carry);
            for (std::size_t i = 0; i + 1 < r.mant_.size(); ++i) r.mant_[i] = r.mant_[i + 1];
            r.mant_.back() = lost_top;
            r.exp_ += 64;
            carry = 0;
        }
        r.normalize();
        return r;
    }

    friend BigFloat div_u32(const BigFloat& a, std::uint32_t d) {
        require_arg(d != 0, "BigFloat: division by zero");
        BigFloat r = a;
        if (a.sign_ == 0) return r;
        std::uint64_t rem = 0;
        for (int i = r.limbs() - 1; i >= 0; --i) {
            const unsigned __int128 cur =
                (static_cast<unsigned __int128>(rem) << 64) | r.mant_[i];
            r.mant_[i] = static_cast<std::uint64_t>(cur / d);
            rem = static_cast<std::uint64_t>(cur % d);
        }
        r.normalize();
        return r;
    }

    // Newton reciprocal, seeded from the top 53 bits.
    friend BigFloat recip(const BigFloat& a) {
        require(a.sign_ != 0, "BigFloat: reciprocal of zero");
        const int n = a.limbs();
        // work on the mantissa-scaled value m in [1/2, 1): a = m * 2^exp
        BigFloat m = a;
        m.sign_ = 1;
        m.exp_ = 0;
        BigFloat x = from_double(1.0 / m.top_fraction(), n);
        const BigFloat two = from_int64(2, n);
        int correct_bits = 48;
        while (correct_bits < 64 * n + 8) {
            x = mul(x, sub(two, mul(m, x)));
            correct_bits *= 2;
        }
        x.exp_ -= a.exp_;
        x.sign_ = a.sign_;
        return x;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return add(a, b); }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return sub(a, b); }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return mul(a, b); }

    // e^x for |x| up to ~2^40: reduce by ln 2 and six halvings, Taylor-Horner
    // on the fraction, then square back up.
    friend BigFloat exp_bf(const BigFloat& x) {
        const int n = x.limbs();
        if (x.sign_ == 0) return from_int64(1, n);
        const double xd = x.log_ready_double();
        require(std::abs(xd) < 1.1e12, "BigFloat: exp argument too large");
        const long long k = std::llround(xd / 0.6931471805599453);
        BigFloat f = sub(x, mul(ln2(n), from_int64(k, n)));
        // |f| <= ln2/2 + epsilon
        const double fd = f.to_double();
        require(std::abs(fd) < 0.3566, "BigFloat: exp reduction failed");
        constexpr int kHalvings = 6;
        f = f.mul_pow2(-kHalvings);  // |f| <= 0.00558
        const double bits_needed = 64.0 * n + 32.0;
        const double bits_per_term = std::log2(1.0 / 0.00558);
        int N = 4;
        while (static_cast<double>(N) * bits_per_term +
                   (std::lgamma(static_cast<double>(N) + 1.0) / 0.6931471805599453) <
               bits_needed)
            N += 4;
        // Horner with a precision ladder: the innermost terms only influence
        // the result at relative level |f|^j, so they run on fewer limbs.
        auto level_limbs = [&](int j) {
            const double need = bits_needed - static_cast<double>(j) * bits_per_term;
            return std::min(n, std::max(4, static_cast<int>(need / 64.0) + 2));
        };
        int cur = level_limbs(N);
        BigFloat f_cur = f.at_prec(cur);
        BigFloat one_cur = from_int64(1, cur);
        BigFloat acc = one_cur;
        for (int j = N; j >= 1; --j) {
            const int want = level_limbs(j);
            if (want != cur) {
                cur = want;
                f_cur = f.at_prec(cur);
                one_cur = from_int64(1, cur);
                acc = acc.at_prec(cur);
            }
            acc = div_u32(mul(f_cur, acc), static_cast<std::uint32_t>(j));
            acc = add(acc, one_cur);
        }
        if (acc.limbs() != n) acc = acc.at_prec(n);
        for (int s = 0; s < kHalvings; ++s) acc = mul(acc, acc);
        return acc.mul_pow2(k);
    }

    // sqrt via Newton on the inverse square root (multiplication only).
    static BigFloat sqrt_bf(const BigFloat& a) {
        require(a.sign() > 0, "BigFloat: sqrt of non-positive value");
        const int n = a.limbs();
        // scale to even exponent: a = m * 2^(2k), sqrt(a) = sqrt(m) * 2^k
        BigFloat m = a;
        const long k = a.exp_ >= 0 ? a.exp_ / 2 : (a.exp_ - 1) / 2;
        m.exp_ -= 2 * k;  // m in [2^-2, 2^2)
        BigFloat y = from_double(1.0 / std::sqrt(m.to_double()), n);
        const BigFloat three = from_int64(3, n);
        int correct_bits = 48;
        while (correct_bits < 64 * n + 8) {
            y = mul(y, sub(three, mul(m, mul(y, y)))).mul_pow2(-1);
            correct_bits *= 2;
        }
        return mul(m, y).mul_pow2(k);  // sqrt(m) = m / sqrt(m)
    }

    static BigFloat sqrt_half(int limbs) { return sqrt_bf(from_double(0.5, limbs)); }

    static BigFloat pi(int limbs) {
        require_arg(limbs <= kMaxLimbs, "BigFloat: limb count out of range");
        return max_pi().truncated(limbs);
    }

    static BigFloat ln2(int limbs) {
        require_arg(limbs <= kMaxLimbs, "BigFloat: limb count out of range");
        return max_ln2().truncated(limbs);
    }

private:
    int sign_ = 0;
    long exp_ = 0;
    std::vector<std::uint64_t> mant_;

    int L() const { return static_cast<int>(mant_.size()); }

    // top ~64 bits as a double in [0.5, 1)
    double top_fraction() const {
        double v = static_cast<double>(mant_[L() - 1]);
        if (L() >= 2) v += static_cast<double>(mant_[L() - 2]) * 0x1p-64;
        return v * 0x1p-64;
    }

    // value as double ignoring exponent overflow (for reduction arithmetic)
    double log_ready_double() const {
        return sign_ * std::ldexp(top_fraction(), static_cast<int>(
                                      std::max<long>(std::min<long>(exp_, 300), -300)));
    }

    void normalize() {
        int top = L() - 1;
        while (top >= 0 && mant_[top] == 0) --top;
        if (top < 0) {
            sign_ = 0;
            exp_ = 0;
            return;
        }
        if (top != L() - 1) {
            const int shift_limbs = L() - 1 - top;
            for (int i = L() - 1; i >= 0; --i)
                mant_[i] = i - shift_limbs >= 0 ? mant_[i - shift_limbs] : 0;
            exp_ -= 64 * shift_limbs;
        }
        const int lz = __builtin_clzll(mant_[L() - 1]);
        if (lz > 0) {
            shl_bits(mant_, lz);
            exp_ -= lz;
        }
    }

    static void shl1(std::vector<std::uint64_t>& m, std::uint64_t bit_in) {
        std::uint64_t carry = bit_in;
        for (auto& limb : m) {
            const std::uint64_t next = limb >> 63;
            limb = (limb << 1) | carry;
            carry = next;
        }
    }

    static void shl_bits(std::vector<std::uint64_t>& m, int k) {
        if (k == 0) return;
        std::uint64_t carry = 0;
        for (auto& limb : m) {
            const std::uint64_t next = limb >> (64 - k);
            limb = (limb << k) | carry;
            carry = next;
        }
    }

    static void shr_into(const std::vector<std::uint64_t>& src, std::vector<std::uint64_t>& dst,
                         long bits) {
        const int n = static_cast<int>(src.size());
        dst.assign(n, 0);
        if (bits >= 64L * n) return;
        const long limb_shift = bits / 64;
        const int bit_shift = static_cast<int>(bits % 64);
        for (int i = 0; i < n; ++i) {
            const long j = i + limb_shift;
            std::uint64_t v = 0;
            if (j < n) v = src[j] >> bit_shift;
            if (bit_shift != 0 && j + 1 < n) v |= src[j + 1] << (64 - bit_shift);
            dst[i] = v;
        }
    }

    static int mag_cmp(const BigFloat& a, const BigFloat& b) {
        if (a.exp_ != b.exp_) return a.exp_ > b.exp_ ? 1 : -1;
        for (int i = a.L() - 1; i >= 0; --i)
            if (a.mant_[i] != b.mant_[i]) return a.mant_[i] > b.mant_[i] ? 1 : -1;
        return 0;
    }

    static BigFloat mag_add(const BigFloat& a, const BigFloat& b) {
        const BigFloat& hi = a.exp_ >= b.exp_ ? a : b;
        const BigFloat& lo = a.exp_ >= b.exp_ ? b : a;
        BigFloat r(a.limbs());
        std::vector<std::uint64_t> shifted;
        shr_into(lo.mant_, shifted, hi.exp_ - lo.exp_);
        r.mant_ = hi.mant_;
        unsigned __int128 carry = 0;
        for (int i = 0; i < r.L(); ++i) {
            const unsigned __int128 cur =
                static_cast<unsigned __int128>(r.mant_[i]) + shifted[i] + carry;
            r.mant_[i] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        r.exp_ = hi.exp_;
        r.sign_ = 1;
        if (carry != 0) {
            std::uint64_t prev = 1;  // the carry bit becomes the new msb
            for (int i = r.L() - 1; i >= 0; --i) {
                const std::uint64_t next = r.mant_[i] & 1;
                r.mant_[i] = (r.mant_[i] >> 1) | (prev << 63);
                prev = next;
            }
            r.exp_ += 1;
        }
        return r;
    }

    // requires |a| > |b|
    static BigFloat mag_sub(const BigFloat& a, const BigFloat& b) {
        BigFloat r(a.limbs());
        std::vector<std::uint64_t> shifted;
        shr_into(b.mant_, shifted, a.exp_ - b.exp_);
        r.mant_ = a.mant_;
        std::int64_t borrow = 0;
        for (int i = 0; i < r.L(); ++i) {
            const unsigned __int128 sub_val =
                static_cast<unsigned __int128>(shifted[i]) + (borrow ? 1u : 0u);
            if (static_cast<unsigned __int128>(r.mant_[i]) >= sub_val) {
                r.mant_[i] = static_cast<std::uint64_t>(r.mant_[i] - sub_val);
                borrow = 0;
            } else {
                const unsigned __int128 top = (static_cast<unsigned __int128>(1) << 64) +
                                              r.mant_[i] - sub_val;
                r.mant_[i] = static_cast<std::uint64_t>(top);
                borrow = 1;
            }
        }
        r.exp_ = a.exp_;
        r.sign_ = 1;
        r.normalize();
        return r;
    }

    static BigFloat compute_atan_inv(std::uint32_t x, int limbs) {
        // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
        const std::uint64_t x2 = static_cast<std::uint64_t>(x) * x;
        require_arg(x2 <= 0xffffffffULL, "atan_inv: x^2 must fit u32");
        BigFloat term = div_u32(from_int64(1, limbs), x);
        BigFloat acc(limbs);
        std::uint32_t k2p1 = 1;
        bool positive = true;
        while (!term.is_zero() && term.exponent2() > -64L * limbs - 8) {
            BigFloat contrib = div_u32(term, k2p1);
            if (!positive) contrib.negate();
            acc = add(acc, contrib);
            term = div_u32(term, static_cast<std::uint32_t>(x2));
            k2p1 += 2;
            positive = !positive;
        }
        return acc;
    }

    static const BigFloat& max_pi() {
        static const BigFloat value = [] {
            // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
            BigFloat a = compute_atan_inv(5, kMaxLimbs).mul_pow2(4);
            BigFloat b = compute_atan_inv(239, kMaxLimbs).mul_pow2(2);
            return sub(a, b);
        }();
        return value;
    }

    static const BigFloat& max_ln2() {
        static const BigFloat value = [] {
            // ln 2 = 2 atanh(1/3) = 2 sum 1/((2k+1) 3^(2k+1))
            BigFloat term = div_u32(from_int64(1, kMaxLimbs), 3);
            BigFloat acc(kMaxLimbs);
            std::uint32_t k2p1 = 1;
            while (!term.is_zero() && term.exponent2() > -64L * kMaxLimbs - 8) {
                acc = add(acc, div_u32(term, k2p1));
                term = div_u32(term, 9);
                k2p1 += 2;
            }
            return acc.mul_pow2(1);
        }();
        return value;
    }
};

}  // namespace conic::yor
