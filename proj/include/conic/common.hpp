#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace conic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed or half-open real interval; endpoints may be +-inf.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const { return x >= lo && x <= hi; }
    bool interior(double x) const { return x > lo && x < hi; }
    double width() const { return hi - lo; }
};

inline double sqr(double x) { return x * x; }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::domain_error(msg);
}

inline void require_arg(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_finite(double x, const std::string& name) {
    if (!std::isfinite(x)) throw std::domain_error(name + " must be finite");
}

}  // namespace conic
