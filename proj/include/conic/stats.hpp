#pragma once

// Deterministic statistics helpers: pairwise summation in fixed order,
// sample moments, empirical CDFs and Kolmogorov-Smirnov distances.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "conic/common.hpp"

namespace conic::stats {

// Pairwise (cascade) summation; order is fixed by the input order.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double mean(std::span<const double> v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // unbiased
    std::size_t n = 0;

    double std_error_of_mean() const { return n > 1 ? std::sqrt(var / static_cast<double>(n)) : 0.0; }
    // Standard error of the sample variance for approximately normal-tailed
    // data; callers that need exact fourth-moment SEs compute their own.
    double std_error_of_var(double fourth_central) const {
        if (n < 2) return 0.0;
        const double nn = static_cast<double>(n);
        const double v = (fourth_central - (nn - 3.0) / (nn - 1.0) * var * var) / nn;
        return std::sqrt(std::max(v, 0.0));
    }
};

inline MeanVar mean_var(std::span<const double> v) {
    MeanVar mv;
    mv.n = v.size();
    if (mv.n == 0) return mv;
    mv.mean = mean(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = sqr(v[i] - mv.mean);
    mv.var = mv.n > 1 ? pairwise_sum(sq) / static_cast<double>(mv.n - 1) : 0.0;
    return mv;
}

inline double fourth_central_moment(std::span<const double> v, double mu) {
    std::vector<double> q(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) q[i] = sqr(sqr(v[i] - mu));
    return v.empty() ? 0.0 : pairwise_sum(q) / static_cast<double>(v.size());
}

// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    require_arg(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// One-sample KS statistic against an analytic CDF.
template <class Cdf>
double ks_vs_cdf(std::vector<double> sample, Cdf&& cdf) {
    require_arg(!sample.empty(), "ks_vs_cdf: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = cdf(sample[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
        d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    }
    return d;
}

// Critical coefficient c(alpha) = sqrt(-ln(alpha/2)/2); the two-sample
// threshold at equal sizes N is c(alpha) * sqrt(2/N).
inline double ks_critical_coefficient(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "ks_critical_coefficient: alpha in (0,1)");
    return std::sqrt(-0.5 * std::log(0.5 * alpha));
}

inline double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m) {
    return ks_critical_coefficient(alpha) *
           std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

struct Histogram {
    std::vector<double> edges;   // size bins + 1
    std::vector<double> counts;  // size bins
    std::size_t n_total = 0;     // includes out-of-range samples

    double bin_width(std::size_t k) const { return edges[k + 1] - edges[k]; }
    double density(std::size_t k) const {
        return counts[k] / (static_cast<double>(n_total) * bin_width(k));
    }
    // Standard error of the density estimate in bin k.
    double density_se(std::size_t k) const {
        const double n = static_cast<double>(n_total);
        const double p = counts[k] / n;
        return std::sqrt(std::max(p * (1.0 - p), 0.0) / n) / bin_width(k);
    }
};

inline Histogram histogram(std::span<const double> sample, std::vector<double> edges) {
    Histogram h;
    h.edges = std::move(edges);
    h.counts.assign(h.edges.size() - 1, 0.0);
    h.n_total = sample.size();
    for (double x : sample) {
        if (x < h.edges.front() || x >= h.edges.back()) continue;
        const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - h.edges.begin()) - 1;
        h.counts[k] += 1.0;
    }
    return h;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

}  // namespace conic::stats
