#pragma once

// Initial survival curve S0(t) = exp(-int_0^t h(s) ds) with piecewise
// constant hazards. Pillar k carries the hazard on (T_{k-1}, T_k]; the last
// hazard extends flat beyond the final pillar.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "conic/common.hpp"

namespace conic::credit {

class SurvivalCurve {
public:
    SurvivalCurve() = default;

    explicit SurvivalCurve(std::vector<std::pair<double, double>> pillars)
        : pillars_(std::move(pillars)) {
        require_arg(!pillars_.empty(), "SurvivalCurve: need at least one pillar");
        double prev_t = 0.0;
        cum_hazard_.reserve(pillars_.size());
        double acc = 0.0;
        for (const auto& [t, h] : pillars_) {
            require_arg(t > prev_t, "SurvivalCurve: pillar times must be positive and increasing");
            require_arg(h >= 0.0 && std::isfinite(h), "SurvivalCurve: hazards must be finite, >= 0");
            acc += h * (t - prev_t);
            cum_hazard_.push_back(acc);
            prev_t = t;
        }
    }

    static SurvivalCurve flat(double hazard, double pillar = 100.0) {
        return SurvivalCurve({{pillar, hazard}});
    }

    const std::vector<std::pair<double, double>>& pillars() const { return pillars_; }

    double hazard(double t) const {
        for (std::size_t k = 0; k < pillars_.size(); ++k)
            if (t <= pillars_[k].first) return pillars_[k].second;
        return pillars_.back().second;  // flat extrapolation
    }

    double cumulative_hazard(double t) const {
        require(t >= 0.0 && std::isfinite(t), "SurvivalCurve: t must be finite, >= 0");
        double prev_t = 0.0, prev_h = 0.0;
        for (std::size_t k = 0; k < pillars_.size(); ++k) {
            if (t <= pillars_[k].first)
                return prev_h + pillars_[k].second * (t - prev_t);
            prev_h = cum_hazard_[k];
            prev_t = pillars_[k].first;
        }
        return prev_h + pillars_.back().second * (t - prev_t);
    }

    double survival(double t) const { return std::exp(-cumulative_hazard(t)); }

    // d S0 / dt = -h(t) S0(t)
    double survival_derivative(double t) const { return -hazard(t) * survival(t); }

private:
    std::vector<std::pair<double, double>> pillars_;
    std::vector<double> cum_hazard_;
};

// Text records "pillar_years,hazard_rate", one per line; '#' starts a comment.
inline SurvivalCurve parse_survival_curve(std::istream& in) {
    std::vector<std::pair<double, double>> pillars;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        const auto comma = trimmed.find(',');
        require_arg(comma != std::string::npos,
                    "survival curve: expected 'pillar_years,hazard_rate' records");
        pillars.emplace_back(std::stod(trimmed.substr(0, comma)),
                             std::stod(trimmed.substr(comma + 1)));
    }
    return SurvivalCurve(std::move(pillars));
}

inline SurvivalCurve load_survival_curve(const std::string& path) {
    std::ifstream in(path);
    require_arg(in.good(), "survival curve: cannot open " + path);
    return parse_survival_curve(in);
}

inline void write_survival_curve(std::ostream& out, const SurvivalCurve& curve) {
    out << "# pillar_years,hazard_rate\n";
    for (const auto& [t, h] : curve.pillars()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, h);
        out << buf;
    }
}

}  // namespace conic::credit
