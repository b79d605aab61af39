#pragma once

#include <cstddef>
#include <vector>

#include "conic/common.hpp"

namespace conic::sde {

// Strictly increasing times in years, starting at 0.
struct TimeGrid {
    std::vector<double> times;

    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> t) : times(std::move(t)) { validate(); }

    static TimeGrid uniform(double horizon, std::size_t n_steps) {
        require(horizon > 0.0 && std::isfinite(horizon), "TimeGrid: horizon must be positive");
        require(n_steps >= 1, "TimeGrid: need at least one step");
        std::vector<double> t(n_steps + 1);
        for (std::size_t k = 0; k <= n_steps; ++k)
            t[k] = horizon * static_cast<double>(k) / static_cast<double>(n_steps);
        return TimeGrid(std::move(t));
    }

    std::size_t n_times() const { return times.size(); }
    std::size_t n_steps() const { return times.empty() ? 0 : times.size() - 1; }
    double horizon() const { return times.back(); }
    double dt(std::size_t k) const { return times[k + 1] - times[k]; }

    void validate() const {
        require_arg(!times.empty(), "TimeGrid: empty");
        require_arg(times.front() == 0.0, "TimeGrid: must start at 0");
        for (std::size_t k = 0; k + 1 < times.size(); ++k)
            require_arg(std::isfinite(times[k + 1]) && times[k + 1] > times[k],
                        "TimeGrid: times must be finite and strictly increasing");
    }
};

}  // namespace conic::sde
