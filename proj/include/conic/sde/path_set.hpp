#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "conic/sde/time_grid.hpp"

namespace conic::sde {

// A set of simulated trajectories on a common grid. Values are stored
// row-major, one row per path; immutable by convention after construction.
struct PathSet {
    TimeGrid grid;
    std::size_t n_paths = 0;
    std::vector<double> values;  // n_paths * grid.n_times()
    std::uint64_t seed = 0;
    std::string label;

    double at(std::size_t path, std::size_t k) const { return values[path * grid.n_times() + k]; }
    double& at(std::size_t path, std::size_t k) { return values[path * grid.n_times() + k]; }
    std::span<const double> path(std::size_t p) const {
        return {values.data() + p * grid.n_times(), grid.n_times()};
    }
    std::vector<double> terminal_values() const {
        const std::size_t nt = grid.n_times();
        std::vector<double> out(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) out[p] = values[p * nt + nt - 1];
        return out;
    }
    std::vector<double> at_time(std::size_t k) const {
        std::vector<double> out(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) out[p] = values[p * grid.n_times() + k];
        return out;
    }
};

inline PathSet make_path_set(TimeGrid grid, std::size_t n_paths, std::uint64_t seed,
                             std::string label) {
    PathSet ps;
    ps.grid = std::move(grid);
    ps.n_paths = n_paths;
    ps.values.assign(n_paths * ps.grid.n_times(), 0.0);
    ps.seed = seed;
    ps.label = std::move(label);
    return ps;
}

}  // namespace conic::sde
