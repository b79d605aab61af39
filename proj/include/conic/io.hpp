#pragma once

// Numeric text IO: every value is written with 17 significant digits so the
// binary64 round-trips exactly; CSV and JSON writers for path sets and
// generic tables.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "conic/common.hpp"
#include "conic/sde/path_set.hpp"

namespace conic::io {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> r) { rows.push_back(std::move(r)); }
};

inline void write_csv(std::ostream& out, const Table& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out << (i ? "," : "") << t.header[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt17(row[i]);
        out << "\n";
    }
}

inline void write_csv_file(const std::string& path, const Table& t) {
    std::ofstream out(path);
    require_arg(out.good(), "write_csv: cannot open " + path);
    write_csv(out, t);
}

// PathSet CSV: header "t,path_0,...,path_{N-1}", one row per grid time.
inline void write_path_set_csv(std::ostream& out, const sde::PathSet& ps) {
    out << "t";
    for (std::size_t p = 0; p < ps.n_paths; ++p) out << ",path_" << p;
    out << "\n";
    for (std::size_t k = 0; k < ps.grid.n_times(); ++k) {
        out << fmt17(ps.grid.times[k]);
        for (std::size_t p = 0; p < ps.n_paths; ++p) out << "," << fmt17(ps.at(p, k));
        out << "\n";
    }
}

inline void write_path_set_csv_file(const std::string& path, const sde::PathSet& ps) {
    std::ofstream out(path);
    require_arg(out.good(), "write_path_set_csv: cannot open " + path);
    write_path_set_csv(out, ps);
}

// JSON variant: {"label":..., "seed":..., "times":[...], "values":[[...]]}
// with values[path][time_index].
inline void write_path_set_json(std::ostream& out, const sde::PathSet& ps) {
    out << "{\"label\":\"" << ps.label << "\",\"seed\":" << ps.seed << ",\"times\":[";
    for (std::size_t k = 0; k < ps.grid.n_times(); ++k)
        out << (k ? "," : "") << fmt17(ps.grid.times[k]);
    out << "],\"values\":[";
    for (std::size_t p = 0; p < ps.n_paths; ++p) {
        out << (p ? ",[" : "[");
        for (std::size_t k = 0; k < ps.grid.n_times(); ++k)
            out << (k ? "," : "") << fmt17(ps.at(p, k));
        out << "]";
    }
    out << "]}\n";
}

inline void write_path_set_json_file(const std::string& path, const sde::PathSet& ps) {
    std::ofstream out(path);
    require_arg(out.good(), "write_path_set_json: cannot open " + path);
    write_path_set_json(out, ps);
}

// Minimal CSV reader for round-trip checks: numeric cells only.
inline std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    std::istream& in) {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) header.push_back(cell);
            first = false;
        } else {
            std::vector<double> row;
            while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
            rows.push_back(std::move(row));
        }
    }
    return {header, rows};
}

inline std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv_file(
    const std::string& path) {
    std::ifstream in(path);
    require_arg(in.good(), "read_csv: cannot open " + path);
    return read_csv(in);
}

}  // namespace conic::io
