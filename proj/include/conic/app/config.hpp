#pragma once

// Flat key-value experiment configs with one [section] per experiment.
// Lines are "key = value"; '#' starts a comment. Unknown keys are rejected
// when a section is consumed through Params.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conic/common.hpp"
#include "conic/credit/survival_curve.hpp"

namespace conic::app {

using KvMap = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::map<std::string, KvMap> parse_config(std::istream& in) {
    std::map<std::string, KvMap> sections;
    std::string line, current;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require_arg(line.back() == ']', "config: malformed section at line " +
                                                std::to_string(line_no));
            current = trim(line.substr(1, line.size() - 2));
            require_arg(!current.empty(), "config: empty section name");
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        require_arg(eq != std::string::npos,
                    "config: expected 'key = value' at line " + std::to_string(line_no));
        require_arg(!current.empty(), "config: key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require_arg(!key.empty(), "config: empty key at line " + std::to_string(line_no));
        sections[current][key] = value;
    }
    return sections;
}

inline std::map<std::string, KvMap> load_config(const std::string& path) {
    std::ifstream in(path);
    require_arg(in.good(), "config: cannot open " + path);
    return parse_config(in);
}

// Typed accessor over one section; consume() verifies every key was read.
class Params {
public:
    Params() = default;
    explicit Params(KvMap kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double get_double(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return parse_double(key);
    }
    double require_double(const std::string& key) {
        require_arg(has(key), "config: missing required key '" + key + "'");
        return parse_double(key);
    }
    std::size_t get_size(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        touched_.insert(key);
        const long long v = std::stoll(kv_.at(key));
        require_arg(v >= 0, "config: key '" + key + "' must be nonnegative");
        return static_cast<std::size_t>(v);
    }
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        touched_.insert(key);
        return std::stoull(kv_.at(key));
    }
    std::string get_string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        touched_.insert(key);
        return kv_.at(key);
    }
    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        touched_.insert(key);
        const std::string v = kv_.at(key);
        require_arg(v == "true" || v == "false", "config: key '" + key + "' must be true/false");
        return v == "true";
    }
    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        touched_.insert(key);
        std::vector<double> out;
        std::stringstream ss(kv_.at(key));
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(std::stod(trim(cell)));
        require_arg(!out.empty(), "config: key '" + key + "' must list numbers");
        return out;
    }
    // hazard curves as "T1:h1,T2:h2,..."
    credit::SurvivalCurve get_curve(const std::string& key, const credit::SurvivalCurve& fb) {
        if (!has(key)) return fb;
        touched_.insert(key);
        std::vector<std::pair<double, double>> pillars;
        std::stringstream ss(kv_.at(key));
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto colon = cell.find(':');
            require_arg(colon != std::string::npos,
                        "config: key '" + key + "' must be T:h pairs");
            pillars.emplace_back(std::stod(trim(cell.substr(0, colon))),
                                 std::stod(trim(cell.substr(colon + 1))));
        }
        return credit::SurvivalCurve(std::move(pillars));
    }

    void consume() const {
        for (const auto& [key, value] : kv_)
            require_arg(touched_.count(key) != 0, "config: unknown key '" + key + "'");
    }

private:
    double parse_double(const std::string& key) {
        touched_.insert(key);
        try {
            return std::stod(kv_.at(key));
        } catch (const std::exception&) {
            throw std::invalid_argument("config: key '" + key + "' is not a number");
        }
    }

    KvMap kv_;
    std::set<std::string> touched_;
};

}  // namespace conic::app
