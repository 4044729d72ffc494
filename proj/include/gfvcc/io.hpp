#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfvcc/metrics.hpp"

namespace gfvcc {

namespace detail {
/// Shortest round-trippable decimal representation.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < traj.columns.size(); ++i) {
        if (i) out << ',';
        out << traj.columns[i];
    }
    out << '\n';
    for (const auto& row : traj.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << detail::format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trajectory file: " + path);
    std::stringstream hdr(line);
    std::string cell;
    while (std::getline(hdr, cell, ',')) traj.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(traj.columns.size());
        const char* p = line.c_str();
        char* end = nullptr;
        while (*p) {
            row.push_back(std::strtod(p, &end));
            p = (*end == ',') ? end + 1 : end;
        }
        if (row.size() != traj.columns.size())
            throw std::runtime_error("malformed trajectory row in: " + path);
        traj.rows.push_back(std::move(row));
    }
    return traj;
}

inline void write_metrics(const std::string& path, const MetricsReport& rep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [key, value] : rep) out << key << '=' << detail::format_double(value) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline MetricsReport read_metrics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    MetricsReport rep;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed metrics line in: " + path);
        rep.emplace_back(line.substr(0, eq), std::strtod(line.c_str() + eq + 1, nullptr));
    }
    return rep;
}

inline std::string metrics_to_string(const MetricsReport& rep) {
    std::string out;
    for (const auto& [key, value] : rep) {
        out += key;
        out += '=';
        out += detail::format_double(value);
        out += '\n';
    }
    return out;
}

}  // namespace gfvcc
