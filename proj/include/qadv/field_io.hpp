#pragma once

#include "qadv/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace qadv {

namespace detail {

/// Shortest decimal that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer a shorter form when it round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char s[32];
        std::snprintf(s, sizeof(s), "%.*g", prec, v);
        if (std::strtod(s, nullptr) == v) return s;
    }
    return buf;
}

inline std::vector<std::vector<double>> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            while (end && *end == ' ') ++end;
            if (cell.empty() || end == cell.c_str() || (end && *end != '\0'))
                throw std::invalid_argument("non-numeric cell '" + cell + "' in " + path.string());
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/// CSV layout: ny rows of nx comma-separated values, row j ascending in y.
inline void save_field_csv(const ScalarField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const Grid2D& g = field.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) out << ',';
            out << detail::format_double(field.at(i, j));
        }
        out << '\n';
    }
}

inline ScalarField load_field_csv(const std::filesystem::path& path, const Grid2D& grid) {
    const auto rows = detail::parse_csv(path);
    if (static_cast<int>(rows.size()) != grid.ny)
        throw std::invalid_argument("row count mismatch in " + path.string() + ": got " +
                                    std::to_string(rows.size()) + ", grid has " +
                                    std::to_string(grid.ny));
    Eigen::VectorXd vals(grid.size());
    for (int j = 0; j < grid.ny; ++j) {
        if (static_cast<int>(rows[j].size()) != grid.nx)
            throw std::invalid_argument("column count mismatch in " + path.string());
        for (int i = 0; i < grid.nx; ++i) vals[grid.index(i, j)] = rows[j][i];
    }
    return ScalarField(grid, std::move(vals));
}

inline VelocityField load_velocity_csv(const std::filesystem::path& path_u,
                                       const std::filesystem::path& path_v, const Grid2D& grid) {
    ScalarField fu = load_field_csv(path_u, grid);
    ScalarField fv = load_field_csv(path_v, grid);
    return VelocityField(grid, std::move(fu.values), std::move(fv.values));
}

/// 8-bit ASCII PGM (P2), values scaled linearly from [min,max] to [0,255].
/// The scaling is recorded in a JSON sidecar next to the image.
inline void save_field_pgm(const ScalarField& field, const std::filesystem::path& path) {
    const Grid2D& g = field.grid;
    const double lo = field.values.minCoeff();
    const double hi = field.values.maxCoeff();
    const double span = hi > lo ? hi - lo : 1.0;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P2\n" << g.nx << ' ' << g.ny << "\n255\n";
    // image rows top to bottom correspond to descending y
    for (int j = g.ny - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx; ++i) {
            const int pix = static_cast<int>(std::lround((field.at(i, j) - lo) / span * 255.0));
            out << std::clamp(pix, 0, 255) << (i + 1 == g.nx ? '\n' : ' ');
        }
    }
    std::ofstream meta(path.string() + ".json");
    meta << "{ \"min\": " << detail::format_double(lo) << ", \"max\": "
         << detail::format_double(hi) << ", \"scale\": \"linear\", \"row_order\": \"y descending\" }\n";
}

}  // namespace qadv
