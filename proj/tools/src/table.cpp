#include "maxlln_cli/table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "maxlln/errors.hpp"

namespace maxlln::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r' && c != ' ' && c != '"') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Eigen::Index Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<Eigen::Index>(i);
    }
    return -1;
}

Table parse_csv(std::istream& in, const std::string& source) {
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw DegenerateDataError(fmt::format("{}: empty file", source));
    t.columns = split(line);
    std::vector<double> cells;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto parts = split(line);
        if (parts.size() != t.columns.size()) {
            throw DegenerateDataError(fmt::format("{}: row {} has {} fields, header has {}", source, rows + 2,
                                                  parts.size(), t.columns.size()));
        }
        for (std::size_t j = 0; j < parts.size(); ++j) {
            double v = 0.0;
            const auto& s = parts[j];
            const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
            if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
                throw DegenerateDataError(fmt::format("{}: row {} column '{}' is not a number", source, rows + 2,
                                                      t.columns[j]));
            }
            cells.push_back(v);
        }
        ++rows;
    }
    t.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(t.columns.size()));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < t.columns.size(); ++j)
            t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = cells[r * t.columns.size() + j];
    return t;
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("field 'input': cannot open '{}'", path));
    return parse_csv(in, path);
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j > 0) s += ',';
        s += columns[j];
    }
    s += '\n';
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j > 0) s += ',';
            s += format_number(r[j]);
        }
        s += '\n';
    }
    return s;
}

}  // namespace maxlln::cli
