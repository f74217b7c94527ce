#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace maxlln::cli {

/// Numeric CSV with a header row.
struct Table {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;

    [[nodiscard]] Eigen::Index column(const std::string& name) const;  ///< -1 when absent
};

/// Throws DegenerateDataError for ragged rows or non-numeric cells and
/// ConfigError when the file cannot be opened.
[[nodiscard]] Table read_csv(const std::string& path);
[[nodiscard]] Table parse_csv(std::istream& in, const std::string& source);

/// Round-trip precision, one row per line.
[[nodiscard]] std::string to_csv(const std::vector<std::string>& columns,
                                 const std::vector<std::vector<double>>& rows);

[[nodiscard]] std::string format_number(double v);

}  // namespace maxlln::cli
