#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace maxlln {

struct PanelMeta {
    std::uint64_t seed = 0;
    /// Hex digest of the generating ProcessSpec; empty for external data.
    std::string spec_hash;
};

/// n x k block of observations: rows are time points, columns coordinates.
/// Immutable once built; every entry is finite.
class Panel {
public:
    Panel(Eigen::MatrixXd data, PanelMeta meta = {});

    [[nodiscard]] const Eigen::MatrixXd& data() const noexcept { return data_; }
    [[nodiscard]] Eigen::Index n() const noexcept { return data_.rows(); }
    [[nodiscard]] Eigen::Index k() const noexcept { return data_.cols(); }
    [[nodiscard]] double operator()(Eigen::Index t, Eigen::Index i) const { return data_(t, i); }
    [[nodiscard]] const PanelMeta& meta() const noexcept { return meta_; }

    friend bool operator==(const Panel& a, const Panel& b) { return a.data_ == b.data_; }

private:
    Eigen::MatrixXd data_;
    PanelMeta meta_;
};

/// Transposed panel: (t, i) -> (i, t). Cross-coordinate means of the input
/// become column means of the result.
[[nodiscard]] Panel axis_swap(const Panel& panel);

/// CSV with a header of 1-based coordinate indices and one row per time
/// step. Values are printed with round-trip precision.
void write_panel_csv(std::ostream& os, const Panel& panel);

}  // namespace maxlln
