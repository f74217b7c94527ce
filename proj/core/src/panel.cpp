#include "maxlln/panel.hpp"

#include <ostream>

#include <fmt/format.h>

#include "maxlln/errors.hpp"

namespace maxlln {

Panel::Panel(Eigen::MatrixXd data, PanelMeta meta) : data_(std::move(data)), meta_(std::move(meta)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
        throw ArgumentError("panel must have n >= 1 and k >= 1");
    }
    if (!data_.allFinite()) {
        throw DegenerateDataError("panel contains non-finite entries");
    }
}

Panel axis_swap(const Panel& panel) { return Panel(panel.data().transpose(), panel.meta()); }

void write_panel_csv(std::ostream& os, const Panel& panel) {
    const auto& d = panel.data();
    std::string line;
    for (Eigen::Index i = 0; i < d.cols(); ++i) {
        if (i > 0) {
            line += ',';
        }
        line += fmt::format("{}", i + 1);
    }
    os << line << '\n';
    for (Eigen::Index t = 0; t < d.rows(); ++t) {
        line.clear();
        for (Eigen::Index i = 0; i < d.cols(); ++i) {
            if (i > 0) {
                line += ',';
            }
            line += fmt::format("{}", d(t, i));
        }
        os << line << '\n';
    }
}

}  // namespace maxlln
