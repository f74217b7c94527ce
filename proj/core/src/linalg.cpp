#include "linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "maxlln/errors.hpp"
#include "maxlln/processes.hpp"

namespace maxlln::detail {

double gram_condition(const Eigen::MatrixXd& X) {
    if (X.cols() == 0) return 1.0;
    if (X.rows() < X.cols()) return std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    const double r = s(0) / smin;
    return r * r;
}

void require_well_conditioned(const Eigen::MatrixXd& X, const char* what) {
    if (!X.allFinite()) throw DegenerateDataError(fmt::format("{} contains non-finite values", what));
    const double cond = gram_condition(X);
    if (!(cond < kMaxCondition)) {
        throw SingularDesignError(fmt::format("{} is singular: cond(X'X) = {:.3g}", what, cond), cond);
    }
}

Eigen::MatrixXd gaussian_ar1_columns(std::int64_t n, std::int64_t k, double rho, rng::StreamKey key) {
    processes::ProcessSpec spec;
    spec.params = processes::MarkovParams{rho, processes::MarkovMap::linear, 1.0};
    spec.burn_in = 0;  // stationary start
    return processes::generate(spec, n, k, key).data();
}

}  // namespace maxlln::detail
