#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "maxlln/rng.hpp"

namespace maxlln::detail {

inline constexpr double kMaxCondition = 1e10;

/// cond(X'X) = (s_max / s_min)^2 from the singular values of X; infinite
/// when X is rank deficient.
[[nodiscard]] double gram_condition(const Eigen::MatrixXd& X);

/// Throws SingularDesignError naming `what` when cond(X'X) >= 1e10.
void require_well_conditioned(const Eigen::MatrixXd& X, const char* what);

/// n x k panel of independent stationary Gaussian AR(1) columns with
/// coefficient rho and unit innovation variance.
[[nodiscard]] Eigen::MatrixXd gaussian_ar1_columns(std::int64_t n, std::int64_t k, double rho, rng::StreamKey key);

}  // namespace maxlln::detail
