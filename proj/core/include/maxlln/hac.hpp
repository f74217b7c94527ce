#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace maxlln::hac {

/// floor(n^{1/3}).
[[nodiscard]] std::int64_t default_bandwidth(std::int64_t n) noexcept;

/// Bartlett long-run covariance of the columns of Z (rows are time):
/// G0 + sum_{l=1}^{L} (1 - l/(L+1)) (G_l + G_l'), G_l = n^{-1} sum_t z_t z_{t-l}'.
/// Columns are demeaned first when `demean` is set.
[[nodiscard]] Eigen::MatrixXd bartlett_covariance(const Eigen::MatrixXd& Z, std::int64_t L, bool demean = false);

/// Diagonal of bartlett_covariance without forming the full matrix.
[[nodiscard]] Eigen::VectorXd bartlett_variances(const Eigen::MatrixXd& Z, std::int64_t L, bool demean = false);

/// Nearest positive semidefinite matrix in Frobenius norm (negative
/// eigenvalues clipped to zero). Throws NumericalError when the input is not
/// finite or the result is still materially indefinite.
[[nodiscard]] Eigen::MatrixXd nearest_psd(const Eigen::MatrixXd& S);

}  // namespace maxlln::hac
