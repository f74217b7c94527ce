#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "maxlln/gaussian_max.hpp"
#include "maxlln/rng.hpp"

namespace maxlln::partial {

/// y = delta' w_t + theta' x_t + u_t; W holds the k_n tested covariates and
/// X the fixed-dimension nuisance covariates (possibly none).
struct PartialData {
    Eigen::VectorXd y;
    Eigen::MatrixXd W;
    Eigen::MatrixXd X;
};

/// Columns of W with their projection on span(X) removed, computed from a
/// thin QR of X. Throws SingularDesignError when X is rank deficient.
[[nodiscard]] Eigen::MatrixXd residualize(const Eigen::MatrixXd& W, const Eigen::MatrixXd& X);

/// delta_i = v_i'y / v_i'v_i. Throws CollinearityError(i) when w_i lies in
/// span(X) up to tolerance.
[[nodiscard]] Eigen::VectorXd partial_delta(const Eigen::VectorXd& y, const Eigen::MatrixXd& W,
                                            const Eigen::MatrixXd& X);

/// s(b) = lim_{lambda -> inf} s(b, lambda): 1/4 for b < 1, 1/(2(1+b)) for b >= 1.
[[nodiscard]] double schedule_s(double b);

struct PartialOptions {
    std::int64_t bandwidth = -1;
    GaussianMaxOptions sim{};
    /// Moment-growth parameter when known; unset gives s = 1/4.
    std::optional<double> b;
};

struct PartialReport {
    double statistic = 0.0;     ///< max_i sqrt(n) |delta_i|
    Eigen::VectorXd delta_hat;
    Eigen::VectorXd t_stat;
    Eigen::Index argmax = 0;    ///< zero-based
    Eigen::VectorXd sigma2_hat;
    double crit_value = 0.0;
    double p_value = 1.0;
    std::int64_t k_n = 0;
    std::int64_t k_theta = 0;
    std::int64_t n = 0;
    double level = 0.05;
    std::int64_t bandwidth = 0;
    double schedule_exponent = 0.25;
    bool reject = false;
    std::vector<std::string> warnings;
};

[[nodiscard]] PartialReport partial_test(const PartialData& data, double level, const PartialOptions& options,
                                         std::uint64_t seed);

/// Nuisance x: k_theta Gaussian AR(1) columns (rho_x). Tested w_i: Gaussian
/// AR(1) (rho_w) plus w_load * x_{i mod k_theta}. Error u: Gaussian AR(1)
/// (rho_u). delta is zero except delta[signal_index] = signal.
struct PartialDesign {
    std::int64_t n = 500;
    std::int64_t k = 40;
    std::int64_t k_theta = 3;
    double rho_w = 0.5;
    double rho_x = 0.5;
    double rho_u = 0.3;
    double w_load = 0.5;
    double theta = 1.0;
    std::int64_t signal_index = -1;
    double signal = 0.5;
    double noise_scale = 1.0;
};

[[nodiscard]] PartialData simulate(const PartialDesign& design, rng::StreamKey key);

}  // namespace maxlln::partial
