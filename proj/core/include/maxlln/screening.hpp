#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "maxlln/gaussian_max.hpp"
#include "maxlln/panel.hpp"
#include "maxlln/rng.hpp"

namespace maxlln::screening {

struct MarginalFit {
    double delta = 0.0;  ///< intercept
    double phi = 0.0;    ///< centered-moment slope
};

/// Simple regression of y on (1, x). Throws DegenerateDataError when x has
/// no variation.
[[nodiscard]] MarginalFit marginal_fit(const Eigen::VectorXd& y, const Eigen::VectorXd& x);

struct ScreeningStat {
    double statistic = 0.0;   ///< sqrt(n) max_i |phi_i|
    Eigen::VectorXd phi_hat;
    Eigen::Index argmax = 0;  ///< zero-based, ties to the smallest index
};

[[nodiscard]] ScreeningStat screening_stat(const Panel& x, const Eigen::VectorXd& y);

/// Schedule exponents for ln(k_n) = o(n^s).
/// g(b, lambda) = lambda / (8 + 2 lambda) / max(7/6, 1 + b).
[[nodiscard]] double schedule_g(double b, double lambda);
/// s(b, lambda) by the tail/memory case table; lambda may be +inf.
[[nodiscard]] double schedule_s(double b, double lambda);

struct ScreeningOptions {
    std::int64_t bandwidth = -1;
    GaussianMaxOptions sim{};
    /// Tail-growth and memory-size parameters when known; unset means the
    /// conservative b = 1, lambda = inf case, i.e. s = 1/4.
    std::optional<double> b;
    std::optional<double> lambda;
};

struct ScreeningReport {
    double statistic = 0.0;
    Eigen::VectorXd phi_hat;
    Eigen::VectorXd t_stat;       ///< sqrt(n) phi_i / sigma_i
    Eigen::Index argmax = 0;      ///< zero-based
    Eigen::VectorXd sigma2_hat;
    double crit_value = 0.0;
    double p_value = 1.0;
    std::int64_t k_n = 0;
    std::int64_t n = 0;
    double level = 0.05;
    std::int64_t bandwidth = 0;
    double schedule_exponent = 0.25;
    bool reject = false;
    std::vector<std::string> warnings;
};

/// Scores [0,1] H_i^{-1} (1, x_it)' (y_t - ybar) = (x_it - xbar_i)(y_t - ybar) / s2_i.
[[nodiscard]] Eigen::MatrixXd screening_scores(const Panel& x, const Eigen::VectorXd& y);

[[nodiscard]] ScreeningReport screening_test(const Panel& x, const Eigen::VectorXd& y, double level,
                                             const ScreeningOptions& options, std::uint64_t seed);

/// k Gaussian AR(1) covariates (coefficient x_rho) and y = signal x_j + e with
/// Gaussian AR(1) noise e (coefficient y_ar). signal_index is zero-based;
/// negative means no signal.
struct ScreeningDesign {
    std::int64_t n = 500;
    std::int64_t k = 50;
    double x_rho = 0.5;
    double y_ar = 0.3;
    std::int64_t signal_index = -1;
    double signal = 0.5;
    double noise_scale = 1.0;
};

struct ScreeningSample {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

[[nodiscard]] ScreeningSample simulate(const ScreeningDesign& design, rng::StreamKey key);

}  // namespace maxlln::screening
