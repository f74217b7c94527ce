#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "maxlln/gaussian_max.hpp"
#include "maxlln/rng.hpp"

namespace maxlln::maxcorr {

/// y_t = phi' x_{t-1} + e_t. Row t of X holds the lagged covariates x_{t-1};
/// X may have zero columns.
struct RegressionData {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
};

struct OlsFit {
    Eigen::VectorXd phi;
    Eigen::VectorXd residuals;
};

/// Least squares through a column-pivoted QR. Throws SingularDesignError when
/// cond(X'X) >= 1e10. With no columns the residuals are y itself.
[[nodiscard]] OlsFit ols_fit(const RegressionData& data);

struct Autocorr {
    double gamma = 0.0;
    double rho = 0.0;
};

/// gamma(h) = n^{-1} sum_{t=h+1}^{n} e_t e_{t-h}, rho(h) = gamma(h) / gamma(0).
/// Throws DegenerateDataError when gamma(0) = 0.
[[nodiscard]] Autocorr residual_autocorr(const Eigen::VectorXd& residuals, std::int64_t h);

/// n x k_n plug-in z_t(h) for lags h = 1..k_n: centered lag products minus
/// rho(h) times centered squares minus the estimation-effect correction, all
/// divided by gamma(0). Rows t <= h are zero.
[[nodiscard]] Eigen::MatrixXd zscore_panel(const RegressionData& data, const Eigen::VectorXd& residuals,
                                           std::int64_t k_n);

struct CritValue {
    Eigen::VectorXd sigma2;   ///< per-lag long-run variances
    Eigen::MatrixXd covariance;
    double crit_value = 0.0;
    std::int64_t bandwidth = 0;
};

/// Bartlett HAC covariance of the z columns (bandwidth floor(n^{1/3}) when
/// negative) and the (1 - level) quantile of the simulated max |Z|.
[[nodiscard]] CritValue gaussian_critval(const Eigen::MatrixXd& z_panel, double level, std::int64_t bandwidth,
                                         const GaussianMaxOptions& sim, std::uint64_t seed);

struct MaxCorrOptions {
    std::int64_t bandwidth = -1;
    GaussianMaxOptions sim{};
    bool intercept = false;
};

struct MaxCorrReport {
    double statistic = 0.0;       ///< sqrt(n) max_h |rho(h)|
    std::int64_t argmax_lag = 0;  ///< 1-based lag attaining the max
    Eigen::VectorXd phi_hat;
    Eigen::VectorXd rho_hat;      ///< lags 1..k_n
    Eigen::VectorXd sigma2_hat;
    double crit_value = 0.0;
    double p_value = 1.0;
    std::int64_t k_n = 0;
    std::int64_t n = 0;
    double level = 0.05;
    std::int64_t bandwidth = 0;
    bool reject = false;
    std::vector<std::string> warnings;
};

/// k_n above which the mixing-case schedule n^{1/9} (ln n)^{1/3} is exceeded.
[[nodiscard]] double mixing_schedule_limit(std::int64_t n) noexcept;

[[nodiscard]] MaxCorrReport maxcorr_test(const RegressionData& data, std::int64_t k_n, double level,
                                         const MaxCorrOptions& options, std::uint64_t seed);

/// Simulation design: k_x exogenous Gaussian AR(1) regressors with
/// coefficient x_rho, errors Gaussian AR(1) with coefficient error_ar
/// (0 gives iid N(0,1)).
struct MaxCorrDesign {
    std::int64_t n = 500;
    std::int64_t kx = 2;
    double x_rho = 0.5;
    double error_ar = 0.0;
    std::vector<double> phi{1.0, -0.5};
    double noise_scale = 1.0;  ///< multiplies the errors; 0 gives a degenerate sample
};

[[nodiscard]] RegressionData simulate(const MaxCorrDesign& design, rng::StreamKey key);

}  // namespace maxlln::maxcorr
