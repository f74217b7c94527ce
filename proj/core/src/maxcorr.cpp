#include "maxlln/maxcorr.hpp"

#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>

#include "linalg.hpp"
#include "maxlln/errors.hpp"
#include "maxlln/hac.hpp"

namespace maxlln::maxcorr {

namespace {

void check_data(const RegressionData& d) {
    if (d.y.size() < 3) throw ArgumentError("regression needs at least 3 observations");
    if (d.X.cols() > 0 && d.X.rows() != d.y.size()) throw ArgumentError("X and y have different lengths");
    if (!d.y.allFinite() || !d.X.allFinite()) throw DegenerateDataError("regression data contain non-finite values");
}

RegressionData with_intercept(const RegressionData& d) {
    RegressionData out;
    out.y = d.y;
    out.X.resize(d.y.size(), d.X.cols() + 1);
    out.X.col(0).setOnes();
    if (d.X.cols() > 0) out.X.rightCols(d.X.cols()) = d.X;
    return out;
}

}  // namespace

OlsFit ols_fit(const RegressionData& data) {
    check_data(data);
    OlsFit fit;
    if (data.X.cols() == 0) {
        fit.residuals = data.y;
        return fit;
    }
    detail::require_well_conditioned(data.X, "regressor matrix");
    fit.phi = data.X.colPivHouseholderQr().solve(data.y);
    fit.residuals = data.y - data.X * fit.phi;
    return fit;
}

Autocorr residual_autocorr(const Eigen::VectorXd& e, std::int64_t h) {
    const auto n = static_cast<std::int64_t>(e.size());
    if (h < 0 || (h > 0 && h > n - 2)) throw ArgumentError("lag h must satisfy 1 <= h <= n - 2");
    const double g0 = e.squaredNorm() / static_cast<double>(n);
    if (!(g0 > 0.0)) throw DegenerateDataError("residuals have zero variance");
    if (h == 0) return {g0, 1.0};
    const double g = e.tail(n - h).dot(e.head(n - h)) / static_cast<double>(n);
    return {g, g / g0};
}

Eigen::MatrixXd zscore_panel(const RegressionData& data, const Eigen::VectorXd& e, std::int64_t k_n) {
    check_data(data);
    const Eigen::Index n = e.size();
    if (n != data.y.size()) throw ArgumentError("residuals and data have different lengths");
    if (k_n < 1 || 4 * k_n > n) throw ArgumentError("k_n must satisfy 1 <= k_n <= n/4");
    const auto nd = static_cast<double>(n);
    const double g0 = residual_autocorr(e, 0).gamma;
    const Eigen::Index kx = data.X.cols();
    const Eigen::MatrixXd& X = data.X;

    // H^{-1} x_{t-1} e_t for every t (rows), only when covariates exist
    Eigen::MatrixXd A;
    Eigen::RowVectorXd D0;
    if (kx > 0) {
        const Eigen::MatrixXd H = X.transpose() * X / nd;
        detail::require_well_conditioned(X, "regressor matrix");
        A = H.ldlt().solve((X.array().colwise() * e.array()).matrix().transpose()).transpose();
        D0 = 2.0 * (X.array().colwise() * e.array().square()).colwise().mean().matrix();
    }

    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, k_n);
    for (std::int64_t h = 1; h <= k_n; ++h) {
        const Eigen::Index m = n - h;
        const double rho = residual_autocorr(e, h).rho;
        const Eigen::VectorXd prod = e.tail(m).cwiseProduct(e.head(m));  // t = h..n-1
        const double prod_mean = prod.mean();
        Eigen::VectorXd col = (prod.array() - prod_mean) - rho * (e.tail(m).array().square() - g0);
        if (kx > 0) {
            // D(h): x_{t-1} e_t e_{t-h} + e_t x_{t-1-h} e_{t-h}, t = h..n-1
            const Eigen::ArrayXd w = prod.array();
            const Eigen::RowVectorXd Dp =
                (X.bottomRows(m).array().colwise() * w).colwise().mean().matrix() +
                (X.topRows(m).array().colwise() * w).colwise().mean().matrix();
            // D(-h): x_{t-1} e_t e_{t+h} + e_t x_{t-1+h} e_{t+h}, t = 0..n-1-h
            const Eigen::RowVectorXd Dm =
                (X.topRows(m).array().colwise() * w).colwise().mean().matrix() +
                (X.bottomRows(m).array().colwise() * w).colwise().mean().matrix();
            const Eigen::VectorXd frakD = (static_cast<double>(m) / nd) * (Dp + Dm - 2.0 * rho * D0).transpose();
            col -= A.bottomRows(m) * frakD;
        }
        Z.col(h - 1).tail(m) = col / g0;
    }
    return Z;
}

CritValue gaussian_critval(const Eigen::MatrixXd& z, double level, std::int64_t bandwidth,
                           const GaussianMaxOptions& sim, std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
    if (z.cols() < 1) throw ArgumentError("z panel has no columns");
    CritValue cv;
    cv.bandwidth = bandwidth < 0 ? hac::default_bandwidth(z.rows()) : bandwidth;
    cv.covariance = hac::bartlett_covariance(z, cv.bandwidth);
    cv.sigma2 = cv.covariance.diagonal();
    if (!(cv.sigma2.minCoeff() > 0.0)) throw DegenerateDataError("a long-run variance estimate is zero");
    cv.crit_value = GaussianMax(cv.covariance, sim, seed).critical_value(level);
    return cv;
}

double mixing_schedule_limit(std::int64_t n) noexcept {
    const auto nd = static_cast<double>(n);
    return std::pow(nd, 1.0 / 9.0) * std::cbrt(std::log(nd));
}

MaxCorrReport maxcorr_test(const RegressionData& input, std::int64_t k_n, double level,
                           const MaxCorrOptions& options, std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
    const RegressionData data = options.intercept ? with_intercept(input) : input;
    const OlsFit fit = ols_fit(data);
    const Eigen::Index n = data.y.size();
    // an exact fit leaves only rounding noise in the residuals
    if (!(fit.residuals.squaredNorm() > 1e-24 * data.y.squaredNorm())) {
        throw DegenerateDataError("residuals have zero variance");
    }

    MaxCorrReport rep;
    rep.n = n;
    rep.k_n = k_n;
    rep.level = level;
    rep.phi_hat = fit.phi;
    const Eigen::MatrixXd Z = zscore_panel(data, fit.residuals, k_n);
    rep.rho_hat.resize(k_n);
    for (std::int64_t h = 1; h <= k_n; ++h) rep.rho_hat(h - 1) = residual_autocorr(fit.residuals, h).rho;

    Eigen::Index at = 0;
    rep.statistic = std::sqrt(static_cast<double>(n)) * rep.rho_hat.cwiseAbs().maxCoeff(&at);
    rep.argmax_lag = at + 1;

    if (static_cast<double>(k_n) > mixing_schedule_limit(n)) {
        rep.warnings.push_back(fmt::format("k_n = {} exceeds the mixing-case schedule n^(1/9) (ln n)^(1/3) = {:.3f}",
                                           k_n, mixing_schedule_limit(n)));
    }
    const ScoreCritical sc = score_critical(Z, rep.statistic, level, options.bandwidth, false, options.sim, seed);
    rep.sigma2_hat = sc.sigma2;
    rep.bandwidth = sc.bandwidth;
    rep.crit_value = sc.crit_value;
    rep.p_value = sc.p_value;
    rep.reject = rep.statistic > rep.crit_value;
    return rep;
}

RegressionData simulate(const MaxCorrDesign& d, rng::StreamKey key) {
    if (d.n < 3) throw ConfigError("design n must be >= 3");
    if (d.kx < 0) throw ConfigError("design kx must be >= 0");
    if (static_cast<std::int64_t>(d.phi.size()) != d.kx) throw ConfigError("design phi must have kx entries");
    if (!(d.noise_scale >= 0.0)) throw ConfigError("design noise_scale must be >= 0");
    RegressionData out;
    if (d.kx > 0) {
        out.X = detail::gaussian_ar1_columns(d.n, d.kx, d.x_rho, key.child(0));
    } else {
        out.X.resize(d.n, 0);
    }
    const Eigen::VectorXd eps = detail::gaussian_ar1_columns(d.n, 1, d.error_ar, key.child(1)).col(0);
    out.y = d.noise_scale * eps;
    if (d.kx > 0) out.y += out.X * Eigen::Map<const Eigen::VectorXd>(d.phi.data(), d.kx);
    return out;
}

}  // namespace maxlln::maxcorr
