#include "maxlln/partial.hpp"

#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>

#include "linalg.hpp"
#include "maxlln/errors.hpp"

namespace maxlln::partial {

namespace {

constexpr double kCollinear = 1e-12;

void check(const PartialData& d) {
    const Eigen::Index n = d.y.size();
    if (n < 3) throw ArgumentError("partial test needs at least 3 observations");
    if (d.W.rows() != n || (d.X.cols() > 0 && d.X.rows() != n)) {
        throw ArgumentError("y, W and X must have the same number of rows");
    }
    if (d.W.cols() < 1) throw ArgumentError("W has no columns");
    if (!d.y.allFinite() || !d.W.allFinite() || !d.X.allFinite()) {
        throw DegenerateDataError("partial data contain non-finite values");
    }
}

}  // namespace

Eigen::MatrixXd residualize(const Eigen::MatrixXd& W, const Eigen::MatrixXd& X) {
    if (X.cols() == 0) return W;
    if (X.rows() != W.rows()) throw ArgumentError("W and X have different row counts");
    detail::require_well_conditioned(X, "nuisance matrix");
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), X.cols());
    return W - Q * (Q.transpose() * W);
}

Eigen::VectorXd partial_delta(const Eigen::VectorXd& y, const Eigen::MatrixXd& W, const Eigen::MatrixXd& X) {
    check({y, W, X});
    const Eigen::MatrixXd V = residualize(W, X);
    Eigen::VectorXd delta(W.cols());
    for (Eigen::Index i = 0; i < W.cols(); ++i) {
        const double vv = V.col(i).squaredNorm();
        if (!(vv > kCollinear * W.col(i).squaredNorm()) || !(vv > 0.0)) {
            throw CollinearityError(fmt::format("tested covariate {} is collinear with the nuisance covariates", i + 1),
                                    static_cast<std::size_t>(i));
        }
        delta(i) = V.col(i).dot(y) / vv;
    }
    return delta;
}

double schedule_s(double b) {
    if (!(b > 0.0)) throw ArgumentError("b must be > 0");
    return b < 1.0 ? 0.25 : 1.0 / (2.0 * (1.0 + b));
}

PartialReport partial_test(const PartialData& data, double level, const PartialOptions& options,
                           std::uint64_t seed) {
    check(data);
    const Eigen::Index n = data.y.size();
    PartialReport rep;
    rep.n = n;
    rep.k_n = data.W.cols();
    rep.k_theta = data.X.cols();
    rep.level = level;
    rep.delta_hat = partial_delta(data.y, data.W, data.X);
    const double root_n = std::sqrt(static_cast<double>(n));
    rep.statistic = root_n * rep.delta_hat.cwiseAbs().maxCoeff(&rep.argmax);

    rep.schedule_exponent = options.b ? schedule_s(*options.b) : 0.25;
    const double lnk = std::log(static_cast<double>(rep.k_n));
    const double limit = std::pow(static_cast<double>(n), rep.schedule_exponent);
    if (lnk > limit) {
        rep.warnings.push_back(
            fmt::format("ln(k_n) = {:.3f} exceeds n^{:.4f} = {:.3f}", lnk, rep.schedule_exponent, limit));
    }

    const Eigen::MatrixXd V = residualize(data.W, data.X);
    const Eigen::VectorXd u = residualize(data.y, data.X).col(0);  // null-imposed residual
    if (!(u.squaredNorm() > 1e-24 * data.y.squaredNorm())) {
        throw DegenerateDataError("y lies in the span of the nuisance covariates");
    }
    Eigen::MatrixXd S(n, rep.k_n);
    for (Eigen::Index i = 0; i < rep.k_n; ++i) {
        const double g = V.col(i).squaredNorm() / static_cast<double>(n);
        S.col(i) = (V.col(i).array() * u.array() / g).matrix();
    }
    const ScoreCritical sc = score_critical(S, rep.statistic, level, options.bandwidth, true, options.sim, seed);
    rep.sigma2_hat = sc.sigma2;
    rep.bandwidth = sc.bandwidth;
    rep.crit_value = sc.crit_value;
    rep.p_value = sc.p_value;
    rep.t_stat = root_n * rep.delta_hat.array() / sc.sigma2.array().sqrt();
    rep.reject = rep.statistic > rep.crit_value;
    return rep;
}

PartialData simulate(const PartialDesign& d, rng::StreamKey key) {
    if (d.n < 3 || d.k < 1 || d.k_theta < 0) throw ConfigError("partial design needs n >= 3, k >= 1, k_theta >= 0");
    if (d.signal_index >= d.k) throw ConfigError("signal_index must be < k");
    if (!(d.noise_scale >= 0.0)) throw ConfigError("noise_scale must be >= 0");
    PartialData out;
    out.X = d.k_theta > 0 ? detail::gaussian_ar1_columns(d.n, d.k_theta, d.rho_x, key.child(0))
                          : Eigen::MatrixXd(d.n, 0);
    out.W = detail::gaussian_ar1_columns(d.n, d.k, d.rho_w, key.child(1));
    if (d.k_theta > 0) {
        for (std::int64_t i = 0; i < d.k; ++i) out.W.col(i) += d.w_load * out.X.col(i % d.k_theta);
    }
    out.y = d.noise_scale * detail::gaussian_ar1_columns(d.n, 1, d.rho_u, key.child(2)).col(0);
    if (d.k_theta > 0) out.y += d.theta * out.X.rowwise().sum();
    if (d.signal_index >= 0) out.y += d.signal * out.W.col(d.signal_index);
    return out;
}

}  // namespace maxlln::partial
