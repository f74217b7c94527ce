#include "maxlln/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "linalg.hpp"
#include "maxlln/errors.hpp"

namespace maxlln::screening {

namespace {

struct Centered {
    double mean = 0.0;
    double sxx = 0.0;  ///< n^{-1} sum (x - mean)^2
};

Centered center(const double* x, Eigen::Index n) {
    Centered c;
    for (Eigen::Index t = 0; t < n; ++t) c.mean += x[t];
    c.mean /= static_cast<double>(n);
    double scale = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        c.sxx += (x[t] - c.mean) * (x[t] - c.mean);
        scale += x[t] * x[t];
    }
    if (!(c.sxx > 1e-24 * scale) || !(c.sxx > 0.0)) {
        throw DegenerateDataError("covariate has zero sample variance");
    }
    c.sxx /= static_cast<double>(n);
    return c;
}

void check_inputs(const Panel& x, const Eigen::VectorXd& y) {
    if (x.n() != y.size()) throw ArgumentError("y and the covariate panel have different lengths");
    if (y.size() < 3) throw ArgumentError("screening needs at least 3 observations");
    if (!y.allFinite()) throw DegenerateDataError("y contains non-finite values");
}

}  // namespace

MarginalFit marginal_fit(const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
    if (x.size() != y.size() || y.size() < 2) throw ArgumentError("x and y must have equal length >= 2");
    const Eigen::Index n = y.size();
    const Centered c = center(x.data(), n);
    const double ybar = y.mean();
    double sxy = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) sxy += (x(t) - c.mean) * (y(t) - ybar);
    sxy /= static_cast<double>(n);
    MarginalFit f;
    f.phi = sxy / c.sxx;
    f.delta = ybar - f.phi * c.mean;
    return f;
}

ScreeningStat screening_stat(const Panel& x, const Eigen::VectorXd& y) {
    check_inputs(x, y);
    ScreeningStat s;
    s.phi_hat.resize(x.k());
    double best = -1.0;
    for (Eigen::Index i = 0; i < x.k(); ++i) {
        s.phi_hat(i) = marginal_fit(y, x.data().col(i)).phi;
        if (std::abs(s.phi_hat(i)) > best) {
            best = std::abs(s.phi_hat(i));
            s.argmax = i;
        }
    }
    s.statistic = std::sqrt(static_cast<double>(x.n())) * best;
    return s;
}

double schedule_g(double b, double lambda) {
    if (!(b > 0.0) || !(lambda > 0.0)) throw ArgumentError("schedule needs b > 0 and lambda > 0");
    const double mem = std::isinf(lambda) ? 0.5 : lambda / (8.0 + 2.0 * lambda);
    return mem / std::max(7.0 / 6.0, 1.0 + b);
}

double schedule_s(double b, double lambda) {
    if (!(b > 0.0) || !(lambda > 0.0)) throw ArgumentError("schedule needs b > 0 and lambda > 0");
    if (b >= 1.0) {
        const double mem = std::isinf(lambda) ? 0.5 : lambda / (8.0 + 2.0 * lambda);
        return mem / (1.0 + b);
    }
    const double threshold = b <= 1.0 / 6.0 ? 28.0 / 5.0 : 4.0 / (2.0 / (1.0 + b) - 1.0);
    return lambda >= threshold ? 0.25 : schedule_g(b, lambda);
}

Eigen::MatrixXd screening_scores(const Panel& x, const Eigen::VectorXd& y) {
    check_inputs(x, y);
    const Eigen::Index n = x.n();
    const Eigen::VectorXd v = y.array() - y.mean();
    Eigen::MatrixXd S(n, x.k());
    for (Eigen::Index i = 0; i < x.k(); ++i) {
        const Centered c = center(x.data().col(i).data(), n);
        S.col(i) = ((x.data().col(i).array() - c.mean) * v.array() / c.sxx).matrix();
    }
    return S;
}

ScreeningReport screening_test(const Panel& x, const Eigen::VectorXd& y, double level,
                               const ScreeningOptions& options, std::uint64_t seed) {
    const ScreeningStat st = screening_stat(x, y);
    if (!((y.array() - y.mean()).matrix().squaredNorm() > 1e-24 * y.squaredNorm())) {
        throw DegenerateDataError("y has zero sample variance");
    }
    ScreeningReport rep;
    rep.n = x.n();
    rep.k_n = x.k();
    rep.level = level;
    rep.statistic = st.statistic;
    rep.phi_hat = st.phi_hat;
    rep.argmax = st.argmax;

    const double b = options.b.value_or(1.0);
    const double lambda = options.lambda.value_or(std::numeric_limits<double>::infinity());
    rep.schedule_exponent = schedule_s(b, lambda);
    const double lnk = std::log(static_cast<double>(rep.k_n));
    const double limit = std::pow(static_cast<double>(rep.n), rep.schedule_exponent);
    if (lnk > limit) {
        rep.warnings.push_back(fmt::format("ln(k_n) = {:.3f} exceeds n^{:.4f} = {:.3f}", lnk,
                                           rep.schedule_exponent, limit));
    }

    const Eigen::MatrixXd S = screening_scores(x, y);
    const ScoreCritical sc = score_critical(S, rep.statistic, level, options.bandwidth, true, options.sim, seed);
    rep.sigma2_hat = sc.sigma2;
    rep.bandwidth = sc.bandwidth;
    rep.crit_value = sc.crit_value;
    rep.p_value = sc.p_value;
    rep.t_stat = std::sqrt(static_cast<double>(rep.n)) * rep.phi_hat.array() / sc.sigma2.array().sqrt();
    rep.reject = rep.statistic > rep.crit_value;
    return rep;
}

ScreeningSample simulate(const ScreeningDesign& d, rng::StreamKey key) {
    if (d.n < 3 || d.k < 1) throw ConfigError("screening design needs n >= 3 and k >= 1");
    if (d.signal_index >= d.k) throw ConfigError("signal_index must be < k");
    if (!(d.noise_scale >= 0.0)) throw ConfigError("noise_scale must be >= 0");
    ScreeningSample s;
    s.x = detail::gaussian_ar1_columns(d.n, d.k, d.x_rho, key.child(0));
    s.y = d.noise_scale * detail::gaussian_ar1_columns(d.n, 1, d.y_ar, key.child(1)).col(0);
    if (d.signal_index >= 0) s.y += d.signal * s.x.col(d.signal_index);
    return s;
}

}  // namespace maxlln::screening
