#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "maxlln/errors.hpp"
#include "maxlln/maxcorr.hpp"
#include "maxlln/rng.hpp"
#include "maxlln/stats.hpp"

using namespace maxlln;
using namespace maxlln::maxcorr;

namespace {

Eigen::VectorXd normals(std::int64_t n, std::uint64_t seed, std::uint32_t coord = 0) {
    std::vector<double> v(static_cast<std::size_t>(n));
    rng::fill_normals(rng::StreamKey(seed), rng::Tag::simulation, coord, 0, v);
    return Eigen::Map<Eigen::VectorXd>(v.data(), n);
}

Eigen::MatrixXd normal_panel(std::int64_t n, std::int64_t k, std::uint64_t seed) {
    Eigen::MatrixXd m(n, k);
    for (std::int64_t i = 0; i < k; ++i) m.col(i) = normals(n, seed, static_cast<std::uint32_t>(i));
    return m;
}

}  // namespace

TEST(Ols, ExactFit) {
    RegressionData d;
    d.X = normal_panel(50, 3, 1);
    Eigen::Vector3d phi(1.0, -2.0, 0.25);
    d.y = d.X * phi;
    const auto f = ols_fit(d);
    EXPECT_LT((f.phi - phi).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(f.residuals.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ols, NoCovariatesAndNormalEquations) {
    RegressionData d;
    d.y = normals(40, 2);
    d.X = Eigen::MatrixXd(40, 0);
    const auto f0 = ols_fit(d);
    EXPECT_EQ(f0.phi.size(), 0);
    EXPECT_EQ(f0.residuals, d.y);

    d.X = normal_panel(40, 4, 3);
    const auto f = ols_fit(d);
    EXPECT_LT((d.X.transpose() * f.residuals).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::VectorXd oracle = (d.X.transpose() * d.X).ldlt().solve(d.X.transpose() * d.y);
    EXPECT_LT((f.phi - oracle).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ols, SingularDesign) {
    RegressionData d;
    d.y = normals(30, 4);
    d.X = normal_panel(30, 2, 5);
    d.X.col(1) = 3.0 * d.X.col(0);
    EXPECT_THROW((void)ols_fit(d), SingularDesignError);
}

TEST(Autocorr, AlternatingResiduals) {
    const std::int64_t n = 20;
    Eigen::VectorXd e(n);
    for (std::int64_t t = 0; t < n; ++t) e(t) = t % 2 == 0 ? 1.0 : -1.0;
    const auto a1 = residual_autocorr(e, 1);
    EXPECT_DOUBLE_EQ(a1.gamma, -static_cast<double>(n - 1) / n);
    EXPECT_DOUBLE_EQ(a1.rho, -static_cast<double>(n - 1) / n);
    EXPECT_DOUBLE_EQ(residual_autocorr(e, 0).rho, 1.0);
}

TEST(Autocorr, TextbookAgreement) {
    const Eigen::VectorXd e = normals(200, 6);
    for (std::int64_t h : {1, 3, 7}) {
        double num = 0.0, den = 0.0;
        for (std::int64_t t = 0; t < 200; ++t) den += e(t) * e(t);
        for (std::int64_t t = h; t < 200; ++t) num += e(t) * e(t - h);
        EXPECT_NEAR(residual_autocorr(e, h).rho, num / den, 1e-13);
    }
}

TEST(Autocorr, ZeroResiduals) {
    EXPECT_THROW((void)residual_autocorr(Eigen::VectorXd::Zero(10), 1), DegenerateDataError);
    RegressionData d;
    d.y = Eigen::VectorXd::Zero(40);
    d.X = Eigen::MatrixXd(40, 0);
    EXPECT_THROW((void)maxcorr_test(d, 2, 0.05, {}, 1), DegenerateDataError);
}

TEST(ZPanel, LayoutAndCentering) {
    RegressionData d;
    d.y = normals(4000, 7);
    d.X = Eigen::MatrixXd(4000, 0);
    const auto z = zscore_panel(d, d.y, 5);
    ASSERT_EQ(z.rows(), 4000);
    ASSERT_EQ(z.cols(), 5);
    for (Eigen::Index h = 1; h <= 5; ++h) {
        for (Eigen::Index t = 0; t < h; ++t) EXPECT_EQ(z(t, h - 1), 0.0);
        const Eigen::VectorXd c = z.col(h - 1);
        const double sd = std::sqrt((c.array() - c.mean()).square().mean());
        EXPECT_LT(std::abs(c.mean()), 4.0 * sd / std::sqrt(4000.0));
    }
    EXPECT_THROW((void)zscore_panel(d, d.y, 1001), ArgumentError);
}

TEST(ZPanel, NoCovariatesReducesToCenteredProducts) {
    RegressionData d;
    d.y = normals(100, 8);
    d.X = Eigen::MatrixXd(100, 0);
    const auto z = zscore_panel(d, d.y, 2);
    const double g0 = residual_autocorr(d.y, 0).gamma;
    for (std::int64_t h = 1; h <= 2; ++h) {
        const auto a = residual_autocorr(d.y, h);
        double pm = 0.0;
        for (std::int64_t t = h; t < 100; ++t) pm += d.y(t) * d.y(t - h);
        pm /= static_cast<double>(100 - h);
        for (std::int64_t t = h; t < 100; ++t) {
            const double ref = (d.y(t) * d.y(t - h) - pm - a.rho * (d.y(t) * d.y(t) - g0)) / g0;
            EXPECT_NEAR(z(t, h - 1), ref, 1e-12) << "t=" << t << " h=" << h;
        }
    }
}

TEST(Critval, SingleLagIsNormalQuantile) {
    const Eigen::MatrixXd z = normal_panel(2000, 1, 9);
    GaussianMaxOptions o;
    o.sims = 40000;
    const auto cv = gaussian_critval(z, 0.05, 0, o, 3);
    EXPECT_NEAR(cv.crit_value / std::sqrt(cv.sigma2(0)), 1.959964, 0.03);
}

TEST(Critval, IndependentClosedForm) {
    const Eigen::MatrixXd S = Eigen::MatrixXd::Identity(16, 16) * 2.25;
    GaussianMaxOptions o;
    o.sims = 40000;
    const double q = gaussian_max_quantile(S, 0.05, o, 4);
    const double oracle = 1.5 * stats::normal_quantile(0.5 * (1.0 + std::pow(0.95, 1.0 / 16.0)));
    EXPECT_NEAR(q / oracle, 1.0, 0.02);
    o.mode = CovarianceMode::marginal;
    EXPECT_NEAR(gaussian_max_quantile(S, 0.05, o, 4) / oracle, 1.0, 0.02);
}

TEST(Critval, HomogeneousAndMonotone) {
    const Eigen::MatrixXd z = normal_panel(300, 6, 10);
    GaussianMaxOptions o;
    o.sims = 2000;
    const auto a = gaussian_critval(z, 0.05, -1, o, 5);
    const auto b = gaussian_critval(Eigen::MatrixXd(-3.0 * z), 0.05, -1, o, 5);
    EXPECT_NEAR(b.crit_value, 3.0 * a.crit_value, 1e-9 * a.crit_value);
    EXPECT_EQ(a.bandwidth, 6);
    double prev = 1e300;
    for (double level : {0.01, 0.05, 0.1, 0.5}) {
        const double c = gaussian_critval(z, level, -1, o, 5).crit_value;
        EXPECT_LE(c, prev);
        prev = c;
    }
    EXPECT_THROW((void)gaussian_critval(z, 0.05, -1, GaussianMaxOptions{500}, 5), ArgumentError);
}

TEST(MaxCorrTest, ScaleInvariantStatistic) {
    MaxCorrDesign des;
    des.n = 300;
    const auto d = simulate(des, rng::StreamKey(21));
    GaussianMaxOptions sim;
    sim.sims = 2000;
    const MaxCorrOptions o{-1, sim, false};
    const auto a = maxcorr_test(d, 5, 0.05, o, 3);
    RegressionData d2{Eigen::VectorXd(7.5 * d.y), d.X};
    const auto b = maxcorr_test(d2, 5, 0.05, o, 3);
    EXPECT_NEAR(a.statistic, b.statistic, 1e-12 * a.statistic);
    EXPECT_LT((a.rho_hat - b.rho_hat).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(a.argmax_lag, b.argmax_lag);
    EXPECT_GE(a.p_value, 0.0);
    EXPECT_LE(a.p_value, 1.0);
    EXPECT_DOUBLE_EQ(a.statistic, std::sqrt(300.0) * a.rho_hat.cwiseAbs().maxCoeff());
}

TEST(MaxCorrTest, ScheduleWarning) {
    MaxCorrDesign des;
    des.n = 400;
    const auto d = simulate(des, rng::StreamKey(22));
    GaussianMaxOptions sim;
    sim.sims = 1000;
    const MaxCorrOptions o{-1, sim, false};
    EXPECT_TRUE(maxcorr_test(d, 2, 0.05, o, 1).warnings.empty());
    const auto r = maxcorr_test(d, 50, 0.05, o, 1);
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.rho_hat.size(), 50);
}

TEST(MaxCorrTest, DetectsAutocorrelation) {
    MaxCorrDesign des;
    des.error_ar = 0.5;
    GaussianMaxOptions sim;
    sim.sims = 2000;
    const auto r = maxcorr_test(simulate(des, rng::StreamKey(23)), 10, 0.05, {-1, sim, false}, 2);
    EXPECT_TRUE(r.reject);
    EXPECT_EQ(r.argmax_lag, 1);
}
