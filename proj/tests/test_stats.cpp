#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "maxlln/errors.hpp"
#include "maxlln/hac.hpp"
#include "maxlln/stats.hpp"

using namespace maxlln;

TEST(Stats, NormalQuantileInvertsCdf) {
    for (double p : {1e-10, 1e-4, 0.025, 0.3, 0.5, 0.9, 0.975, 1 - 1e-8}) {
        EXPECT_NEAR(stats::normal_cdf(stats::normal_quantile(p)), p, 1e-12 * std::max(1.0, p / (1 - p)));
    }
    EXPECT_NEAR(stats::normal_quantile(0.975), 1.959963984540054, 1e-12);
    EXPECT_THROW((void)stats::normal_quantile(0.0), DomainError);
}

TEST(Stats, WilsonHalfWidthAtNominalLevel) {
    // 100 of 2000 at z = 1.96
    const auto iv = stats::wilson(100, 2000);
    EXPECT_NEAR(iv.radius(), 0.0096, 0.0002);
    EXPECT_LT(iv.lo, 0.05);
    EXPECT_GT(iv.hi, 0.05);
    const auto zero = stats::wilson(0, 50);
    EXPECT_EQ(zero.lo, 0.0);
    EXPECT_GT(zero.hi, 0.0);
}

TEST(Stats, QuantileType7) {
    std::vector<double> x{4, 1, 3, 2};
    EXPECT_DOUBLE_EQ(stats::quantile(x, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(stats::quantile(x, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(stats::quantile(x, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(stats::quantile(x, 1.0 / 3.0), 2.0);
}

TEST(Stats, LineFitRecoversSlope) {
    std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9}, se{1, 1, 1, 1};
    const auto f = stats::fit_line(x, y, se);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.slope_se, 1.0 / std::sqrt(5.0), 1e-14);
}

TEST(Hac, BandwidthIsCubeRootFloor) {
    EXPECT_EQ(hac::default_bandwidth(500), 7);
    EXPECT_EQ(hac::default_bandwidth(512), 8);
    EXPECT_EQ(hac::default_bandwidth(511), 7);
    EXPECT_EQ(hac::default_bandwidth(1000), 10);
}

TEST(Hac, BartlettMatchesDirectSum) {
    Eigen::MatrixXd Z(6, 2);
    Z << 1, 2, -1, 0, 3, 1, 0.5, -2, 2, 2, -1, 1;
    const std::int64_t L = 2;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double s = 0;
            for (int t = 0; t < 6; ++t) s += Z(t, a) * Z(t, b);
            for (int l = 1; l <= L; ++l) {
                const double w = 1.0 - l / 3.0;
                for (int t = l; t < 6; ++t) s += w * (Z(t, a) * Z(t - l, b) + Z(t - l, a) * Z(t, b));
            }
            S(a, b) = s / 6.0;
        }
    EXPECT_LT((hac::bartlett_covariance(Z, L) - S).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((hac::bartlett_variances(Z, L) - S.diagonal()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hac, NearestPsdClipsNegativeEigenvalues) {
    Eigen::MatrixXd S(2, 2);
    S << 1, 2, 2, 1;  // eigenvalues 3, -1
    const Eigen::MatrixXd P = hac::nearest_psd(S);
    Eigen::MatrixXd expect(2, 2);
    expect << 1.5, 1.5, 1.5, 1.5;
    EXPECT_LT((P - expect).cwiseAbs().maxCoeff(), 1e-12);
}
