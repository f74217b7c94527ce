#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace maxlln {

/// joint: Z ~ N(0, S) with S projected to PSD. marginal: independent
/// coordinates with the diagonal variances of S.
enum class CovarianceMode { joint, marginal };

struct GaussianMaxOptions {
    std::int64_t sims = 10'000;
    CovarianceMode mode = CovarianceMode::joint;
};

/// Simulated law of max_h |Z(h)|. Draw s uses the simulation stream at
/// coordinate s, so results depend only on (S, sims, mode, seed).
class GaussianMax {
public:
    GaussianMax(const Eigen::MatrixXd& covariance, const GaussianMaxOptions& opts, std::uint64_t seed);

    /// Type-7 quantile of the simulated maxima.
    [[nodiscard]] double quantile(double prob) const;
    /// (1 - level) quantile.
    [[nodiscard]] double critical_value(double level) const;
    /// Fraction of simulated maxima >= stat.
    [[nodiscard]] double p_value(double stat) const;
    [[nodiscard]] const std::vector<double>& sorted_draws() const noexcept { return draws_; }

private:
    std::vector<double> draws_;
};

/// Convenience wrapper returning the (1 - level) quantile of max |Z|.
[[nodiscard]] double gaussian_max_quantile(const Eigen::MatrixXd& covariance, double level,
                                           const GaussianMaxOptions& opts, std::uint64_t seed);

struct ScoreCritical {
    Eigen::VectorXd sigma2;    ///< per-column long-run variances
    double crit_value = 0.0;
    double p_value = 1.0;
    std::int64_t bandwidth = 0;
};

/// Critical value and p-value for `statistic` = max_i |sqrt(n) mean score_i|
/// style statistics: Bartlett HAC covariance of the score columns
/// (bandwidth floor(n^{1/3}) when negative), then the simulated max |Z|.
[[nodiscard]] ScoreCritical score_critical(const Eigen::MatrixXd& scores, double statistic, double level,
                                           std::int64_t bandwidth, bool demean, const GaussianMaxOptions& opts,
                                           std::uint64_t seed);

}  // namespace maxlln
