#include "maxlln/gaussian_max.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include <Eigen/Eigenvalues>

#include "maxlln/errors.hpp"
#include "maxlln/hac.hpp"
#include "maxlln/rng.hpp"
#include "maxlln/stats.hpp"

namespace maxlln {

namespace {

/// F with F F' = PSD projection of S; eigenvector signs fixed so that the
/// largest-magnitude entry is positive.
Eigen::MatrixXd factor(const Eigen::MatrixXd& S, CovarianceMode mode) {
    const Eigen::Index k = S.rows();
    if (mode == CovarianceMode::marginal) {
        Eigen::VectorXd d = S.diagonal();
        if (!d.allFinite() || d.minCoeff() < 0.0) throw NumericalError("negative or non-finite variance");
        return d.cwiseSqrt().asDiagonal();
    }
    const Eigen::MatrixXd P = hac::nearest_psd(S);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of covariance failed");
    Eigen::MatrixXd V = es.eigenvectors();
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index at = 0;
        V.col(j).cwiseAbs().maxCoeff(&at);
        if (V(at, j) < 0.0) V.col(j) = -V.col(j);
    }
    return V * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace

GaussianMax::GaussianMax(const Eigen::MatrixXd& S, const GaussianMaxOptions& opts, std::uint64_t seed) {
    if (S.rows() < 1 || S.rows() != S.cols()) throw ArgumentError("covariance must be square and non-empty");
    if (opts.sims < 1000) throw ArgumentError("sims must be >= 1000");
    const Eigen::MatrixXd F = factor(S, opts.mode);
    const Eigen::Index k = S.rows();
    const rng::StreamKey key(seed);

    constexpr Eigen::Index kBatch = 256;
    draws_.resize(static_cast<std::size_t>(opts.sims));
    Eigen::MatrixXd G(k, kBatch);
    for (Eigen::Index s0 = 0; s0 < opts.sims; s0 += kBatch) {
        const Eigen::Index b = std::min<Eigen::Index>(kBatch, opts.sims - s0);
        for (Eigen::Index j = 0; j < b; ++j) {
            rng::fill_normals(key, rng::Tag::simulation, static_cast<std::uint64_t>(s0 + j), 0,
                              std::span<double>(G.col(j).data(), static_cast<std::size_t>(k)));
        }
        const Eigen::MatrixXd Z = F * G.leftCols(b);
        for (Eigen::Index j = 0; j < b; ++j) {
            draws_[static_cast<std::size_t>(s0 + j)] = Z.col(j).cwiseAbs().maxCoeff();
        }
    }
    std::sort(draws_.begin(), draws_.end());
}

double GaussianMax::quantile(double prob) const {
    if (!(prob >= 0.0 && prob <= 1.0)) throw ArgumentError("quantile probability must lie in [0, 1]");
    return stats::sorted_quantile(draws_, prob);
}

double GaussianMax::critical_value(double level) const {
    if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
    return quantile(1.0 - level);
}

double GaussianMax::p_value(double stat) const {
    const auto above = draws_.end() - std::lower_bound(draws_.begin(), draws_.end(), stat);
    return static_cast<double>(above) / static_cast<double>(draws_.size());
}

double gaussian_max_quantile(const Eigen::MatrixXd& covariance, double level, const GaussianMaxOptions& opts,
                             std::uint64_t seed) {
    return GaussianMax(covariance, opts, seed).critical_value(level);
}

ScoreCritical score_critical(const Eigen::MatrixXd& scores, double statistic, double level, std::int64_t bandwidth,
                             bool demean, const GaussianMaxOptions& opts, std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
    if (scores.cols() < 1) throw ArgumentError("score matrix has no columns");
    ScoreCritical out;
    out.bandwidth = bandwidth < 0 ? hac::default_bandwidth(scores.rows()) : bandwidth;
    const Eigen::MatrixXd cov = hac::bartlett_covariance(scores, out.bandwidth, demean);
    out.sigma2 = cov.diagonal();
    if (!(out.sigma2.minCoeff() > 0.0)) throw DegenerateDataError("a long-run variance estimate is not positive");
    const GaussianMax gm(cov, opts, seed);
    out.crit_value = gm.critical_value(level);
    out.p_value = gm.p_value(statistic);
    return out;
}

}  // namespace maxlln
