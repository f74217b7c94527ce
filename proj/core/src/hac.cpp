#include "maxlln/hac.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "maxlln/errors.hpp"

namespace maxlln::hac {

namespace {

Eigen::MatrixXd prepared(const Eigen::MatrixXd& Z, std::int64_t L, bool demean) {
    if (Z.rows() < 2) throw ArgumentError("HAC needs at least two observations");
    if (L < 0) throw ArgumentError("HAC bandwidth must be >= 0");
    if (!Z.allFinite()) throw NumericalError("HAC input contains non-finite values");
    if (!demean) return Z;
    return Z.rowwise() - Z.colwise().mean();
}

}  // namespace

std::int64_t default_bandwidth(std::int64_t n) noexcept {
    auto L = static_cast<std::int64_t>(std::floor(std::cbrt(static_cast<double>(n))));
    // guard against cbrt rounding just below an exact cube
    while ((L + 1) * (L + 1) * (L + 1) <= n) ++L;
    return L;
}

Eigen::MatrixXd bartlett_covariance(const Eigen::MatrixXd& Zin, std::int64_t L, bool demean) {
    const Eigen::MatrixXd Z = prepared(Zin, L, demean);
    const Eigen::Index n = Z.rows();
    const Eigen::Index lmax = std::min<Eigen::Index>(L, n - 1);
    Eigen::MatrixXd S = Z.transpose() * Z;
    for (Eigen::Index l = 1; l <= lmax; ++l) {
        const double w = 1.0 - static_cast<double>(l) / static_cast<double>(L + 1);
        const Eigen::MatrixXd G = Z.bottomRows(n - l).transpose() * Z.topRows(n - l);
        S += w * (G + G.transpose());
    }
    S /= static_cast<double>(n);
    return 0.5 * (S + S.transpose());
}

Eigen::VectorXd bartlett_variances(const Eigen::MatrixXd& Zin, std::int64_t L, bool demean) {
    const Eigen::MatrixXd Z = prepared(Zin, L, demean);
    const Eigen::Index n = Z.rows();
    const Eigen::Index lmax = std::min<Eigen::Index>(L, n - 1);
    Eigen::VectorXd v = Z.colwise().squaredNorm().transpose();
    for (Eigen::Index l = 1; l <= lmax; ++l) {
        const double w = 1.0 - static_cast<double>(l) / static_cast<double>(L + 1);
        v += 2.0 * w * (Z.bottomRows(n - l).array() * Z.topRows(n - l).array()).colwise().sum().transpose().matrix();
    }
    return v / static_cast<double>(n);
}

Eigen::MatrixXd nearest_psd(const Eigen::MatrixXd& S) {
    if (S.rows() != S.cols()) throw ArgumentError("covariance must be square");
    if (!S.allFinite()) throw NumericalError("covariance contains non-finite values");
    const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of covariance failed");
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd P = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    P = 0.5 * (P + P.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(P, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, lam.maxCoeff());
    if (check.info() != Eigen::Success || check.eigenvalues().minCoeff() < -1e-8 * scale) {
        throw NumericalError("covariance is indefinite after projection");
    }
    return P;
}

}  // namespace maxlln::hac
