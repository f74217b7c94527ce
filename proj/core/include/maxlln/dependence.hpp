#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maxlln/processes.hpp"

namespace maxlln::dependence {

struct ThetaEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
};

struct CouplingOptions {
    /// Window length; the coupled value is read at the last time point.
    std::int64_t anchor_n = 1;
    /// Coordinate whose value is compared (zero-based) and the panel width
    /// it is drawn from. Only matters for gaussian_ar1_coords.
    std::int64_t coordinate = 0;
    std::int64_t k = 1;
    std::size_t workers = 0;
};

/// Default replication count: 1e5 for p <= 4, 1e6 above.
[[nodiscard]] std::int64_t default_reps(double p) noexcept;

/// theta^(p)(m) = (E|x - x'(m)|^p)^(1/p) by Monte Carlo over independent
/// coupled draws, with a delta-method standard error.
[[nodiscard]] ThetaEstimate estimate_theta(const processes::ProcessSpec& spec, double p, std::int64_t m,
                                           std::int64_t reps, std::uint64_t seed, const CouplingOptions& opts = {});

struct DependenceProfile {
    double p = 2.0;
    std::vector<double> theta;  ///< lags 0..M
    std::vector<double> se;
    double Theta = 0.0;         ///< partial sum over lags 0..M
    std::int64_t M = 0;
    std::int64_t reps = 0;
};

/// theta^(p)(m) for m = 0..M from one set of replications; each replication
/// shares its base path across lags. For families without pre-sample history
/// the anchor window is widened so every lag is admissible.
[[nodiscard]] DependenceProfile estimate_profile(const processes::ProcessSpec& spec, double p, std::int64_t M,
                                                 std::int64_t reps, std::uint64_t seed,
                                                 const CouplingOptions& opts = {});

struct Accumulation {
    double Theta = 0.0;         ///< partial sum plus tail estimate (infinite when non-summable)
    double partial = 0.0;
    double tail = 0.0;
    double decay_rate = 0.0;    ///< fitted geometric rate r of the last lags
    double decay_rate_se = 0.0;
    double Theta_se = 0.0;      ///< from the per-lag standard errors
    bool non_summable = false;  ///< r + 2 se(r) >= 1
};

[[nodiscard]] Accumulation accumulate(const DependenceProfile& profile);

/// Elementwise K * tail^p.
[[nodiscard]] std::vector<double> tau_envelope_linear(std::span<const double> psi_tail, double p, double K);

/// Tail sums sum_{j >= m} |psi_j| for m = 0..M.
[[nodiscard]] std::vector<double> psi_tail_sums(std::span<const double> psi, std::int64_t M);

struct GammaDiagnostic {
    double alpha = 2.0;
    std::vector<double> p_grid;
    std::vector<double> values;  ///< p^(1/2 - 1/alpha) * Theta^(p)
    std::vector<double> se;
    bool bounded = false;
};

/// Finite-p profile of p^(1/2 - 1/alpha) Theta^(p). Verdict bounded when the
/// last three values do not increase by more than two standard errors.
[[nodiscard]] GammaDiagnostic gamma_diagnostic(const processes::ProcessSpec& spec, double alpha,
                                               std::span<const double> p_grid, std::int64_t m_max,
                                               std::int64_t reps, std::uint64_t seed,
                                               const CouplingOptions& opts = {});

}  // namespace maxlln::dependence
