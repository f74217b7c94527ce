#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxlln/processes.hpp"
#include "maxlln/stats.hpp"

namespace maxlln::bounds {

/// Constants of the concentration inequalities. K1..K5, C and K_alpha are
/// existential in the theory; they default to 1 and can be calibrated.
struct BoundParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;
    double gamma1 = 2.0;
    double gamma2 = 2.0;
    double K1 = 1.0;
    double K2 = 1.0;
    double K3 = 1.0;
    double K4 = 1.0;
    double K5 = 1.0;
    double C = 1.0;
    double K_alpha = 1.0;
    double alpha = 2.0;
    double p = 2.0;

    /// 1/gamma = 1/gamma1 + 1/gamma2.
    [[nodiscard]] double gamma() const noexcept { return 1.0 / (1.0 / gamma1 + 1.0 / gamma2); }
    /// Throws ConfigError unless all constants are positive and 1/gamma1 + 1/gamma2 <= 1.
    void validate() const;
};

/// B_p = 18 p^{5/2} / (p-1)^{3/2} for p in (1,2), sqrt(2) p^{3/2} / (p-1) for p >= 2.
[[nodiscard]] double burkholder_constant(double p);

/// n exp(-K1 (eps n)^g) + exp(-K2 eps^2 n^2 / (1 + K3 n))
///   + exp(-K4 eps^2 n exp(K5 (eps n)^{g(1-g)} / ln(eps n)^g)).
/// Requires n >= 4 and eps n > 1.
[[nodiscard]] double fuk_nagaev_rhs(double eps, std::int64_t n, const BoundParams& params);

/// Natural log of fuk_nagaev_rhs, accurate where the value underflows.
[[nodiscard]] double log_fuk_nagaev_rhs(double eps, std::int64_t n, const BoundParams& params);

/// B_p n^{1/p' - 1/2} Theta_max with p' = min(p, 2).
[[nodiscard]] double lp_maximal_bound(double p, std::int64_t n, double Theta_max);

/// C exp(-K_alpha u^alpha).
[[nodiscard]] double subexp_tail_bound(double u, const BoundParams& params);

struct CurveSpec {
    processes::ProcessSpec spec;
    std::int64_t n = 256;
    std::int64_t reps = 10'000;
    std::size_t workers = 0;
};

struct TailCurve {
    std::vector<double> epsilons;
    std::vector<double> empirical;
    std::vector<stats::Interval> wilson;
    std::vector<double> bound;
};

struct DominationResult {
    TailCurve curve;
    bool dominated = false;      ///< at the supplied constants
    double calibration = 1.0;    ///< factor s dividing K1..K5 (1 when not calibrated)
    bool calibrated_dominated = false;
    BoundParams calibrated;      ///< constants after calibration
};

/// Statistic of one replication: max_{l <= n} |n^{-1} sum_{t <= l} x_t| on
/// the first coordinate.
[[nodiscard]] std::vector<double> running_max_mean_draws(const CurveSpec& cs, std::uint64_t seed);

/// Log-spaced grid of `points` epsilons between the empirical quantiles 0.5
/// and 1 - 10/reps, restricted to eps n > 1.
[[nodiscard]] std::vector<double> default_eps_grid(std::vector<double> draws, std::int64_t n, int points = 32);

/// Empirical exceedance curve against the Fuk-Nagaev bound. With calibrate,
/// finds the smallest s such that dividing K1..K5 by s gives
/// bound >= empirical - 2 * Wilson radius on the whole grid.
[[nodiscard]] DominationResult check_domination(const CurveSpec& cs, const BoundParams& params, bool calibrate,
                                                std::uint64_t seed);

/// Same, on precomputed replication draws and an explicit grid.
[[nodiscard]] DominationResult check_domination(std::span<const double> draws, std::int64_t n,
                                                std::vector<double> epsilons, const BoundParams& params,
                                                bool calibrate);

}  // namespace maxlln::bounds
