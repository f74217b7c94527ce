#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maxlln::stats {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double radius() const noexcept { return 0.5 * (hi - lo); }
};

/// Wilson score interval for a binomial proportion with `successes` out of
/// `trials`, at two-sided critical value z (1.96 for 95%).
[[nodiscard]] Interval wilson(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

[[nodiscard]] double normal_cdf(double x) noexcept;

/// Standard normal quantile; p must lie in (0, 1).
[[nodiscard]] double normal_quantile(double p);

[[nodiscard]] double mean(std::span<const double> x) noexcept;

/// Unbiased sample variance (n - 1 denominator).
[[nodiscard]] double variance(std::span<const double> x) noexcept;

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). Sorts a copy.
[[nodiscard]] double quantile(std::span<const double> x, double prob);

/// Same, on data the caller has already sorted ascending.
[[nodiscard]] double sorted_quantile(std::span<const double> sorted, double prob);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    /// Standard error of the slope propagated from per-point standard errors
    /// of y (zero if none were supplied).
    double slope_se = 0.0;
};

/// Unweighted least squares line through (x, y). When y_se is non-empty the
/// slope standard error is sqrt(sum_i w_i^2 y_se_i^2), w the OLS slope weights.
[[nodiscard]] LineFit fit_line(std::span<const double> x, std::span<const double> y,
                               std::span<const double> y_se = {});

}  // namespace maxlln::stats
