#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maxlln/panel.hpp"
#include "maxlln/processes.hpp"

namespace maxlln::maxstats {

struct MaxStatResult {
    double value = 0.0;            ///< M_n = max_i |n^{-1} sum_t x_{i,t}|
    Eigen::Index argmax = 0;       ///< zero-based; ties go to the smallest index
    double running_value = 0.0;    ///< max_i max_l |n^{-1} sum_{t<=l} x_{i,t}|
};

/// Exact max of absolute column means, optionally after subtracting
/// per-coordinate centers. Sums run in time order and are divided by n once.
[[nodiscard]] MaxStatResult max_mean(const Panel& panel, std::span<const double> center = {});

enum class ScaleRule { sqrt_log_k, sqrt_n };

/// sqrt(n) M / sqrt(ln k) or sqrt(n) M.
[[nodiscard]] double scale_value(double M, std::int64_t n, std::int64_t k, ScaleRule rule);
[[nodiscard]] double scaled_max(const Panel& panel, ScaleRule rule);

/// Coordinate count as a function of n: fixed k, ceil(n^a), or ceil(exp(c n^s)).
struct KnSchedule {
    enum class Rule { fixed, poly, exp };
    Rule rule = Rule::fixed;
    double k = 1.0;
    double a = 1.0;
    double c = 1.0;
    double s = 1.0;

    [[nodiscard]] static KnSchedule fixed(std::int64_t k) { return {Rule::fixed, static_cast<double>(k), 1, 1, 1}; }
    [[nodiscard]] static KnSchedule poly(double a) { return {Rule::poly, 1, a, 1, 1}; }
    [[nodiscard]] static KnSchedule exp(double c, double s) { return {Rule::exp, 1, 1, c, s}; }

    /// Throws ConfigError for non-positive parameters.
    void validate() const;
    /// k_n >= 1. Throws ResourceError if k_n does not fit in 63 bits.
    [[nodiscard]] std::int64_t operator()(std::int64_t n) const;
};

struct RateRow {
    std::int64_t n = 0;
    std::int64_t k_n = 0;
    double mean_stat = 0.0;   ///< Monte Carlo mean of M_n
    double se = 0.0;
    double mean_root_n = 0.0; ///< mean of sqrt(n) M_n
    double se_root_n = 0.0;
};

struct RateStudyResult {
    std::vector<RateRow> grid;
    double slope = 0.0;       ///< least-squares slope of log mean_stat on log n
    double slope_se = 0.0;
    double intercept = 0.0;
};

struct RateOptions {
    std::size_t workers = 0;
    /// Upper bound on n * k_n per replication before a ResourceError.
    double max_cells = 1.0e11;
};

/// Replication r at sample size n uses key root.child(n).child(r), so equal
/// n across schedules share draws. Panels are streamed column by column;
/// identical-column specs are evaluated on one column.
[[nodiscard]] RateStudyResult rate_study(const processes::ProcessSpec& spec, const KnSchedule& schedule,
                                         std::span<const std::int64_t> n_grid, std::int64_t reps,
                                         std::uint64_t seed, const RateOptions& opts = {});

/// M_n of a single streamed panel; same semantics as max_mean on generate(spec, n, k, key).
[[nodiscard]] MaxStatResult streamed_max_mean(const processes::ProcessSpec& spec, std::int64_t n, std::int64_t k,
                                              rng::StreamKey key);

struct PathOptions {
    /// Explicit checkpoints; empty means powers of two from 16 (or n_max/64) to n_max.
    std::vector<std::int64_t> checkpoints;
    /// Evaluate max_{t<=n} |k^{-1} sum_i x_{i,t}| instead.
    bool axis_swap = false;
    double max_cells = 1.0e11;
};

struct PathResult {
    std::vector<std::int64_t> n;
    std::vector<std::int64_t> k_n;
    std::vector<double> value;
    bool verdict = false;     ///< last value < half the first
};

/// Statistic along one nested realization: the window of length n is the
/// prefix of every longer window drawn from the same seed.
[[nodiscard]] PathResult slln_path_check(const processes::ProcessSpec& spec, const KnSchedule& schedule,
                                         std::int64_t n_max, std::uint64_t seed, const PathOptions& opts = {});

}  // namespace maxlln::maxstats
