#include "maxlln/maxstats.hpp"

#include <algorithm>
#include <cmath>

#include "maxlln/errors.hpp"
#include "maxlln/parallel.hpp"
#include "maxlln/stats.hpp"

namespace maxlln::maxstats {

namespace {

struct ColumnStat {
    double mean_abs = 0.0;
    double running = 0.0;
};

ColumnStat column_stat(const double* x, std::int64_t n, double center) {
    const auto nd = static_cast<double>(n);
    double s = 0.0;
    double run = 0.0;
    for (std::int64_t t = 0; t < n; ++t) {
        s += x[t] - center;
        run = std::max(run, std::abs(s / nd));
    }
    return {std::abs(s / nd), run};
}

void fold(MaxStatResult& r, const ColumnStat& c, Eigen::Index i) {
    if (c.mean_abs > r.value) {
        r.value = c.mean_abs;
        r.argmax = i;
    }
    r.running_value = std::max(r.running_value, c.running);
}

void check_cells(std::int64_t n, std::int64_t k, double max_cells) {
    if (static_cast<double>(n) * static_cast<double>(k) > max_cells) {
        throw ResourceError("n * k_n exceeds the configured cell budget");
    }
}

}  // namespace

MaxStatResult max_mean(const Panel& panel, std::span<const double> center) {
    if (!center.empty() && static_cast<Eigen::Index>(center.size()) != panel.k()) {
        throw ArgumentError("center must have one entry per coordinate");
    }
    MaxStatResult r;
    for (Eigen::Index i = 0; i < panel.k(); ++i) {
        fold(r, column_stat(panel.data().col(i).data(), panel.n(), center.empty() ? 0.0 : center[i]), i);
    }
    return r;
}

double scale_value(double M, std::int64_t n, std::int64_t k, ScaleRule rule) {
    const double root_n = std::sqrt(static_cast<double>(n));
    if (rule == ScaleRule::sqrt_n) return root_n * M;
    if (k < 2) throw ArgumentError("sqrt_log_k scaling requires k >= 2");
    return root_n * M / std::sqrt(std::log(static_cast<double>(k)));
}

double scaled_max(const Panel& panel, ScaleRule rule) {
    return scale_value(max_mean(panel).value, panel.n(), panel.k(), rule);
}

void KnSchedule::validate() const {
    switch (rule) {
        case Rule::fixed:
            if (!(k >= 1.0) || k != std::floor(k)) throw ConfigError("fixed schedule needs integer k >= 1");
            break;
        case Rule::poly:
            if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("poly schedule needs a > 0");
            break;
        case Rule::exp:
            if (!(c > 0.0 && s > 0.0) || !std::isfinite(c) || !std::isfinite(s)) {
                throw ConfigError("exp schedule needs c > 0 and s > 0");
            }
            break;
    }
}

std::int64_t KnSchedule::operator()(std::int64_t n) const {
    validate();
    double v = k;
    const auto nd = static_cast<double>(n);
    if (rule == Rule::poly) v = std::ceil(std::pow(nd, a));
    if (rule == Rule::exp) v = std::ceil(std::exp(c * std::pow(nd, s)));
    if (!(v < 9.0e18)) throw ResourceError("k_n does not fit in a 64-bit count");
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(v));
}

MaxStatResult streamed_max_mean(const processes::ProcessSpec& spec, std::int64_t n, std::int64_t k,
                                rng::StreamKey key) {
    const std::int64_t cols = spec.common_coordinates ? 1 : k;
    processes::ColumnGenerator gen(spec, n, spec.common_coordinates ? 1 : k, key);
    std::vector<double> col(static_cast<std::size_t>(n));
    MaxStatResult r;
    for (std::int64_t i = 0; i < cols; ++i) {
        gen.next(col);
        fold(r, column_stat(col.data(), n, 0.0), i);
    }
    return r;
}

RateStudyResult rate_study(const processes::ProcessSpec& spec, const KnSchedule& schedule,
                           std::span<const std::int64_t> n_grid, std::int64_t reps, std::uint64_t seed,
                           const RateOptions& opts) {
    processes::validate(spec);
    schedule.validate();
    if (n_grid.size() < 4) throw ArgumentError("rate_study needs at least 4 grid points");
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        if (n_grid[g] < 1) throw ArgumentError("grid sizes must be >= 1");
        if (g > 0 && n_grid[g] <= n_grid[g - 1]) throw ArgumentError("n_grid must be increasing");
    }
    if (reps < 200) throw ArgumentError("rate_study requires reps >= 200");

    const rng::StreamKey root(seed);
    const std::size_t workers = resolve_workers(opts.workers);
    RateStudyResult res;
    std::vector<double> logn, logm, logse;
    for (const std::int64_t n : n_grid) {
        const std::int64_t k = schedule(n);
        if (!spec.common_coordinates) check_cells(n, k, opts.max_cells);
        const auto key_n = root.child(static_cast<std::uint64_t>(n));
        std::vector<double> stat(static_cast<std::size_t>(reps));
        parallel_for(stat.size(), workers, [&](std::size_t r) {
            stat[r] = streamed_max_mean(spec, n, k, key_n.child(r)).value;
        });
        RateRow row;
        row.n = n;
        row.k_n = k;
        row.mean_stat = stats::mean(stat);
        row.se = std::sqrt(stats::variance(stat) / static_cast<double>(reps));
        const double rn = std::sqrt(static_cast<double>(n));
        row.mean_root_n = rn * row.mean_stat;
        row.se_root_n = rn * row.se;
        res.grid.push_back(row);
        if (row.mean_stat > 0.0) {
            logn.push_back(std::log(static_cast<double>(n)));
            logm.push_back(std::log(row.mean_stat));
            logse.push_back(row.se / row.mean_stat);
        }
    }
    if (logn.size() >= 2) {
        const auto fit = stats::fit_line(logn, logm, logse);
        res.slope = fit.slope;
        res.slope_se = fit.slope_se;
        res.intercept = fit.intercept;
    }
    return res;
}

PathResult slln_path_check(const processes::ProcessSpec& spec, const KnSchedule& schedule, std::int64_t n_max,
                           std::uint64_t seed, const PathOptions& opts) {
    processes::validate(spec);
    schedule.validate();
    if (n_max < 2) throw ArgumentError("n_max must be >= 2");
    std::vector<std::int64_t> cps = opts.checkpoints;
    if (cps.empty()) {
        std::int64_t c = std::max<std::int64_t>(std::min<std::int64_t>(16, n_max), n_max / 64);
        for (; c < n_max; c *= 2) cps.push_back(c);
        cps.push_back(n_max);
    }
    for (std::size_t j = 0; j < cps.size(); ++j) {
        if (cps[j] < 1 || cps[j] > n_max || (j > 0 && cps[j] <= cps[j - 1])) {
            throw ArgumentError("checkpoints must be increasing and within [1, n_max]");
        }
    }
    const rng::StreamKey key(seed);
    PathResult res;
    for (const std::int64_t n : cps) {
        const std::int64_t k = schedule(n);
        check_cells(n, spec.common_coordinates ? 1 : k, opts.max_cells);
        double value = 0.0;
        if (!opts.axis_swap) {
            value = streamed_max_mean(spec, n, k, key).value;
        } else {
            // max over time of the cross-coordinate mean
            processes::ColumnGenerator gen(spec, n, k, key);
            std::vector<double> col(static_cast<std::size_t>(n));
            std::vector<double> rows(static_cast<std::size_t>(n), 0.0);
            while (gen.next(col)) {
                for (std::size_t t = 0; t < col.size(); ++t) rows[t] += col[t];
            }
            for (double s : rows) value = std::max(value, std::abs(s / static_cast<double>(k)));
        }
        res.n.push_back(n);
        res.k_n.push_back(k);
        res.value.push_back(value);
    }
    res.verdict = res.value.back() < 0.5 * res.value.front();
    return res;
}

}  // namespace maxlln::maxstats
