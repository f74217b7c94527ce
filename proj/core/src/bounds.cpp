#include "maxlln/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlln/errors.hpp"
#include "maxlln/parallel.hpp"

namespace maxlln::bounds {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

void check_fn_domain(double eps, std::int64_t n) {
    if (n < 4) throw DomainError("fuk_nagaev_rhs requires n >= 4");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("fuk_nagaev_rhs requires eps > 0");
    if (!(eps * static_cast<double>(n) > 1.0)) throw DomainError("fuk_nagaev_rhs requires eps * n > 1");
}

BoundParams scaled(const BoundParams& p, double s) {
    BoundParams q = p;
    q.K1 /= s;
    q.K2 /= s;
    q.K3 /= s;
    q.K4 /= s;
    q.K5 /= s;
    return q;
}

bool dominates(std::span<const double> eps, std::span<const double> target, std::int64_t n, const BoundParams& p,
               std::vector<double>* bound_out) {
    bool ok = true;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        const double b = fuk_nagaev_rhs(eps[j], n, p);
        if (bound_out) bound_out->push_back(b);
        if (b < target[j]) ok = false;
    }
    return ok;
}

}  // namespace

void BoundParams::validate() const {
    for (double v : {a, b, c, d, gamma1, gamma2, K1, K2, K3, K4, K5, C, K_alpha}) {
        if (!positive(v)) throw ConfigError("bound constants must be finite and > 0");
    }
    if (1.0 / gamma1 + 1.0 / gamma2 > 1.0 + 1e-12) {
        throw ConfigError("bound constants must satisfy 1/gamma1 + 1/gamma2 <= 1");
    }
}

double burkholder_constant(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ArgumentError("B_p requires p > 1");
    if (p < 2.0) return 18.0 * std::pow(p, 2.5) / std::pow(p - 1.0, 1.5);
    return std::sqrt(2.0) * std::pow(p, 1.5) / (p - 1.0);
}

double log_fuk_nagaev_rhs(double eps, std::int64_t n, const BoundParams& params) {
    params.validate();
    check_fn_domain(eps, n);
    const double g = params.gamma();
    const auto nd = static_cast<double>(n);
    const double en = eps * nd;
    const double l1 = std::log(nd) - params.K1 * std::pow(en, g);
    const double l2 = -params.K2 * en * en / (1.0 + params.K3 * nd);
    const double inner = params.K5 * std::pow(en, g * (1.0 - g)) / std::pow(std::log(en), g);
    const double l3 = -params.K4 * eps * eps * nd * std::exp(inner);
    return log_add(log_add(l1, l2), std::isnan(l3) ? -std::numeric_limits<double>::infinity() : l3);
}

double fuk_nagaev_rhs(double eps, std::int64_t n, const BoundParams& params) {
    params.validate();
    check_fn_domain(eps, n);
    const double g = params.gamma();
    const auto nd = static_cast<double>(n);
    const double en = eps * nd;
    const double t1 = nd * std::exp(-params.K1 * std::pow(en, g));
    const double t2 = std::exp(-params.K2 * en * en / (1.0 + params.K3 * nd));
    const double inner = params.K5 * std::pow(en, g * (1.0 - g)) / std::pow(std::log(en), g);
    const double t3 = std::exp(-params.K4 * eps * eps * nd * std::exp(inner));
    return t1 + t2 + t3;
}

double lp_maximal_bound(double p, std::int64_t n, double Theta_max) {
    if (!(p > 1.0)) throw ArgumentError("lp_maximal_bound requires p > 1");
    if (n < 1) throw ArgumentError("lp_maximal_bound requires n >= 1");
    if (!positive(Theta_max)) throw ArgumentError("lp_maximal_bound requires Theta_max > 0");
    const double pp = std::min(p, 2.0);
    return burkholder_constant(p) * std::pow(static_cast<double>(n), 1.0 / pp - 0.5) * Theta_max;
}

double subexp_tail_bound(double u, const BoundParams& params) {
    if (!(u >= 0.0)) throw ArgumentError("subexp_tail_bound requires u >= 0");
    if (!(params.alpha > 1.0 && params.alpha <= 2.0)) throw ArgumentError("alpha must lie in (1, 2]");
    if (!positive(params.C) || !positive(params.K_alpha)) throw ConfigError("C and K_alpha must be > 0");
    return params.C * std::exp(-params.K_alpha * std::pow(u, params.alpha));
}

std::vector<double> running_max_mean_draws(const CurveSpec& cs, std::uint64_t seed) {
    if (cs.reps < 1000) throw ArgumentError("check_domination requires reps >= 1000");
    if (cs.n < 4) throw ArgumentError("check_domination requires n >= 4");
    processes::validate(cs.spec);
    std::vector<double> draws(static_cast<std::size_t>(cs.reps));
    const rng::StreamKey root(seed);
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (draws.size() + kChunk - 1) / kChunk;
    parallel_for(chunks, resolve_workers(cs.workers), [&](std::size_t c) {
        processes::ColumnGenerator gen(cs.spec, cs.n, 1, root);
        std::vector<double> col(static_cast<std::size_t>(cs.n));
        const std::size_t r1 = std::min(draws.size(), (c + 1) * kChunk);
        for (std::size_t r = c * kChunk; r < r1; ++r) {
            gen.restart(root.child(r));
            gen.next(col);
            double s = 0.0;
            double best = 0.0;
            for (double v : col) {
                s += v;
                best = std::max(best, std::abs(s));
            }
            draws[r] = best / static_cast<double>(cs.n);
        }
    });
    return draws;
}

std::vector<double> default_eps_grid(std::vector<double> draws, std::int64_t n, int points) {
    if (draws.empty()) throw ArgumentError("no draws");
    if (points < 2) throw ArgumentError("grid needs at least two points");
    std::sort(draws.begin(), draws.end());
    if (draws.front() == draws.back()) throw DegenerateDataError("all replications are identical");
    const double reps = static_cast<double>(draws.size());
    const double lo_q = stats::sorted_quantile(draws, 0.5);
    const double hi_q = stats::sorted_quantile(draws, std::max(0.5, 1.0 - 10.0 / reps));
    const double floor = 1.0 / static_cast<double>(n);
    const double lo = std::max(lo_q, floor * (1.0 + 1e-9));
    if (!(hi_q > lo)) throw DegenerateDataError("upper tail quantile does not exceed the median");
    std::vector<double> grid;
    const double step = std::log(hi_q / lo) / (points - 1);
    for (int j = 0; j < points; ++j) {
        const double e = lo * std::exp(step * j);
        if (e * static_cast<double>(n) > 1.0) grid.push_back(e);
    }
    return grid;
}

DominationResult check_domination(std::span<const double> draws, std::int64_t n, std::vector<double> epsilons,
                                  const BoundParams& params, bool calibrate) {
    params.validate();
    if (draws.empty()) throw ArgumentError("no draws");
    if (std::all_of(draws.begin(), draws.end(), [&](double v) { return v == draws.front(); })) {
        throw DegenerateDataError("statistic is identical across all replications");
    }
    std::vector<double> sorted(draws.begin(), draws.end());
    std::sort(sorted.begin(), sorted.end());

    DominationResult res;
    TailCurve& tc = res.curve;
    tc.epsilons = std::move(epsilons);
    std::vector<double> target;
    for (double e : tc.epsilons) {
        check_fn_domain(e, n);
        const auto above = static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), e));
        const auto iv = stats::wilson(above, sorted.size());
        const double phat = static_cast<double>(above) / static_cast<double>(sorted.size());
        tc.empirical.push_back(phat);
        tc.wilson.push_back(iv);
        target.push_back(phat - 2.0 * iv.radius());
    }
    res.dominated = dominates(tc.epsilons, target, n, params, &tc.bound);
    res.calibrated = params;
    res.calibrated_dominated = res.dominated;
    if (!calibrate) return res;

    // The bound increases with s, so bisect on log s for the smallest
    // dominating inflation.
    double lo = std::log(1e-6);
    double hi = std::log(1e12);
    if (dominates(tc.epsilons, target, n, scaled(params, std::exp(lo)), nullptr)) {
        hi = lo;
    } else {
        if (!dominates(tc.epsilons, target, n, scaled(params, std::exp(hi)), nullptr)) {
            throw NumericalError("calibration failed: bound cannot dominate within the search range");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (dominates(tc.epsilons, target, n, scaled(params, std::exp(mid)), nullptr)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    res.calibration = std::exp(hi);
    res.calibrated = scaled(params, res.calibration);
    res.calibrated_dominated = dominates(tc.epsilons, target, n, res.calibrated, nullptr);
    return res;
}

DominationResult check_domination(const CurveSpec& cs, const BoundParams& params, bool calibrate,
                                  std::uint64_t seed) {
    params.validate();
    auto draws = running_max_mean_draws(cs, seed);
    auto grid = default_eps_grid(draws, cs.n);
    if (grid.empty()) throw DegenerateDataError("no grid point satisfies eps * n > 1");
    return check_domination(draws, cs.n, std::move(grid), params, calibrate);
}

}  // namespace maxlln::bounds
