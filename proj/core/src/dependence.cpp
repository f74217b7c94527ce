#include "maxlln/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlln/errors.hpp"
#include "maxlln/parallel.hpp"
#include "maxlln/stats.hpp"

namespace maxlln::dependence {

namespace {

constexpr std::int64_t kBlock = 1024;

void check_common(const processes::ProcessSpec& spec, double p, std::int64_t reps, const CouplingOptions& opts) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ArgumentError("moment order p must be > 1");
    if (reps < 100) throw ArgumentError("reps must be >= 100");
    if (opts.anchor_n < 1) throw ArgumentError("anchor_n must be >= 1");
    if (opts.coordinate < 0 || opts.coordinate >= opts.k) throw ArgumentError("coordinate must lie in [0, k)");
    processes::validate(spec);
    if (!spec.innovation.has_moment(p)) {
        throw HeavyTailError("theta^(p) does not exist: pareto tail index must exceed p");
    }
}

double abs_pow(double d, double p) {
    const double a = std::abs(d);
    return p == 2.0 ? a * a : std::pow(a, p);
}

/// Sums of |d|^p and |d|^(2p) per lag, reduced over blocks in index order.
struct Moments {
    std::vector<double> s1;
    std::vector<double> s2;
};

Moments simulate(const processes::ProcessSpec& spec, double p, std::span<const std::int64_t> lags,
                 std::int64_t reps, std::uint64_t seed, const CouplingOptions& opts) {
    const std::int64_t max_lag = lags.empty() ? 0 : *std::max_element(lags.begin(), lags.end());
    std::int64_t anchor = opts.anchor_n;
    const std::int64_t hist = processes::max_coupling_lag(spec, 1);
    anchor = std::max(anchor, max_lag - hist + 1);

    const std::size_t L = lags.size();
    const auto blocks = static_cast<std::size_t>((reps + kBlock - 1) / kBlock);
    std::vector<Moments> partial(blocks);
    const rng::StreamKey root(seed);

    parallel_for(blocks, resolve_workers(opts.workers), [&](std::size_t b) {
        processes::ColumnGenerator gen(spec, anchor, opts.k, root);
        std::vector<double> col(static_cast<std::size_t>(anchor));
        auto anchor_value = [&](rng::StreamKey key, std::optional<std::int64_t> lag) {
            gen.restart(key, lag);
            for (std::int64_t i = 0; i <= opts.coordinate; ++i) gen.next(col);
            return col.back();
        };
        Moments mom{std::vector<double>(L, 0.0), std::vector<double>(L, 0.0)};
        const std::int64_t r0 = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t r1 = std::min(reps, r0 + kBlock);
        for (std::int64_t r = r0; r < r1; ++r) {
            const auto key = root.child(static_cast<std::uint64_t>(r));
            const double base = anchor_value(key, std::nullopt);
            for (std::size_t l = 0; l < L; ++l) {
                const double a = abs_pow(base - anchor_value(key, lags[l]), p);
                mom.s1[l] += a;
                mom.s2[l] += a * a;
            }
        }
        partial[b] = std::move(mom);
    });

    Moments total{std::vector<double>(L, 0.0), std::vector<double>(L, 0.0)};
    for (const auto& m : partial) {
        for (std::size_t l = 0; l < L; ++l) {
            total.s1[l] += m.s1[l];
            total.s2[l] += m.s2[l];
        }
    }
    return total;
}

ThetaEstimate finish(double s1, double s2, double p, std::int64_t reps) {
    const auto R = static_cast<double>(reps);
    const double mu = s1 / R;
    if (!std::isfinite(mu) || !std::isfinite(s2)) {
        throw HeavyTailError("sample p-th moment is not finite; theta^(p) may not exist");
    }
    if (mu <= 0.0) return {0.0, 0.0};
    const double var = std::max(0.0, (s2 - R * mu * mu) / (R - 1.0));
    const double theta = std::pow(mu, 1.0 / p);
    const double se = theta / (p * mu) * std::sqrt(var / R);
    return {theta, se};
}

}  // namespace

std::int64_t default_reps(double p) noexcept { return p <= 4.0 ? 100'000 : 1'000'000; }

ThetaEstimate estimate_theta(const processes::ProcessSpec& spec, double p, std::int64_t m, std::int64_t reps,
                             std::uint64_t seed, const CouplingOptions& opts) {
    check_common(spec, p, reps, opts);
    if (m < 0) throw ArgumentError("lag m must be >= 0");
    const std::int64_t lag[] = {m};
    const Moments mom = simulate(spec, p, lag, reps, seed, opts);
    return finish(mom.s1[0], mom.s2[0], p, reps);
}

DependenceProfile estimate_profile(const processes::ProcessSpec& spec, double p, std::int64_t M, std::int64_t reps,
                                   std::uint64_t seed, const CouplingOptions& opts) {
    check_common(spec, p, reps, opts);
    if (M < 0) throw ArgumentError("max lag M must be >= 0");
    std::vector<std::int64_t> lags(static_cast<std::size_t>(M + 1));
    for (std::int64_t m = 0; m <= M; ++m) lags[static_cast<std::size_t>(m)] = m;
    const Moments mom = simulate(spec, p, lags, reps, seed, opts);

    DependenceProfile prof;
    prof.p = p;
    prof.M = M;
    prof.reps = reps;
    for (std::size_t l = 0; l < lags.size(); ++l) {
        const auto est = finish(mom.s1[l], mom.s2[l], p, reps);
        prof.theta.push_back(est.estimate);
        prof.se.push_back(est.standard_error);
        prof.Theta += est.estimate;
    }
    return prof;
}

Accumulation accumulate(const DependenceProfile& profile) {
    const auto& th = profile.theta;
    if (th.empty()) throw ArgumentError("profile has no lags");
    Accumulation acc;
    double var = 0.0;
    for (std::size_t m = 0; m < th.size(); ++m) {
        acc.partial += th[m];
        const double s = m < profile.se.size() ? profile.se[m] : 0.0;
        var += s * s;
    }
    acc.Theta_se = std::sqrt(var);
    acc.Theta = acc.partial;
    if (th.back() <= 0.0) return acc;

    // log-linear fit on the last three positive lags (m >= 1)
    std::vector<double> x, y, yse;
    for (std::size_t m = th.size() - 1; m >= 1 && x.size() < 3; --m) {
        if (th[m] > 0.0) {
            x.push_back(static_cast<double>(m));
            y.push_back(std::log(th[m]));
            const double s = m < profile.se.size() ? profile.se[m] : 0.0;
            yse.push_back(s / th[m]);
        }
    }
    if (x.size() < 2) return acc;
    const auto fit = stats::fit_line(x, y, yse);
    acc.decay_rate = std::exp(fit.slope);
    acc.decay_rate_se = acc.decay_rate * fit.slope_se;
    if (acc.decay_rate + 2.0 * acc.decay_rate_se >= 1.0) {
        acc.non_summable = true;
        acc.tail = std::numeric_limits<double>::infinity();
        acc.Theta = acc.tail;
        return acc;
    }
    const double r = acc.decay_rate;
    acc.tail = th.back() * r / (1.0 - r);
    acc.Theta = acc.partial + acc.tail;
    return acc;
}

std::vector<double> tau_envelope_linear(std::span<const double> psi_tail, double p, double K) {
    if (!(K > 0.0)) throw ArgumentError("K must be > 0");
    if (!(p > 0.0)) throw ArgumentError("p must be > 0");
    std::vector<double> out;
    out.reserve(psi_tail.size());
    for (double t : psi_tail) {
        if (t < 0.0 || !std::isfinite(t)) throw ArgumentError("psi tail entries must be finite and >= 0");
        out.push_back(K * (p == 1.0 ? t : std::pow(t, p)));
    }
    return out;
}

std::vector<double> psi_tail_sums(std::span<const double> psi, std::int64_t M) {
    if (M < 0) throw ArgumentError("M must be >= 0");
    std::vector<double> suffix(psi.size() + 1, 0.0);
    for (std::size_t j = psi.size(); j-- > 0;) suffix[j] = suffix[j + 1] + std::abs(psi[j]);
    std::vector<double> out(static_cast<std::size_t>(M + 1));
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = m < suffix.size() ? suffix[m] : 0.0;
    return out;
}

GammaDiagnostic gamma_diagnostic(const processes::ProcessSpec& spec, double alpha, std::span<const double> p_grid,
                                 std::int64_t m_max, std::int64_t reps, std::uint64_t seed,
                                 const CouplingOptions& opts) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw ArgumentError("alpha must lie in (1, 2]");
    if (p_grid.empty()) throw ArgumentError("p_grid is empty");
    for (std::size_t i = 1; i < p_grid.size(); ++i) {
        if (!(p_grid[i] > p_grid[i - 1])) throw ArgumentError("p_grid must be strictly increasing");
    }
    for (double p : p_grid) {
        if (!spec.innovation.has_moment(p)) {
            throw HeavyTailError("theta^(p) does not exist: pareto tail index must exceed every grid p");
        }
    }
    GammaDiagnostic g;
    g.alpha = alpha;
    g.p_grid.assign(p_grid.begin(), p_grid.end());
    const double expo = 0.5 - 1.0 / alpha;
    const rng::StreamKey root(seed);
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const double p = p_grid[i];
        const auto prof = estimate_profile(spec, p, m_max, reps, root.child(i).value(), opts);
        const auto acc = accumulate(prof);
        const double scale = std::pow(p, expo);
        g.values.push_back(scale * acc.Theta);
        g.se.push_back(scale * acc.Theta_se);
    }
    const std::size_t G = g.values.size();
    g.bounded = true;
    for (std::size_t i = G >= 3 ? G - 2 : 1; i < G; ++i) {
        const double slack = 2.0 * std::hypot(g.se[i], g.se[i - 1]);
        if (!(g.values[i] - g.values[i - 1] <= slack)) g.bounded = false;
    }
    return g;
}

}  // namespace maxlln::dependence
