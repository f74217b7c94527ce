#include "maxlln/processes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "maxlln/errors.hpp"
#include "maxlln/process_io.hpp"

namespace maxlln::processes {

namespace {

constexpr double kTailTolerance = 1e-12;
constexpr std::size_t kMaxLinearTerms = 1'000'000;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
}

bool finite(double x) { return std::isfinite(x); }

double transform(const InnovationLaw& law, std::uint64_t word, rng::StreamKey key, rng::Tag tag,
                 std::uint64_t coordinate, std::int64_t time) noexcept {
    // gaussian draws go through the ziggurat path; the word is unused there
    switch (law.family) {
        case InnovationFamily::gaussian:
            return law.scale * rng::normal(key, tag, coordinate, time);
        case InnovationFamily::subexponential: {
            const double w = -std::log(rng::to_unit_open0(word));
            const double mag = law.scale * std::pow(w, 1.0 / law.tail);
            return (word & 1U) ? -mag : mag;
        }
        case InnovationFamily::pareto: {
            const double mag = law.scale * std::pow(rng::to_unit_open0(word), -1.0 / law.tail);
            return (word & 1U) ? -mag : mag;
        }
    }
    return 0.0;
}

std::int64_t history_length(const ProcessSpec& spec, const std::vector<double>& psi) {
    switch (spec.family()) {
        case Family::linear:
            return static_cast<std::int64_t>(psi.size()) - 1;
        case Family::lipschitz_markov:
        case Family::iterated_random_fn:
        case Family::random_walk_time:
            return spec.effective_burn_in();
        default:
            return 0;
    }
}

}  // namespace

std::int64_t ProcessSpec::effective_burn_in() const noexcept {
    if (burn_in) return *burn_in;
    switch (family()) {
        case Family::linear:
        case Family::lipschitz_markov:
        case Family::iterated_random_fn:
            return kDefaultBurnIn;
        default:
            return 0;
    }
}

std::string_view family_name(Family f) noexcept {
    switch (f) {
        case Family::linear: return "linear";
        case Family::lipschitz_markov: return "lipschitz_markov";
        case Family::iterated_random_fn: return "iterated_random_fn";
        case Family::gaussian_ar1_coords: return "gaussian_ar1_coords";
        case Family::random_walk_time: return "random_walk_time";
        case Family::lp_trend: return "lp_trend";
    }
    return "?";
}

std::string_view innovation_name(InnovationFamily f) noexcept {
    switch (f) {
        case InnovationFamily::gaussian: return "gaussian";
        case InnovationFamily::subexponential: return "subexponential";
        case InnovationFamily::pareto: return "pareto";
    }
    return "?";
}

void validate(const ProcessSpec& spec) {
    const auto& law = spec.innovation;
    require(finite(law.scale) && law.scale > 0, "innovation.scale must be positive");
    require(finite(law.tail), "innovation tail parameter must be finite");
    if (law.family == InnovationFamily::subexponential) require(law.tail > 0, "subexponential gamma2 must be > 0");
    if (law.family == InnovationFamily::pareto) require(law.tail > 1, "pareto tail index must be > 1");
    if (spec.burn_in) require(*spec.burn_in >= 0, "burn_in must be >= 0");

    std::visit(overloaded{
                   [](const LinearParams& p) {
                       using R = LinearParams::Rule;
                       if (p.rule == R::geometric) {
                           require(finite(p.rate) && std::abs(p.rate) < 1, "geometric rate must satisfy |rate| < 1");
                       } else if (p.rule == R::exp_decay) {
                           require(finite(p.decay) && p.decay > 0, "exp_decay decay must be > 0");
                           require(finite(p.gamma1) && p.gamma1 > 0, "exp_decay gamma1 must be > 0");
                       } else {
                           require(!p.coefficients.empty(), "explicit coefficient list is empty");
                           require(std::all_of(p.coefficients.begin(), p.coefficients.end(), finite),
                                   "explicit coefficients must be finite");
                           require(p.coefficients.size() <= kMaxLinearTerms, "too many explicit coefficients");
                       }
                   },
                   [](const MarkovParams& p) {
                       require(finite(p.rho) && p.rho >= 0 && p.rho < 1, "rho must lie in [0, 1)");
                       require(finite(p.threshold) && p.threshold >= 0, "threshold must be >= 0");
                   },
                   [](const IteratedParams& p) {
                       require(finite(p.lambda) && p.lambda >= 0 && p.lambda < 1, "lambda must lie in [0, 1)");
                   },
                   [&](const GaussianAr1CoordsParams& p) {
                       require(finite(p.zeta) && p.zeta > 0, "zeta must be > 0");
                       require(law.family == InnovationFamily::gaussian && law.scale == 1.0,
                               "gaussian_ar1_coords requires unit gaussian innovations");
                       require(!spec.common_coordinates, "gaussian_ar1_coords cannot use common_coordinates");
                   },
                   [](const RandomWalkParams&) {},
                   [](const TrendParams& p) {
                       require(finite(p.exponent) && p.exponent >= 0, "trend exponent must be >= 0");
                   },
               },
               spec.params);
}

std::vector<double> linear_coefficients(const LinearParams& p) {
    using R = LinearParams::Rule;
    if (p.rule == R::explicit_list) return p.coefficients;

    std::vector<double> psi;
    if (p.rule == R::geometric) {
        const double r = std::abs(p.rate);
        // tail after J: r^{J+1} / (1 - r)
        psi.push_back(1.0);
        double tail = r / (1.0 - r);
        while (tail >= kTailTolerance) {
            psi.push_back(psi.back() * p.rate);
            tail *= r;
            if (psi.size() > kMaxLinearTerms) throw ConfigError("geometric rate too close to 1");
        }
        return psi;
    }
    // exp_decay: accumulate terms until negligible, then cut where the
    // remaining tail falls below tolerance.
    for (std::size_t j = 0;; ++j) {
        const double v = std::exp(-p.decay * std::pow(static_cast<double>(j), p.gamma1));
        psi.push_back(v);
        if (j > 0 && v < kTailTolerance * 1e-6) break;
        if (psi.size() > kMaxLinearTerms) throw ConfigError("exp_decay coefficients decay too slowly");
    }
    double tail = 0.0;
    std::size_t cut = psi.size();
    while (cut > 1 && tail + psi[cut - 1] < kTailTolerance) {
        tail += psi[cut - 1];
        --cut;
    }
    psi.resize(cut);
    return psi;
}

double gaussian_ar1_coefficient(double zeta, std::int64_t k) {
    if (k < 2) throw ConfigError("gaussian_ar1_coords requires k >= 2");
    const double d = 1.0 - zeta / std::log(static_cast<double>(k));
    if (!(std::abs(d) < 1.0)) throw ConfigError("gaussian_ar1_coords: |1 - zeta/ln k| must be < 1");
    return d;
}

std::int64_t max_coupling_lag(const ProcessSpec& spec, std::int64_t n) {
    std::int64_t h = spec.effective_burn_in();
    if (const auto* lp = std::get_if<LinearParams>(&spec.params)) {
        h = std::max<std::int64_t>(h, static_cast<std::int64_t>(linear_coefficients(*lp).size()) - 1);
    }
    return h + n - 1;
}

double innovation(const InnovationLaw& law, rng::StreamKey key, rng::Tag tag, std::uint64_t coordinate,
                  std::int64_t time) noexcept {
    if (law.family == InnovationFamily::gaussian) return law.scale * rng::normal(key, tag, coordinate, time);
    return transform(law, rng::bits(key, tag, coordinate, time), key, tag, coordinate, time);
}

void fill_innovations(const InnovationLaw& law, rng::StreamKey key, rng::Tag tag, std::uint64_t coordinate,
                      std::int64_t time0, std::span<double> out) noexcept {
    if (law.family == InnovationFamily::gaussian) {
        rng::fill_normals(key, tag, coordinate, time0, out);
        if (law.scale != 1.0) {
            for (double& v : out) v *= law.scale;
        }
        return;
    }
    constexpr std::size_t kChunk = 256;
    std::array<std::uint64_t, kChunk> words{};
    for (std::size_t off = 0; off < out.size(); off += kChunk) {
        const std::size_t len = std::min(kChunk, out.size() - off);
        const auto t0 = time0 + static_cast<std::int64_t>(off);
        rng::fill_bits(key, tag, coordinate, t0, std::span(words.data(), len));
        for (std::size_t i = 0; i < len; ++i) {
            out[off + i] = transform(law, words[i], key, tag, coordinate, t0 + static_cast<std::int64_t>(i));
        }
    }
}

ColumnGenerator::ColumnGenerator(const ProcessSpec& spec, std::int64_t n, std::int64_t k, rng::StreamKey key,
                                 std::optional<std::int64_t> coupling_lag)
    : spec_(spec), n_(n), k_(k), key_(key), lag_(coupling_lag) {
    validate(spec_);
    if (n < 1) throw ConfigError("n must be >= 1");
    if (k < 1) throw ConfigError("k must be >= 1");
    max_lag_ = max_coupling_lag(spec_, n);
    restart(key, coupling_lag);
    if (const auto* lp = std::get_if<LinearParams>(&spec_.params)) psi_ = linear_coefficients(*lp);
    if (const auto* ap = std::get_if<GaussianAr1CoordsParams>(&spec_.params)) {
        ar1_d_ = gaussian_ar1_coefficient(ap->zeta, k);
    }
    history_ = history_length(spec_, psi_);
    eps_.resize(static_cast<std::size_t>(history_ + n_));
}

void ColumnGenerator::restart(rng::StreamKey key, std::optional<std::int64_t> coupling_lag) {
    if (coupling_lag && (*coupling_lag < 0 || *coupling_lag > max_lag_)) {
        throw ArgumentError("coupling lag m must satisfy 0 <= m <= burn_in + n - 1");
    }
    key_ = key;
    lag_ = coupling_lag;
    produced_ = 0;
}

void ColumnGenerator::stream_column(std::uint64_t coordinate, std::span<double> out) {
    const auto& law = spec_.innovation;
    fill_innovations(law, key_, rng::Tag::innovation, coordinate, -history_, eps_);
    if (lag_) {
        const std::int64_t tau = n_ - 1 - *lag_;
        const std::int64_t idx = tau + history_;
        if (idx >= 0) {
            eps_[static_cast<std::size_t>(idx)] = innovation(law, key_, rng::Tag::coupling, coordinate, tau);
        }
    }
    const double* e = eps_.data() + history_;  // e[tau], tau in [-history, n)
    const auto n = static_cast<std::size_t>(n_);

    std::visit(overloaded{
                   [&](const LinearParams&) {
                       const std::size_t J = psi_.size();
                       for (std::size_t t = 0; t < n; ++t) {
                           double s = 0.0;
                           const double* et = e + t;
                           for (std::size_t j = 0; j < J; ++j) s += psi_[j] * et[-static_cast<std::ptrdiff_t>(j)];
                           out[t] = s;
                       }
                   },
                   [&](const MarkovParams& p) {
                       double x = 0.0;
                       if (p.map == MarkovMap::linear && law.family == InnovationFamily::gaussian) {
                           // stationary start so short burn-ins are already in equilibrium
                           x = law.scale / std::sqrt(1.0 - p.rho * p.rho) *
                               rng::normal(key_, rng::Tag::initial_state, coordinate, -history_ - 1);
                       }
                       for (std::int64_t tau = -history_; tau < n_; ++tau) {
                           double f;
                           if (p.map == MarkovMap::linear) {
                               f = p.rho * x;
                           } else {
                               const double a = std::max(std::abs(x) - p.threshold, 0.0);
                               f = p.rho * std::copysign(a, x);
                           }
                           x = f + e[tau];
                           if (tau >= 0) out[static_cast<std::size_t>(tau)] = x;
                       }
                   },
                   [&](const IteratedParams& p) {
                       double x = 0.0;
                       for (std::int64_t tau = -history_; tau < n_; ++tau) {
                           x = p.lambda * std::cos(e[tau]) * x + e[tau];
                           if (tau >= 0) out[static_cast<std::size_t>(tau)] = x;
                       }
                   },
                   [&](const GaussianAr1CoordsParams&) {
                       for (std::size_t t = 0; t < n; ++t) out[t] = e[t];
                   },
                   [&](const RandomWalkParams&) {
                       double x = 0.0;
                       for (std::int64_t tau = -history_; tau < n_; ++tau) {
                           x += e[tau];
                           if (tau >= 0) out[static_cast<std::size_t>(tau)] = x;
                       }
                   },
                   [&](const TrendParams& p) {
                       for (std::size_t t = 0; t < n; ++t) {
                           out[t] = std::pow(static_cast<double>(t + 1), p.exponent) * e[t];
                       }
                   },
               },
               spec_.params);
}

bool ColumnGenerator::next(std::span<double> out) {
    if (produced_ >= k_) return false;
    if (out.size() != static_cast<std::size_t>(n_)) throw ArgumentError("column buffer has wrong length");
    const auto i = static_cast<std::uint64_t>(produced_);

    if (spec_.family() == Family::gaussian_ar1_coords) {
        stream_column(i, out);
        if (produced_ > 0) {
            const double d = ar1_d_;
            const double c = std::sqrt(1.0 - d * d);
            for (std::size_t t = 0; t < out.size(); ++t) out[t] = d * prev_[t] + c * out[t];
        }
        prev_.assign(out.begin(), out.end());
    } else if (spec_.common_coordinates) {
        if (produced_ == 0) {
            stream_column(0, out);
            prev_.assign(out.begin(), out.end());
        } else {
            std::copy(prev_.begin(), prev_.end(), out.begin());
        }
    } else {
        stream_column(i, out);
    }
    ++produced_;
    return true;
}

Panel generate(const ProcessSpec& spec, std::int64_t n, std::int64_t k, rng::StreamKey key,
               std::optional<std::int64_t> coupling_lag) {
    ColumnGenerator gen(spec, n, k, key, coupling_lag);
    Eigen::MatrixXd data(n, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        gen.next(std::span<double>(data.col(i).data(), static_cast<std::size_t>(n)));
    }
    return Panel(std::move(data), PanelMeta{key.value(), spec_hash(spec)});
}

Panel generate(const ProcessSpec& spec, std::int64_t n, std::int64_t k, std::uint64_t seed) {
    Panel p = generate(spec, n, k, rng::StreamKey(seed));
    return Panel(p.data(), PanelMeta{seed, p.meta().spec_hash});
}

std::pair<Panel, Panel> generate_coupled(const ProcessSpec& spec, std::int64_t n, std::int64_t k, std::int64_t m,
                                         std::uint64_t seed) {
    const rng::StreamKey key(seed);
    Panel base = generate(spec, n, k, key);
    Panel coupled = generate(spec, n, k, key, m);
    return {Panel(base.data(), PanelMeta{seed, base.meta().spec_hash}),
            Panel(coupled.data(), PanelMeta{seed, coupled.meta().spec_hash})};
}

}  // namespace maxlln::processes
