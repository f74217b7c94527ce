#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "maxlln/panel.hpp"
#include "maxlln/rng.hpp"

namespace maxlln::processes {

enum class InnovationFamily { gaussian, subexponential, pareto };

/// Symmetric, zero-mean innovation law.
///  - gaussian: scale * N(0, 1)
///  - subexponential: scale * sign * W^(1/tail), W ~ Exp(1); P(|e| > u) = exp(-(u/scale)^tail)
///  - pareto: scale * sign * U^(-1/tail); tail index tail > 1
struct InnovationLaw {
    InnovationFamily family = InnovationFamily::gaussian;
    double scale = 1.0;
    double tail = 2.0;

    [[nodiscard]] static InnovationLaw gaussian(double scale = 1.0) {
        return {InnovationFamily::gaussian, scale, 2.0};
    }
    [[nodiscard]] static InnovationLaw subexponential(double gamma2, double scale = 1.0) {
        return {InnovationFamily::subexponential, scale, gamma2};
    }
    [[nodiscard]] static InnovationLaw pareto(double phi, double scale = 1.0) {
        return {InnovationFamily::pareto, scale, phi};
    }

    /// True when E|e|^p is finite.
    [[nodiscard]] bool has_moment(double p) const noexcept {
        return family != InnovationFamily::pareto || p < tail;
    }

    friend bool operator==(const InnovationLaw&, const InnovationLaw&) = default;
};

/// x_t = sum_j psi_j e_{t-j}, psi truncated once the remaining absolute tail
/// drops below 1e-12.
struct LinearParams {
    enum class Rule { geometric, exp_decay, explicit_list };
    Rule rule = Rule::geometric;
    double rate = 0.5;    ///< geometric: psi_j = rate^j
    double decay = 1.0;   ///< exp_decay: psi_j = exp(-decay * j^gamma1)
    double gamma1 = 1.0;
    std::vector<double> coefficients;  ///< explicit_list: psi_0, psi_1, ...

    friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

enum class MarkovMap { linear, soft_threshold };

/// x_t = f(x_{t-1}) + e_t with f rho-Lipschitz: f(x) = rho x, or
/// f(x) = rho sign(x) max(|x| - threshold, 0).
struct MarkovParams {
    double rho = 0.5;
    MarkovMap map = MarkovMap::linear;
    double threshold = 1.0;
    friend bool operator==(const MarkovParams&, const MarkovParams&) = default;
};

/// Random-coefficient recursion x_t = lambda cos(e_t) x_{t-1} + e_t, whose
/// random map has L_p Lipschitz factor at most lambda.
struct IteratedParams {
    double lambda = 0.5;
    friend bool operator==(const IteratedParams&, const IteratedParams&) = default;
};

/// Cross-coordinate Gaussian AR(1): x_{1,t} = e_{1,t},
/// x_{i+1,t} = d x_{i,t} + sqrt(1 - d^2) e_{i+1,t}, d = 1 - zeta / ln(k).
struct GaussianAr1CoordsParams {
    double zeta = 1.0;
    friend bool operator==(const GaussianAr1CoordsParams&, const GaussianAr1CoordsParams&) = default;
};

/// x_t = x_{t-1} + e_t started from 0.
struct RandomWalkParams {
    friend bool operator==(const RandomWalkParams&, const RandomWalkParams&) = default;
};

/// x_t = t^exponent e_t, t = 1, 2, ...
struct TrendParams {
    double exponent = 0.0;
    friend bool operator==(const TrendParams&, const TrendParams&) = default;
};

enum class Family { linear, lipschitz_markov, iterated_random_fn, gaussian_ar1_coords, random_walk_time, lp_trend };

using FamilyParams = std::variant<LinearParams, MarkovParams, IteratedParams, GaussianAr1CoordsParams,
                                  RandomWalkParams, TrendParams>;

inline constexpr std::int64_t kDefaultBurnIn = 2000;

struct ProcessSpec {
    FamilyParams params = LinearParams{};
    InnovationLaw innovation{};
    /// Unset means the family default: 2000 for linear, lipschitz_markov and
    /// iterated_random_fn; 0 for the others.
    std::optional<std::int64_t> burn_in;
    /// Every coordinate reuses the innovation stream of coordinate 0, giving
    /// perfectly dependent (identical) columns.
    bool common_coordinates = false;

    [[nodiscard]] Family family() const noexcept { return static_cast<Family>(params.index()); }
    [[nodiscard]] std::int64_t effective_burn_in() const noexcept;

    friend bool operator==(const ProcessSpec&, const ProcessSpec&) = default;
};

[[nodiscard]] std::string_view family_name(Family f) noexcept;
[[nodiscard]] std::string_view innovation_name(InnovationFamily f) noexcept;

/// Throws ConfigError when the spec violates its invariants.
void validate(const ProcessSpec& spec);

/// Moving-average weights actually used for a linear spec.
[[nodiscard]] std::vector<double> linear_coefficients(const LinearParams& params);

/// d_n = 1 - zeta / ln(k). Throws ConfigError for k < 2 or |d| >= 1.
[[nodiscard]] double gaussian_ar1_coefficient(double zeta, std::int64_t k);

/// Largest admissible coupling lag for a window of length n.
[[nodiscard]] std::int64_t max_coupling_lag(const ProcessSpec& spec, std::int64_t n);

/// Innovation e_{coordinate, time} of `law` on the stream (key, tag).
[[nodiscard]] double innovation(const InnovationLaw& law, rng::StreamKey key, rng::Tag tag,
                                std::uint64_t coordinate, std::int64_t time) noexcept;

/// Batch form of innovation() over consecutive times starting at time0.
void fill_innovations(const InnovationLaw& law, rng::StreamKey key, rng::Tag tag, std::uint64_t coordinate,
                      std::int64_t time0, std::span<double> out) noexcept;

/// Produces the columns of a panel one at a time without materializing it.
/// Window time indices are 0..n-1; history uses negative indices. With a
/// coupling lag m, the innovation at time n-1-m of every coordinate is
/// replaced by an independent copy; everything else is shared bit for bit.
class ColumnGenerator {
public:
    ColumnGenerator(const ProcessSpec& spec, std::int64_t n, std::int64_t k, rng::StreamKey key,
                    std::optional<std::int64_t> coupling_lag = std::nullopt);

    /// Writes the next coordinate into `out` (size n). Returns false once all
    /// k columns have been produced.
    bool next(std::span<double> out);

    /// Rewinds to the first column under a new key and coupling lag, reusing
    /// the validated spec and buffers.
    void restart(rng::StreamKey key, std::optional<std::int64_t> coupling_lag = std::nullopt);

    [[nodiscard]] std::int64_t n() const noexcept { return n_; }
    [[nodiscard]] std::int64_t k() const noexcept { return k_; }

private:
    void stream_column(std::uint64_t coordinate, std::span<double> out);

    ProcessSpec spec_;
    std::int64_t n_;
    std::int64_t k_;
    rng::StreamKey key_;
    std::optional<std::int64_t> lag_;
    std::int64_t history_ = 0;
    std::int64_t max_lag_ = 0;
    std::vector<double> psi_;
    std::vector<double> eps_;
    std::vector<double> prev_;
    double ar1_d_ = 0.0;
    std::int64_t produced_ = 0;
};

/// Panel of n time points and k coordinates, a pure function of (spec, n, k, seed).
[[nodiscard]] Panel generate(const ProcessSpec& spec, std::int64_t n, std::int64_t k, std::uint64_t seed);

/// Same, keyed by an already-derived stream (e.g. one replication).
[[nodiscard]] Panel generate(const ProcessSpec& spec, std::int64_t n, std::int64_t k, rng::StreamKey key,
                             std::optional<std::int64_t> coupling_lag = std::nullopt);

/// The panel and its coupled copy at lag m, anchored at the final time index.
[[nodiscard]] std::pair<Panel, Panel> generate_coupled(const ProcessSpec& spec, std::int64_t n, std::int64_t k,
                                                       std::int64_t m, std::uint64_t seed);

}  // namespace maxlln::processes
