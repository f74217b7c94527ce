#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxlln/gaussian_max.hpp"
#include "maxlln/rng.hpp"
#include "maxlln_cli/artifacts.hpp"
#include "maxlln_cli/config.hpp"

namespace maxlln::cli {

/// Everything a command needs besides its own config block.
struct Context {
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string format = "both";  ///< tables as csv, json or both
    ArtifactWriter* out = nullptr;
    std::ostream* log = nullptr;
};

void cmd_simulate(const Node& cfg, Context& ctx);
void cmd_estimate_dependence(const Node& cfg, Context& ctx);
void cmd_bound_check(const Node& cfg, Context& ctx);
void cmd_rate_study(const Node& cfg, Context& ctx);
void cmd_test_maxcorr(const Node& cfg, Context& ctx);
void cmd_test_screening(const Node& cfg, Context& ctx);
void cmd_test_partial(const Node& cfg, Context& ctx);
void cmd_size_power(const Node& cfg, Context& ctx);

/// One Monte Carlo block of a size/power study.
struct SizePowerRow {
    std::string block;
    std::int64_t reps = 0;
    std::int64_t rejections = 0;
    double rate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    std::int64_t argmax_hits = -1;   ///< -1 when the block plants no signal
    std::int64_t warnings = 0;       ///< replications that raised a schedule warning
};

enum class TestKind { maxcorr, screening, partial };

struct TestSettings {
    TestKind kind = TestKind::maxcorr;
    double level = 0.05;
    std::int64_t kn = 10;          ///< lags for maxcorr
    std::int64_t bandwidth = -1;
    GaussianMaxOptions sim{};
};

/// Rejection frequency of the test over `reps` simulated datasets from the
/// design block. Replication r draws data from root.child(r).child(0) and
/// simulates critical values with root.child(r).child(1).
[[nodiscard]] SizePowerRow size_power_block(const TestSettings& test, const Node& design, const std::string& name,
                                            std::int64_t reps, rng::StreamKey root, std::size_t workers);

[[nodiscard]] TestSettings parse_test_settings(const Node& test);

}  // namespace maxlln::cli
