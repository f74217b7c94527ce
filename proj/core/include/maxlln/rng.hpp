#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <type_traits>

namespace maxlln::rng {

using Block = std::array<std::uint32_t, 4>;

/// Philox4x32-10 bijection (Salmon et al. 2011). Maps a 128-bit counter to
/// 128 random bits under a 64-bit key.
[[nodiscard]] Block philox4x32(Block counter, std::uint64_t key) noexcept;

/// SplitMix64 finalizer, used to derive child keys.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key of one random stream. Streams form a tree: the config seed is the
/// root, children are derived by index (command -> replication -> ...).
/// Coordinates and time points are addressed through the counter, so a
/// stream never needs to be advanced sequentially.
class StreamKey {
public:
    constexpr StreamKey() = default;
    constexpr explicit StreamKey(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    [[nodiscard]] constexpr StreamKey child(std::uint64_t index) const noexcept {
        StreamKey k;
        k.key_ = mix64(key_ ^ mix64(index + 0x3c6ef372fe94f82bULL));
        return k;
    }

    [[nodiscard]] constexpr std::uint64_t value() const noexcept { return key_; }

    friend constexpr bool operator==(StreamKey, StreamKey) = default;

private:
    std::uint64_t key_ = 0;
};

/// Purpose tags separate otherwise identical counters (main innovations,
/// coupling replacements, initial states, Gaussian simulation draws).
enum class Tag : std::uint8_t {
    innovation = 0,
    coupling = 1,
    initial_state = 2,
    simulation = 3,
    fallback = 0x80,
};

/// 64 random bits addressed by (key, tag, coordinate, time). Time may be
/// negative (burn-in and pre-sample history).
[[nodiscard]] std::uint64_t bits(StreamKey key, Tag tag, std::uint64_t coordinate,
                                 std::int64_t time) noexcept;

/// Fills `out` with the words for times time0, time0+1, ... Equivalent to
/// calling bits() per element, but evaluates each Philox block once.
void fill_bits(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time0,
               std::span<std::uint64_t> out) noexcept;

/// Uniform on (0, 1] with 53 bits of resolution.
[[nodiscard]] constexpr double to_unit_open0(std::uint64_t b) noexcept {
    return static_cast<double>((b >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal variate addressed like bits(). Uses a 128-layer ziggurat;
/// the rare rejection steps draw from a tag-separated fallback sequence so
/// the result is still a pure function of the address.
[[nodiscard]] double normal(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time) noexcept;

/// Batch form of normal(), bit-identical to the scalar calls.
void fill_normals(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time0,
                  std::span<double> out) noexcept;

/// Ziggurat transform of one 64-bit word; `fallback` supplies extra uniform
/// words in the rejection branches.
template <class Fallback>
[[nodiscard]] double ziggurat_normal(std::uint64_t word, Fallback&& fallback) noexcept;

namespace detail {
struct ZigguratTables {
    std::array<std::uint32_t, 128> kn;
    std::array<double, 128> wn;
    std::array<double, 128> fn;
};
const ZigguratTables& ziggurat_tables() noexcept;
double ziggurat_slow(std::int32_t hz, std::uint32_t iz, std::uint64_t (*next)(void*), void* state) noexcept;
}  // namespace detail

template <class Fallback>
double ziggurat_normal(std::uint64_t word, Fallback&& fallback) noexcept {
    const auto& t = detail::ziggurat_tables();
    const auto iz = static_cast<std::uint32_t>(word & 127U);
    const auto hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(word >> 32));
    const std::int64_t ahz = hz < 0 ? -static_cast<std::int64_t>(hz) : hz;
    if (ahz < static_cast<std::int64_t>(t.kn[iz])) {
        return hz * t.wn[iz];
    }
    using F = std::remove_reference_t<Fallback>;
    return detail::ziggurat_slow(
        hz, iz, [](void* s) -> std::uint64_t { return (*static_cast<F*>(s))(); },
        static_cast<void*>(&fallback));
}

/// Sequential convenience generator over one addressed stream, used where
/// draws are consumed in a fixed order (Gaussian simulation, pilot studies).
class Sequence {
public:
    Sequence(StreamKey key, Tag tag, std::uint64_t coordinate = 0)
        : key_(key), tag_(tag), coordinate_(coordinate) {}

    [[nodiscard]] std::uint64_t next_bits() noexcept { return bits(key_, tag_, coordinate_, index_++); }
    [[nodiscard]] double uniform() noexcept { return to_unit_open0(next_bits()); }
    [[nodiscard]] double normal() noexcept { return rng::normal(key_, tag_, coordinate_, index_++); }

private:
    StreamKey key_;
    Tag tag_;
    std::uint64_t coordinate_;
    std::int64_t index_ = 0;
};

}  // namespace maxlln::rng
