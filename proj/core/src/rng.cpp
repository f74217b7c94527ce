#include "maxlln/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace maxlln::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53U;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57U;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9U;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85U;

// Times are shifted so that negative history indices map to unsigned counters.
constexpr std::int64_t kTimeOffset = std::int64_t{1} << 40;

inline Block counter_for(Tag tag, std::uint64_t coordinate, std::uint64_t block) noexcept {
    return {static_cast<std::uint32_t>(block),
            static_cast<std::uint32_t>((block >> 32) & 0xffU) |
                (static_cast<std::uint32_t>(tag) << 8),
            static_cast<std::uint32_t>(coordinate), static_cast<std::uint32_t>(coordinate >> 32)};
}

inline std::uint64_t word(const Block& b, unsigned half) noexcept {
    return half == 0 ? (static_cast<std::uint64_t>(b[1]) << 32 | b[0])
                     : (static_cast<std::uint64_t>(b[3]) << 32 | b[2]);
}

struct FallbackStream {
    StreamKey key;
    Tag tag;
    std::uint64_t coordinate;
    std::int64_t index = 0;
    std::uint64_t operator()() noexcept {
        return bits(key, static_cast<Tag>(static_cast<std::uint8_t>(tag) | 0x80U), coordinate, index++);
    }
};

FallbackStream make_fallback(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time) noexcept {
    return FallbackStream{key.child(static_cast<std::uint64_t>(time + kTimeOffset)), tag, coordinate};
}

detail::ZigguratTables build_tables() noexcept {
    detail::ZigguratTables t{};
    constexpr double m1 = 2147483648.0;
    constexpr double vn = 9.91256303526217e-3;
    double dn = 3.442619855899;
    double tn = dn;
    const double q = vn / std::exp(-0.5 * dn * dn);
    t.kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
    t.kn[1] = 0;
    t.wn[0] = q / m1;
    t.wn[127] = dn / m1;
    t.fn[0] = 1.0;
    t.fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
        dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
        t.kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
        tn = dn;
        t.fn[i] = std::exp(-0.5 * dn * dn);
        t.wn[i] = dn / m1;
    }
    return t;
}

}  // namespace

Block philox4x32(Block ctr, std::uint64_t key) noexcept {
    auto k0 = static_cast<std::uint32_t>(key);
    auto k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return ctr;
}

std::uint64_t bits(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time) noexcept {
    const auto shifted = static_cast<std::uint64_t>(time + kTimeOffset);
    const Block b = philox4x32(counter_for(tag, coordinate, shifted >> 1), key.value());
    return word(b, static_cast<unsigned>(shifted & 1U));
}

void fill_bits(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time0,
               std::span<std::uint64_t> out) noexcept {
    std::size_t i = 0;
    auto shifted = static_cast<std::uint64_t>(time0 + kTimeOffset);
    while (i < out.size()) {
        const Block b = philox4x32(counter_for(tag, coordinate, shifted >> 1), key.value());
        for (auto half = static_cast<unsigned>(shifted & 1U); half < 2 && i < out.size(); ++half) {
            out[i++] = word(b, half);
            ++shifted;
        }
    }
}

double normal(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time) noexcept {
    const std::uint64_t w = bits(key, tag, coordinate, time);
    const auto& t = detail::ziggurat_tables();
    const auto iz = static_cast<std::uint32_t>(w & 127U);
    const auto hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(w >> 32));
    const std::int64_t ahz = hz < 0 ? -static_cast<std::int64_t>(hz) : hz;
    if (ahz < static_cast<std::int64_t>(t.kn[iz])) {
        return hz * t.wn[iz];
    }
    auto fb = make_fallback(key, tag, coordinate, time);
    return ziggurat_normal(w, fb);
}

void fill_normals(StreamKey key, Tag tag, std::uint64_t coordinate, std::int64_t time0,
                  std::span<double> out) noexcept {
    constexpr std::size_t chunk = 256;
    std::array<std::uint64_t, chunk> words{};
    const auto& t = detail::ziggurat_tables();
    for (std::size_t start = 0; start < out.size(); start += chunk) {
        const std::size_t len = std::min(chunk, out.size() - start);
        const auto time = time0 + static_cast<std::int64_t>(start);
        fill_bits(key, tag, coordinate, time, std::span(words.data(), len));
        for (std::size_t j = 0; j < len; ++j) {
            const std::uint64_t w = words[j];
            const auto iz = static_cast<std::uint32_t>(w & 127U);
            const auto hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(w >> 32));
            const std::int64_t ahz = hz < 0 ? -static_cast<std::int64_t>(hz) : hz;
            if (ahz < static_cast<std::int64_t>(t.kn[iz])) {
                out[start + j] = hz * t.wn[iz];
            } else {
                auto fb = make_fallback(key, tag, coordinate, time + static_cast<std::int64_t>(j));
                out[start + j] = ziggurat_normal(w, fb);
            }
        }
    }
}

namespace detail {

const ZigguratTables& ziggurat_tables() noexcept {
    static const ZigguratTables tables = build_tables();
    return tables;
}

double ziggurat_slow(std::int32_t hz, std::uint32_t iz, std::uint64_t (*next)(void*), void* state) noexcept {
    constexpr double r = 3.442620;
    const auto& t = ziggurat_tables();
    for (;;) {
        const double x = hz * t.wn[iz];
        if (iz == 0) {
            double xt = 0.0;
            double y = 0.0;
            do {
                xt = -std::log(to_unit_open0(next(state))) * 0.2904764;
                y = -std::log(to_unit_open0(next(state)));
            } while (y + y < xt * xt);
            return hz > 0 ? r + xt : -r - xt;
        }
        const double u = to_unit_open0(next(state));
        if (t.fn[iz] + u * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x)) {
            return x;
        }
        const std::uint64_t w = next(state);
        iz = static_cast<std::uint32_t>(w & 127U);
        hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(w >> 32));
        const std::int64_t ahz = hz < 0 ? -static_cast<std::int64_t>(hz) : hz;
        if (ahz < static_cast<std::int64_t>(t.kn[iz])) {
            return hz * t.wn[iz];
        }
    }
}

}  // namespace detail

}  // namespace maxlln::rng
