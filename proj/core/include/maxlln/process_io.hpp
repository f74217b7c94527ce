#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "maxlln/processes.hpp"

namespace maxlln::processes {

/// Flat JSON form, e.g.
///   {"family": "linear", "rule": "geometric", "rate": 0.5,
///    "innovation": {"law": "gaussian", "scale": 1.0}}
/// Parsing validates the spec and throws ConfigError naming the bad field.
[[nodiscard]] nlohmann::json to_json(const ProcessSpec& spec);
[[nodiscard]] ProcessSpec spec_from_json(const nlohmann::json& j);

/// FNV-1a 64-bit digest of the canonical JSON form, as 16 hex digits.
[[nodiscard]] std::string spec_hash(const ProcessSpec& spec);

}  // namespace maxlln::processes

namespace maxlln {

[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;
[[nodiscard]] std::string hex64(std::uint64_t v);

}  // namespace maxlln
