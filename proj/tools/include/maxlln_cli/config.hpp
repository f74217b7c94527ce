#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace maxlln::cli {

using nlohmann::json;

/// Read-only view of a JSON object that remembers its path, so validation
/// errors can name the offending field ("test.kn", "null.phi[1]").
class Node {
public:
    Node(const json& j, std::string path);

    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] Node at(const std::string& key) const;
    [[nodiscard]] const json& raw() const noexcept { return *j_; }
    [[nodiscard]] const std::string& path() const noexcept { return path_; }
    [[nodiscard]] std::string child_path(const std::string& key) const;

    [[nodiscard]] double number(const std::string& key) const;
    [[nodiscard]] double number(const std::string& key, double fallback) const;
    [[nodiscard]] std::int64_t integer(const std::string& key) const;
    [[nodiscard]] std::int64_t integer(const std::string& key, std::int64_t fallback) const;
    [[nodiscard]] std::uint64_t uint64(const std::string& key) const;
    [[nodiscard]] bool boolean(const std::string& key, bool fallback) const;
    [[nodiscard]] std::string string(const std::string& key) const;
    [[nodiscard]] std::string string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
    [[nodiscard]] std::vector<std::int64_t> integers(const std::string& key) const;
    [[nodiscard]] std::vector<std::string> strings(const std::string& key) const;
    [[nodiscard]] std::optional<double> maybe_number(const std::string& key) const;

    /// Throws ConfigError when the object holds keys outside `allowed`.
    void only(std::initializer_list<const char*> allowed) const;

private:
    const json* j_;
    std::string path_;
};

/// Commands understood by `run`.
[[nodiscard]] const std::vector<std::string>& command_names();

/// Worker count from the config ("workers": n or "auto"); MAXLLN_THREADS,
/// when set, takes precedence.
[[nodiscard]] std::size_t config_workers(const Node& cfg);

/// Parses a file or, if the argument starts with '{', inline JSON text.
[[nodiscard]] json load_json_arg(const std::string& arg, const std::string& field);

}  // namespace maxlln::cli
