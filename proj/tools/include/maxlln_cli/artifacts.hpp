#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace maxlln::cli {

struct Artifact {
    std::string name;      ///< file name relative to the output directory
    std::string checksum;  ///< FNV-1a 64 of the bytes, hex
    std::uint64_t bytes = 0;
};

/// Writes files as temp + rename and keeps their checksums for the manifest.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir);

    void write(const std::string& name, const std::string& contents);
    void write_json(const std::string& name, const nlohmann::json& j);

    [[nodiscard]] const std::vector<Artifact>& artifacts() const noexcept { return artifacts_; }
    [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

    /// manifest.json, written after every other artifact.
    void write_manifest(const nlohmann::json& config, std::uint64_t seed, const std::string& started,
                        const std::string& finished);

private:
    std::filesystem::path dir_;
    std::vector<Artifact> artifacts_;
};

/// Atomic replace of `path` with `contents`.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

[[nodiscard]] std::string checksum(const std::string& bytes);
[[nodiscard]] std::string config_hash(const nlohmann::json& config);
[[nodiscard]] std::string utc_timestamp();

}  // namespace maxlln::cli
