#include "maxlln_cli/artifacts.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <fmt/format.h>

#include "maxlln/process_io.hpp"

namespace maxlln::cli {

namespace fs = std::filesystem;

std::string checksum(const std::string& bytes) { return hex64(fnv1a64(bytes)); }

std::string config_hash(const nlohmann::json& config) { return hex64(fnv1a64(config.dump())); }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
}

void atomic_write(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        os.flush();
        if (!os) throw std::runtime_error(fmt::format("short write to {}", tmp.string()));
    }
    fs::rename(tmp, path);
}

ArtifactWriter::ArtifactWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void ArtifactWriter::write(const std::string& name, const std::string& contents) {
    atomic_write(dir_ / name, contents);
    artifacts_.push_back({name, checksum(contents), contents.size()});
}

void ArtifactWriter::write_json(const std::string& name, const nlohmann::json& j) { write(name, j.dump(2) + "\n"); }

void ArtifactWriter::write_manifest(const nlohmann::json& config, std::uint64_t seed, const std::string& started,
                                    const std::string& finished) {
    nlohmann::json m;
    m["config_hash"] = config_hash(config);
    m["seed"] = seed;
    m["tool_version"] = MAXLLN_VERSION;
    m["started"] = started;
    m["finished"] = finished;
    m["outputs"] = nlohmann::json::array();
    for (const auto& a : artifacts_) {
        m["outputs"].push_back({{"file", a.name}, {"fnv1a64", a.checksum}, {"bytes", a.bytes}});
    }
    atomic_write(dir_ / "manifest.json", m.dump(2) + "\n");
}

}  // namespace maxlln::cli
