#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "maxlln_cli/artifacts.hpp"
#include "maxlln_cli/run.hpp"
#include "maxlln_cli/table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace maxlln::cli;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "maxlln_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_quiet(const json& cfg, std::string* err_text = nullptr) {
    std::ostringstream log, err;
    const int code = run(cfg, log, err);
    if (err_text != nullptr) *err_text = err.str();
    return code;
}

json linear_spec() { return {{"family", "linear"}, {"rule", "geometric"}, {"rate", 0.5}}; }

json simulate_cfg(const fs::path& dir) {
    return {{"command", "simulate"}, {"seed", 42}, {"spec", linear_spec()}, {"n", 100}, {"k", 5},
            {"output", {{"dir", dir.string()}}}};
}

}  // namespace

TEST(Cli, SimulateIsReproducible) {
    const auto a = scratch("sim_a"), b = scratch("sim_b");
    ASSERT_EQ(run_quiet(simulate_cfg(a)), 0);
    ASSERT_EQ(run_quiet(simulate_cfg(b)), 0);
    EXPECT_EQ(slurp(a / "panel.csv"), slurp(b / "panel.csv"));
    const json ma = json::parse(slurp(a / "manifest.json"));
    const json mb = json::parse(slurp(b / "manifest.json"));
    EXPECT_EQ(ma["outputs"], mb["outputs"]);
    EXPECT_EQ(ma["seed"], 42);
    EXPECT_NE(ma["config_hash"], mb["config_hash"]);  // output dir differs
}

TEST(Cli, ManifestChecksumsMatchFiles) {
    const auto d = scratch("manifest");
    ASSERT_EQ(run_quiet(simulate_cfg(d)), 0);
    const json m = json::parse(slurp(d / "manifest.json"));
    ASSERT_EQ(m["outputs"].size(), 2u);
    for (const auto& o : m["outputs"]) {
        const std::string bytes = slurp(d / o["file"].get<std::string>());
        EXPECT_EQ(o["fnv1a64"], checksum(bytes));
        EXPECT_EQ(o["bytes"], bytes.size());
    }
    for (const auto& e : fs::directory_iterator(d)) EXPECT_NE(e.path().extension(), ".tmp");
    for (const char* key : {"config_hash", "tool_version", "started", "finished"}) EXPECT_TRUE(m.contains(key));
}

TEST(Cli, MissingSeedNamesTheField) {
    auto cfg = simulate_cfg(scratch("noseed"));
    cfg.erase("seed");
    std::string err;
    EXPECT_EQ(run_quiet(cfg, &err), 2);
    EXPECT_NE(err.find("'seed'"), std::string::npos) << err;
    EXPECT_FALSE(fs::exists(scratch("noseed") / "manifest.json"));
}

TEST(Cli, ValidationNamesFieldPaths) {
    std::string err;
    auto cfg = simulate_cfg(scratch("bad"));
    cfg["spec"]["rate"] = "half";
    EXPECT_EQ(run_quiet(cfg, &err), 2);
    EXPECT_NE(err.find("rate"), std::string::npos) << err;

    cfg = simulate_cfg(scratch("bad"));
    cfg["colour"] = 1;
    EXPECT_EQ(run_quiet(cfg, &err), 2);
    EXPECT_NE(err.find("colour"), std::string::npos) << err;

    json sp = {{"command", "size-power"},
               {"seed", 1},
               {"reps", 500},
               {"test", {{"type", "maxcorr"}, {"kn", "ten"}}},
               {"null", json::object()},
               {"output", {{"dir", scratch("bad").string()}}}};
    EXPECT_EQ(run_quiet(sp, &err), 2);
    EXPECT_NE(err.find("test.kn"), std::string::npos) << err;

    sp["test"]["kn"] = 10;
    sp["reps"] = 100;
    EXPECT_EQ(run_quiet(sp, &err), 2);
}

TEST(Cli, RateStudyWritesGridAndSlope) {
    const auto d = scratch("rate");
    const json cfg = {{"command", "rate-study"},
                      {"seed", 5},
                      {"spec", {{"family", "linear"}, {"rule", "explicit"}, {"coefficients", {1.0}}}},
                      {"schedule", {{"rule", "fixed"}, {"k", 16}}},
                      {"grid", {256, 512, 1024, 2048, 4096, 8192}},
                      {"reps", 200},
                      {"output", {{"dir", d.string()}}}};
    ASSERT_EQ(run_quiet(cfg), 0);
    const auto t = [&] {
        std::ifstream in(d / "rate_study.csv");
        return parse_csv(in, "rate_study.csv");
    }();
    EXPECT_EQ(t.values.rows(), 6);
    EXPECT_EQ(t.columns[0], "n");
    const json fit = json::parse(slurp(d / "rate_study_fit.json"));
    EXPECT_TRUE(fit.contains("slope"));
    EXPECT_NEAR(fit["slope"].get<double>(), -0.5, 0.1);
}

TEST(Cli, WorkerCountDoesNotChangeOutputs) {
    const auto a = scratch("w1"), b = scratch("w3");
    json cfg = {{"command", "estimate-dependence"}, {"seed", 9}, {"spec", linear_spec()}, {"max_lag", 4},
                {"reps", 3000},                     {"workers", 1}, {"output", {{"dir", a.string()}}}};
    ASSERT_EQ(run_quiet(cfg), 0);
    cfg["workers"] = 3;
    cfg["output"]["dir"] = b.string();
    ASSERT_EQ(run_quiet(cfg), 0);
    EXPECT_EQ(slurp(a / "dependence.csv"), slurp(b / "dependence.csv"));
    EXPECT_EQ(slurp(a / "dependence_summary.json"), slurp(b / "dependence_summary.json"));
}

TEST(Cli, SizePowerReportsWilsonInterval) {
    const auto d = scratch("sp");
    const json cfg = {{"command", "size-power"},
                      {"seed", 11},
                      {"reps", 500},
                      {"test", {{"type", "maxcorr"}, {"kn", 4}, {"sims", 1000}}},
                      {"null", {{"n", 200}}},
                      {"alt", {{"n", 200}}},
                      {"output", {{"dir", d.string()}}}};
    ASSERT_EQ(run_quiet(cfg), 0);
    const json rows = json::parse(slurp(d / "size_power.json"));
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        const double rate = r["rate"].get<double>();
        EXPECT_LT(std::abs(rate - 0.05), 0.04) << r.dump();
        EXPECT_GT(r["half_width"].get<double>(), 0.0);
        EXPECT_LE(r["wilson_lo"].get<double>(), rate);
        EXPECT_GE(r["wilson_hi"].get<double>(), rate);
    }
}

TEST(Cli, DegenerateGeneratorExitsWithDataError) {
    const json cfg = {{"command", "size-power"},
                      {"seed", 1},
                      {"reps", 500},
                      {"test", {{"type", "maxcorr"}, {"kn", 4}, {"sims", 1000}}},
                      {"null", {{"n", 200}, {"noise_scale", 0.0}}},
                      {"output", {{"dir", scratch("degen").string()}}}};
    EXPECT_EQ(run_quiet(cfg), 3);
}

TEST(Cli, InputErrors) {
    const auto d = scratch("input");
    {
        std::ofstream os(d / "ragged.csv");
        os << "y,x1\n1,2\n3\n";
    }
    json cfg = {{"command", "test-screening"}, {"seed", 1}, {"input", (d / "ragged.csv").string()},
                {"output", {{"dir", d.string()}}}};
    EXPECT_EQ(run_quiet(cfg), 3);
    cfg["input"] = (d / "missing.csv").string();
    EXPECT_EQ(run_quiet(cfg), 2);
}

TEST(Cli, ExecutableEndToEnd) {
    const auto d = scratch("exe");
    const std::string exe = MAXLLN_EXE;
    const std::string spec = R"('{"family":"linear","rule":"geometric","rate":0.5}')";
    const auto sh = [](const std::string& cmd) {
        const int st = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    };
    EXPECT_EQ(sh(exe + " simulate --spec " + spec + " --n 50 --k 3 --out " + (d / "a").string()), 2);
    EXPECT_EQ(sh(exe + " simulate --spec " + spec + " --n 50 --k 3 --seed 4 --out " + (d / "a").string()), 0);
    EXPECT_EQ(sh(exe + " simulate --spec " + spec + " --n 50 --k 3 --seed 4 --workers 4 --out " +
                 (d / "b").string()),
              0);
    EXPECT_EQ(slurp(d / "a" / "panel.csv"), slurp(d / "b" / "panel.csv"));

    const json cfg = {{"command", "simulate"}, {"seed", 4}, {"spec", linear_spec()}, {"n", 50}, {"k", 3},
                      {"output", {{"dir", (d / "c").string()}}}};
    {
        std::ofstream os(d / "cfg.json");
        os << cfg.dump();
    }
    EXPECT_EQ(sh(exe + " run --config " + (d / "cfg.json").string()), 0);
    EXPECT_EQ(slurp(d / "a" / "panel.csv"), slurp(d / "c" / "panel.csv"));
    EXPECT_EQ(sh(exe + " frobnicate"), 2);
}
