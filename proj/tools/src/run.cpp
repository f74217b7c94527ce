#include "maxlln_cli/run.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "maxlln/errors.hpp"
#include "maxlln_cli/commands.hpp"
#include "maxlln_cli/config.hpp"

namespace maxlln::cli {

namespace {

using Handler = void (*)(const Node&, Context&);

struct CommandInfo {
    Handler handler;
    std::vector<const char*> fields;
};

const std::map<std::string, CommandInfo>& registry() {
    static const std::map<std::string, CommandInfo> r{
        {"simulate", {cmd_simulate, {"spec", "n", "k", "coupled_lag"}}},
        {"estimate-dependence", {cmd_estimate_dependence, {"spec", "p", "max_lag", "reps", "anchor_n", "gamma"}}},
        {"bound-check", {cmd_bound_check, {"spec", "n", "reps", "bounds", "calibrate"}}},
        {"rate-study", {cmd_rate_study, {"spec", "schedule", "grid", "reps", "max_cells"}}},
        {"test-maxcorr",
         {cmd_test_maxcorr, {"input", "y_column", "kn", "level", "sims", "mode", "bandwidth", "intercept"}}},
        {"test-screening",
         {cmd_test_screening, {"input", "y_column", "level", "sims", "mode", "bandwidth", "b", "lambda"}}},
        {"test-partial",
         {cmd_test_partial, {"input", "y_column", "nuisance_cols", "level", "sims", "mode", "bandwidth", "b"}}},
        {"size-power", {cmd_size_power, {"test", "null", "alt", "reps"}}},
    };
    return r;
}

int exit_code(ErrorClass c) {
    switch (c) {
        case ErrorClass::config: return config_error;
        case ErrorClass::data: return data_error;
        case ErrorClass::numerical: return numerical_error;
        case ErrorClass::resource: return resource_error;
    }
    return failure;
}

}  // namespace

int run(const nlohmann::json& config, std::ostream& log, std::ostream& err) {
    try {
        const Node cfg(config, "");
        const std::string command = cfg.string("command");
        const auto it = registry().find(command);
        if (it == registry().end()) throw ConfigError(fmt::format("field 'command': unknown command '{}'", command));
        const std::uint64_t seed = cfg.uint64("seed");
        for (const auto& [key, _] : config.items()) {
            bool known = key == "command" || key == "seed" || key == "workers" || key == "output";
            for (const char* f : it->second.fields) known = known || key == f;
            if (!known) throw ConfigError(fmt::format("unknown field '{}' for command {}", key, command));
        }

        Context ctx;
        ctx.seed = seed;
        ctx.workers = config_workers(cfg);
        std::string dir = "maxlln_out";
        if (cfg.has("output")) {
            const Node o = cfg.at("output");
            o.only({"dir", "format"});
            dir = o.string("dir", dir);
            ctx.format = o.string("format", ctx.format);
            if (ctx.format != "csv" && ctx.format != "json" && ctx.format != "both") {
                throw ConfigError("field 'output.format' must be csv, json or both");
            }
        }
        ArtifactWriter writer(dir);
        ctx.out = &writer;
        ctx.log = &log;
        const std::string started = utc_timestamp();
        it->second.handler(cfg, ctx);
        writer.write_manifest(config, seed, started, utc_timestamp());
        return ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.error_class());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> workers;
    std::string out = "maxlln_out";
    std::string format = "both";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "64-bit seed (required)");
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--workers", c.workers, "worker threads or 'auto'");
    sub->add_option("--format", c.format, "table format: csv, json or both")->capture_default_str();
}

json base_config(const std::string& command, const Common& c) {
    json j;
    j["command"] = command;
    if (c.seed) j["seed"] = *c.seed;
    if (c.workers) {
        if (*c.workers == "auto") {
            j["workers"] = "auto";
        } else {
            try {
                j["workers"] = std::stoll(*c.workers);
            } catch (const std::exception&) {
                j["workers"] = *c.workers;  // rejected with a field message by run()
            }
        }
    }
    j["output"] = {{"dir", c.out}, {"format", c.format}};
    return j;
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

}  // namespace

int main_entry(int argc, char** argv) {
    CLI::App app{"maxlln: max-statistic laws of large numbers, dependence measures and max-tests"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MAXLLN_VERSION);

    Common common;
    json cfg;
    std::optional<int> config_error_code;

    std::string spec_arg;
    std::optional<std::int64_t> n, k, coupled_lag, max_lag, reps, anchor_n, kn, bandwidth;
    std::optional<double> p, level, b, lambda;
    std::optional<std::int64_t> sims;
    std::string mode = "joint";
    bool calibrate = true, intercept = false;
    std::string bounds_arg, schedule_arg, grid_arg, input, nuisance, test_arg, null_arg, alt_arg, config_path,
        y_column = "y";

    auto with_spec = [&](CLI::App* s) { s->add_option("--spec", spec_arg, "process spec: JSON file or inline JSON"); };
    auto with_test = [&](CLI::App* s) {
        s->add_option("--input", input, "CSV with a y column and covariates")->required();
        s->add_option("--y-column", y_column, "response column")->capture_default_str();
        s->add_option("--level", level, "test level");
        s->add_option("--sims", sims, "Gaussian max simulations");
        s->add_option("--mode", mode, "joint or marginal covariance")->capture_default_str();
        s->add_option("--bandwidth", bandwidth, "Bartlett bandwidth (default floor(n^(1/3)))");
    };

    auto* sim = app.add_subcommand("simulate", "generate a panel from a process spec");
    add_common(sim, common);
    with_spec(sim);
    sim->add_option("--n", n, "time points")->required();
    sim->add_option("--k", k, "coordinates");
    sim->add_option("--coupled-lag", coupled_lag, "also write the coupled copy at this lag");

    auto* dep = app.add_subcommand("estimate-dependence", "coupling estimates of theta^(p)(m) and Theta^(p)");
    add_common(dep, common);
    with_spec(dep);
    dep->add_option("--p", p, "moment order");
    dep->add_option("--max-lag", max_lag, "largest lag M");
    dep->add_option("--reps", reps, "replications");
    dep->add_option("--anchor-n", anchor_n, "window length of the coupled value");

    auto* bnd = app.add_subcommand("bound-check", "empirical tail curve against the Fuk-Nagaev bound");
    add_common(bnd, common);
    with_spec(bnd);
    bnd->add_option("--n", n, "sample size");
    bnd->add_option("--reps", reps, "replications");
    bnd->add_option("--bounds", bounds_arg, "bound constants: JSON file or inline JSON");
    bnd->add_flag("--calibrate,!--no-calibrate", calibrate, "calibrate the constants");

    auto* rate = app.add_subcommand("rate-study", "Monte Carlo mean of M_n along an n grid");
    add_common(rate, common);
    with_spec(rate);
    rate->add_option("--schedule", schedule_arg, "k_n schedule: JSON, e.g. {\"rule\":\"fixed\",\"k\":16}")
        ->required();
    rate->add_option("--grid", grid_arg, "comma separated sample sizes")->required();
    rate->add_option("--reps", reps, "replications per grid point");

    auto* mc = app.add_subcommand("test-maxcorr", "residual max-correlation white-noise test");
    add_common(mc, common);
    with_test(mc);
    mc->add_option("--kn", kn, "number of lags")->required();
    mc->add_flag("--intercept", intercept, "add an intercept column");

    auto* scr = app.add_subcommand("test-screening", "marginal screening max-test");
    add_common(scr, common);
    with_test(scr);
    scr->add_option("--b", b, "tail-growth parameter");
    scr->add_option("--lambda", lambda, "memory parameter");

    auto* par = app.add_subcommand("test-partial", "max-test after partialling out nuisance covariates");
    add_common(par, common);
    with_test(par);
    par->add_option("--nuisance-cols", nuisance, "comma separated nuisance column names");
    par->add_option("--b", b, "moment-growth parameter");

    auto* sp = app.add_subcommand("size-power", "rejection frequencies under design blocks");
    add_common(sp, common);
    sp->add_option("--test", test_arg, "test block: JSON")->required();
    sp->add_option("--null", null_arg, "null design block: JSON")->required();
    sp->add_option("--alt", alt_arg, "alternative design block: JSON");
    sp->add_option("--reps", reps, "replications per block");

    auto* runc = app.add_subcommand("run", "execute an experiment config file");
    runc->add_option("--config", config_path, "JSON config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        auto* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        if (name == "run") {
            return run(load_json_arg(config_path, "config"), std::cout, std::cerr);
        }
        cfg = base_config(name, common);
        if (!spec_arg.empty()) cfg["spec"] = load_json_arg(spec_arg, "spec");
        if (name == "simulate") {
            put(cfg, "n", n);
            put(cfg, "k", k);
            put(cfg, "coupled_lag", coupled_lag);
        } else if (name == "estimate-dependence") {
            put(cfg, "p", p);
            put(cfg, "max_lag", max_lag);
            put(cfg, "reps", reps);
            put(cfg, "anchor_n", anchor_n);
        } else if (name == "bound-check") {
            put(cfg, "n", n);
            put(cfg, "reps", reps);
            if (!bounds_arg.empty()) cfg["bounds"] = load_json_arg(bounds_arg, "bounds");
            cfg["calibrate"] = calibrate;
        } else if (name == "rate-study") {
            cfg["schedule"] = load_json_arg(schedule_arg, "schedule");
            json grid = json::array();
            std::stringstream ss(grid_arg);
            for (std::string tok; std::getline(ss, tok, ',');) {
                try {
                    grid.push_back(std::stoll(tok));
                } catch (const std::exception&) {
                    throw ConfigError(fmt::format("field 'grid': '{}' is not an integer", tok));
                }
            }
            cfg["grid"] = grid;
            put(cfg, "reps", reps);
        } else if (name == "size-power") {
            cfg["test"] = load_json_arg(test_arg, "test");
            cfg["null"] = load_json_arg(null_arg, "null");
            if (!alt_arg.empty()) cfg["alt"] = load_json_arg(alt_arg, "alt");
            put(cfg, "reps", reps);
        } else {
            cfg["input"] = input;
            cfg["y_column"] = y_column;
            cfg["mode"] = mode;
            put(cfg, "level", level);
            put(cfg, "sims", sims);
            put(cfg, "bandwidth", bandwidth);
            if (name == "test-maxcorr") {
                put(cfg, "kn", kn);
                cfg["intercept"] = intercept;
            } else if (name == "test-screening") {
                put(cfg, "b", b);
                put(cfg, "lambda", lambda);
            } else {
                if (!nuisance.empty()) cfg["nuisance_cols"] = nuisance;
                put(cfg, "b", b);
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
    return run(cfg, std::cout, std::cerr);
}

}  // namespace maxlln::cli
