#include "maxlln_cli/commands.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "maxlln/bounds.hpp"
#include "maxlln/dependence.hpp"
#include "maxlln/errors.hpp"
#include "maxlln/maxcorr.hpp"
#include "maxlln/maxstats.hpp"
#include "maxlln/parallel.hpp"
#include "maxlln/partial.hpp"
#include "maxlln/process_io.hpp"
#include "maxlln/processes.hpp"
#include "maxlln/screening.hpp"
#include "maxlln/stats.hpp"
#include "maxlln_cli/table.hpp"

namespace maxlln::cli {

namespace {

json to_array(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

processes::ProcessSpec read_spec(const Node& cfg) {
    const Node s = cfg.at("spec");
    try {
        return processes::spec_from_json(s.raw());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("spec: {}", e.what()));
    }
}

void emit_table(Context& ctx, const std::string& stem, const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
    if (ctx.format == "csv" || ctx.format == "both") ctx.out->write(stem + ".csv", to_csv(columns, rows));
    if (ctx.format == "json" || ctx.format == "both") {
        json arr = json::array();
        for (const auto& r : rows) {
            json o;
            for (std::size_t j = 0; j < columns.size(); ++j) o[columns[j]] = r[j];
            arr.push_back(o);
        }
        ctx.out->write_json(stem + ".json", arr);
    }
}

GaussianMaxOptions read_sim(const Node& cfg) {
    GaussianMaxOptions o;
    o.sims = cfg.integer("sims", 10'000);
    const std::string mode = cfg.string("mode", "joint");
    if (mode == "joint") {
        o.mode = CovarianceMode::joint;
    } else if (mode == "marginal") {
        o.mode = CovarianceMode::marginal;
    } else {
        throw ConfigError(fmt::format("field '{}' must be \"joint\" or \"marginal\"", cfg.child_path("mode")));
    }
    return o;
}

double read_level(const Node& cfg) {
    const double level = cfg.number("level", 0.05);
    if (!(level > 0.0 && level < 1.0)) {
        throw ConfigError(fmt::format("field '{}' must lie in (0, 1)", cfg.child_path("level")));
    }
    return level;
}

std::string warnings_block(const std::vector<std::string>& w) {
    std::string s;
    for (const auto& m : w) s += fmt::format("warning: {}\n", m);
    return s;
}

Eigen::MatrixXd columns_of(const Table& t, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd m(t.values.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = t.values.col(idx[j]);
    return m;
}

struct InputFrame {
    Table table;
    Eigen::Index y = -1;
    std::vector<Eigen::Index> others;  ///< every column except y, in file order
};

InputFrame read_input(const Node& cfg) {
    InputFrame f;
    f.table = read_csv(cfg.string("input"));
    const std::string ycol = cfg.string("y_column", "y");
    f.y = f.table.column(ycol);
    if (f.y < 0) throw DegenerateDataError(fmt::format("input has no column named '{}'", ycol));
    if (f.table.values.rows() < 3) throw DegenerateDataError("input needs at least 3 rows");
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(f.table.columns.size()); ++j) {
        if (j != f.y) f.others.push_back(j);
    }
    return f;
}

json maxcorr_json(const maxcorr::MaxCorrReport& r) {
    return {{"test", "maxcorr"},       {"statistic", r.statistic},    {"argmax_lag", r.argmax_lag},
            {"phi_hat", to_array(r.phi_hat)}, {"rho_hat", to_array(r.rho_hat)}, {"sigma2_hat", to_array(r.sigma2_hat)},
            {"crit_value", r.crit_value},  {"p_value", r.p_value},        {"k_n", r.k_n},
            {"n", r.n},                    {"level", r.level},            {"bandwidth", r.bandwidth},
            {"reject", r.reject},          {"warnings", r.warnings}};
}

json screening_json(const screening::ScreeningReport& r, const std::vector<std::string>& names) {
    return {{"test", "screening"},
            {"statistic", r.statistic},
            {"argmax", r.argmax + 1},
            {"argmax_name", names[static_cast<std::size_t>(r.argmax)]},
            {"phi_hat", to_array(r.phi_hat)},
            {"t_stat", to_array(r.t_stat)},
            {"sigma2_hat", to_array(r.sigma2_hat)},
            {"crit_value", r.crit_value},
            {"p_value", r.p_value},
            {"k_n", r.k_n},
            {"n", r.n},
            {"level", r.level},
            {"bandwidth", r.bandwidth},
            {"schedule_exponent", r.schedule_exponent},
            {"reject", r.reject},
            {"warnings", r.warnings}};
}

json partial_json(const partial::PartialReport& r, const std::vector<std::string>& names) {
    return {{"test", "partial"},
            {"statistic", r.statistic},
            {"argmax", r.argmax + 1},
            {"argmax_name", names[static_cast<std::size_t>(r.argmax)]},
            {"delta_hat", to_array(r.delta_hat)},
            {"t_stat", to_array(r.t_stat)},
            {"sigma2_hat", to_array(r.sigma2_hat)},
            {"crit_value", r.crit_value},
            {"p_value", r.p_value},
            {"k_n", r.k_n},
            {"k_theta", r.k_theta},
            {"n", r.n},
            {"level", r.level},
            {"bandwidth", r.bandwidth},
            {"schedule_exponent", r.schedule_exponent},
            {"reject", r.reject},
            {"warnings", r.warnings}};
}

void print_summary(std::ostream& os, const std::string& title, double stat, double crit, double p, bool reject,
                   const std::string& argmax) {
    os << fmt::format("{}\n", title);
    os << fmt::format("  {:<12} {:>12.6f}\n", "statistic", stat);
    os << fmt::format("  {:<12} {:>12.6f}\n", "crit_value", crit);
    os << fmt::format("  {:<12} {:>12.4f}\n", "p_value", p);
    os << fmt::format("  {:<12} {:>12}\n", "argmax", argmax);
    os << fmt::format("  {:<12} {:>12}\n", "reject", reject ? "yes" : "no");
}

// Design blocks. Indices in configs are 1-based; 0 or absent means no signal.
maxcorr::MaxCorrDesign maxcorr_design(const Node& d) {
    d.only({"n", "kx", "x_rho", "error_ar", "phi", "noise_scale"});
    maxcorr::MaxCorrDesign m;
    m.n = d.integer("n", m.n);
    m.kx = d.integer("kx", m.kx);
    m.x_rho = d.number("x_rho", m.x_rho);
    m.error_ar = d.number("error_ar", m.error_ar);
    if (d.has("phi")) {
        m.phi = d.numbers("phi");
    } else if (m.kx != 2) {
        m.phi.assign(static_cast<std::size_t>(std::max<std::int64_t>(m.kx, 0)), 1.0);
    }
    m.noise_scale = d.number("noise_scale", 1.0);
    return m;
}

screening::ScreeningDesign screening_design(const Node& d) {
    d.only({"n", "k", "x_rho", "y_ar", "signal_index", "signal", "noise_scale"});
    screening::ScreeningDesign s;
    s.n = d.integer("n", s.n);
    s.k = d.integer("k", s.k);
    s.x_rho = d.number("x_rho", s.x_rho);
    s.y_ar = d.number("y_ar", s.y_ar);
    s.signal_index = d.integer("signal_index", 0) - 1;
    s.signal = d.number("signal", s.signal);
    s.noise_scale = d.number("noise_scale", 1.0);
    return s;
}

partial::PartialDesign partial_design(const Node& d) {
    d.only({"n", "k", "k_theta", "rho_w", "rho_x", "rho_u", "w_load", "theta", "signal_index", "signal",
            "noise_scale"});
    partial::PartialDesign p;
    p.n = d.integer("n", p.n);
    p.k = d.integer("k", p.k);
    p.k_theta = d.integer("k_theta", p.k_theta);
    p.rho_w = d.number("rho_w", p.rho_w);
    p.rho_x = d.number("rho_x", p.rho_x);
    p.rho_u = d.number("rho_u", p.rho_u);
    p.w_load = d.number("w_load", p.w_load);
    p.theta = d.number("theta", p.theta);
    p.signal_index = d.integer("signal_index", 0) - 1;
    p.signal = d.number("signal", p.signal);
    p.noise_scale = d.number("noise_scale", 1.0);
    return p;
}

bounds::BoundParams bound_params(const Node& cfg) {
    bounds::BoundParams b;
    if (!cfg.has("bounds")) return b;
    const Node n = cfg.at("bounds");
    n.only({"a", "b", "c", "d", "gamma1", "gamma2", "K1", "K2", "K3", "K4", "K5", "C", "K_alpha", "alpha", "p"});
    b.a = n.number("a", b.a);
    b.b = n.number("b", b.b);
    b.c = n.number("c", b.c);
    b.d = n.number("d", b.d);
    b.gamma1 = n.number("gamma1", b.gamma1);
    b.gamma2 = n.number("gamma2", b.gamma2);
    b.K1 = n.number("K1", b.K1);
    b.K2 = n.number("K2", b.K2);
    b.K3 = n.number("K3", b.K3);
    b.K4 = n.number("K4", b.K4);
    b.K5 = n.number("K5", b.K5);
    b.C = n.number("C", b.C);
    b.K_alpha = n.number("K_alpha", b.K_alpha);
    b.alpha = n.number("alpha", b.alpha);
    b.p = n.number("p", b.p);
    return b;
}

json bound_params_json(const bounds::BoundParams& b) {
    return {{"gamma1", b.gamma1}, {"gamma2", b.gamma2}, {"K1", b.K1}, {"K2", b.K2},
            {"K3", b.K3},         {"K4", b.K4},         {"K5", b.K5}};
}

maxstats::KnSchedule read_schedule(const Node& s) {
    s.only({"rule", "k", "a", "c", "s"});
    const std::string rule = s.string("rule");
    maxstats::KnSchedule k;
    if (rule == "fixed") {
        k = maxstats::KnSchedule::fixed(s.integer("k"));
    } else if (rule == "poly") {
        k = maxstats::KnSchedule::poly(s.number("a"));
    } else if (rule == "exp") {
        k = maxstats::KnSchedule::exp(s.number("c"), s.number("s"));
    } else {
        throw ConfigError(fmt::format("field '{}' must be fixed, poly or exp", s.child_path("rule")));
    }
    k.validate();
    return k;
}

}  // namespace

void cmd_simulate(const Node& cfg, Context& ctx) {
    const auto spec = read_spec(cfg);
    const std::int64_t n = cfg.integer("n");
    const std::int64_t k = cfg.integer("k", 1);
    if (n < 1 || k < 1) throw ConfigError("fields 'n' and 'k' must be >= 1");
    std::ostringstream os;
    if (cfg.has("coupled_lag")) {
        const auto [base, coupled] = processes::generate_coupled(spec, n, k, cfg.integer("coupled_lag"), ctx.seed);
        write_panel_csv(os, base);
        ctx.out->write("panel.csv", os.str());
        std::ostringstream oc;
        write_panel_csv(oc, coupled);
        ctx.out->write("coupled.csv", oc.str());
    } else {
        write_panel_csv(os, processes::generate(spec, n, k, ctx.seed));
        ctx.out->write("panel.csv", os.str());
    }
    ctx.out->write_json("spec.json", {{"spec", processes::to_json(spec)}, {"spec_hash", processes::spec_hash(spec)}, {"n", n}, {"k", k}});
    *ctx.log << fmt::format("simulated {} x {} panel ({})\n", n, k, processes::spec_hash(spec));
}

void cmd_estimate_dependence(const Node& cfg, Context& ctx) {
    const auto spec = read_spec(cfg);
    const double p = cfg.number("p", 2.0);
    const std::int64_t M = cfg.integer("max_lag", 8);
    const std::int64_t reps = cfg.integer("reps", dependence::default_reps(p));
    dependence::CouplingOptions o;
    o.anchor_n = cfg.integer("anchor_n", 1);
    o.workers = ctx.workers;
    const auto prof = dependence::estimate_profile(spec, p, M, reps, ctx.seed, o);
    const auto acc = dependence::accumulate(prof);

    std::vector<std::vector<double>> rows;
    double running = 0.0;
    for (std::size_t m = 0; m < prof.theta.size(); ++m) {
        running += prof.theta[m];
        rows.push_back({static_cast<double>(m), prof.theta[m], prof.se[m], running});
    }
    emit_table(ctx, "dependence", {"m", "theta", "se", "Theta_partial"}, rows);

    json summary = {{"p", p},
                    {"reps", reps},
                    {"max_lag", M},
                    {"Theta", std::isfinite(acc.Theta) ? json(acc.Theta) : json("inf")},
                    {"Theta_se", acc.Theta_se},
                    {"partial", acc.partial},
                    {"tail", acc.tail},
                    {"decay_rate", acc.decay_rate},
                    {"decay_rate_se", acc.decay_rate_se},
                    {"non_summable", acc.non_summable},
                    {"spec_hash", processes::spec_hash(spec)}};
    if (cfg.has("gamma")) {
        const Node g = cfg.at("gamma");
        g.only({"alpha", "p_grid", "max_lag", "reps"});
        const auto grid = g.numbers("p_grid");
        const auto gd = dependence::gamma_diagnostic(spec, g.number("alpha"), grid, g.integer("max_lag", M),
                                                     g.integer("reps", 20'000),
                                                     rng::StreamKey(ctx.seed).child(1).value(), o);
        summary["gamma"] = {{"alpha", gd.alpha}, {"p_grid", gd.p_grid}, {"values", gd.values},
                            {"se", gd.se},       {"bounded", gd.bounded}};
    }
    ctx.out->write_json("dependence_summary.json", summary);
    *ctx.log << fmt::format("Theta^({}) = {} (non-summable: {})\n", p, acc.Theta, acc.non_summable ? "yes" : "no");
}

void cmd_bound_check(const Node& cfg, Context& ctx) {
    bounds::CurveSpec cs;
    cs.spec = read_spec(cfg);
    cs.n = cfg.integer("n", 256);
    cs.reps = cfg.integer("reps", 10'000);
    cs.workers = ctx.workers;
    const auto params = bound_params(cfg);
    const bool calibrate = cfg.boolean("calibrate", true);
    const auto r = bounds::check_domination(cs, params, calibrate, ctx.seed);

    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < r.curve.epsilons.size(); ++j) {
        const double eps = r.curve.epsilons[j];
        const double cal = calibrate ? bounds::fuk_nagaev_rhs(eps, cs.n, r.calibrated) : r.curve.bound[j];
        rows.push_back({eps, r.curve.empirical[j], r.curve.wilson[j].lo, r.curve.wilson[j].hi, r.curve.bound[j], cal});
    }
    emit_table(ctx, "bound_curve", {"eps", "empirical", "wilson_lo", "wilson_hi", "bound", "calibrated_bound"}, rows);
    ctx.out->write_json("bound_check.json", {{"n", cs.n},
                                             {"reps", cs.reps},
                                             {"dominated", r.dominated},
                                             {"calibrated", calibrate},
                                             {"calibration_factor", r.calibration},
                                             {"calibrated_dominated", r.calibrated_dominated},
                                             {"params", bound_params_json(params)},
                                             {"calibrated_params", bound_params_json(r.calibrated)}});
    *ctx.log << fmt::format("dominated: {}, calibration factor {:.6g}\n", r.dominated ? "yes" : "no",
                            r.calibration);
}

void cmd_rate_study(const Node& cfg, Context& ctx) {
    const auto spec = read_spec(cfg);
    const auto schedule = read_schedule(cfg.at("schedule"));
    const auto grid = cfg.integers("grid");
    maxstats::RateOptions o;
    o.workers = ctx.workers;
    o.max_cells = cfg.number("max_cells", o.max_cells);
    const auto r = maxstats::rate_study(spec, schedule, grid, cfg.integer("reps", 500), ctx.seed, o);
    std::vector<std::vector<double>> rows;
    for (const auto& g : r.grid) {
        rows.push_back({static_cast<double>(g.n), static_cast<double>(g.k_n), g.mean_stat, g.se, g.mean_root_n,
                        g.se_root_n});
    }
    emit_table(ctx, "rate_study", {"n", "k_n", "mean", "se", "mean_root_n", "se_root_n"}, rows);
    ctx.out->write_json("rate_study_fit.json",
                        {{"slope", r.slope}, {"slope_se", r.slope_se}, {"intercept", r.intercept}});
    *ctx.log << fmt::format("slope {:.4f} (se {:.4f})\n", r.slope, r.slope_se);
}

void cmd_test_maxcorr(const Node& cfg, Context& ctx) {
    const InputFrame f = read_input(cfg);
    maxcorr::RegressionData d{f.table.values.col(f.y), columns_of(f.table, f.others)};
    maxcorr::MaxCorrOptions o;
    o.bandwidth = cfg.integer("bandwidth", -1);
    o.sim = read_sim(cfg);
    o.intercept = cfg.boolean("intercept", false);
    const auto r = maxcorr::maxcorr_test(d, cfg.integer("kn"), read_level(cfg), o, ctx.seed);
    ctx.out->write_json("maxcorr_report.json", maxcorr_json(r));
    print_summary(*ctx.log, "residual max-correlation test", r.statistic, r.crit_value, r.p_value, r.reject,
                  fmt::format("lag {}", r.argmax_lag));
    *ctx.log << warnings_block(r.warnings);
}

void cmd_test_screening(const Node& cfg, Context& ctx) {
    const InputFrame f = read_input(cfg);
    if (f.others.empty()) throw DegenerateDataError("input has no covariate columns");
    std::vector<std::string> names;
    for (auto j : f.others) names.push_back(f.table.columns[static_cast<std::size_t>(j)]);
    screening::ScreeningOptions o;
    o.bandwidth = cfg.integer("bandwidth", -1);
    o.sim = read_sim(cfg);
    o.b = cfg.maybe_number("b");
    o.lambda = cfg.maybe_number("lambda");
    const auto r = screening::screening_test(Panel(columns_of(f.table, f.others)), f.table.values.col(f.y),
                                             read_level(cfg), o, ctx.seed);
    ctx.out->write_json("screening_report.json", screening_json(r, names));
    print_summary(*ctx.log, "marginal screening test", r.statistic, r.crit_value, r.p_value, r.reject,
                  names[static_cast<std::size_t>(r.argmax)]);
    *ctx.log << warnings_block(r.warnings);
}

void cmd_test_partial(const Node& cfg, Context& ctx) {
    const InputFrame f = read_input(cfg);
    std::vector<std::string> nuisance;
    if (cfg.has("nuisance_cols")) nuisance = cfg.strings("nuisance_cols");
    std::vector<Eigen::Index> xi, wi;
    std::vector<std::string> names;
    for (const auto& c : nuisance) {
        const Eigen::Index j = f.table.column(c);
        if (j < 0 || j == f.y) throw ConfigError(fmt::format("field 'nuisance_cols': no input column '{}'", c));
        xi.push_back(j);
    }
    for (auto j : f.others) {
        if (std::find(xi.begin(), xi.end(), j) == xi.end()) {
            wi.push_back(j);
            names.push_back(f.table.columns[static_cast<std::size_t>(j)]);
        }
    }
    if (wi.empty()) throw DegenerateDataError("input has no tested covariate columns");
    partial::PartialData d{f.table.values.col(f.y), columns_of(f.table, wi), columns_of(f.table, xi)};
    partial::PartialOptions o;
    o.bandwidth = cfg.integer("bandwidth", -1);
    o.sim = read_sim(cfg);
    o.b = cfg.maybe_number("b");
    const auto r = partial::partial_test(d, read_level(cfg), o, ctx.seed);
    ctx.out->write_json("partial_report.json", partial_json(r, names));
    print_summary(*ctx.log, "partialled-out max test", r.statistic, r.crit_value, r.p_value, r.reject,
                  names[static_cast<std::size_t>(r.argmax)]);
    *ctx.log << warnings_block(r.warnings);
}

TestSettings parse_test_settings(const Node& t) {
    t.only({"type", "kn", "level", "sims", "mode", "bandwidth"});
    TestSettings s;
    const std::string type = t.string("type");
    if (type == "maxcorr") {
        s.kind = TestKind::maxcorr;
        s.kn = t.integer("kn", 10);
    } else if (type == "screening") {
        s.kind = TestKind::screening;
    } else if (type == "partial") {
        s.kind = TestKind::partial;
    } else {
        throw ConfigError(fmt::format("field '{}' must be maxcorr, screening or partial", t.child_path("type")));
    }
    s.level = read_level(t);
    s.bandwidth = t.integer("bandwidth", -1);
    s.sim = read_sim(t);
    return s;
}

SizePowerRow size_power_block(const TestSettings& test, const Node& design, const std::string& name,
                              std::int64_t reps, rng::StreamKey root, std::size_t workers) {
    struct Outcome {
        bool reject = false;
        bool hit = false;
        bool warned = false;
    };
    std::vector<Outcome> out(static_cast<std::size_t>(reps));
    std::int64_t signal = -1;
    std::function<Outcome(rng::StreamKey, std::uint64_t)> one;
    switch (test.kind) {
        case TestKind::maxcorr: {
            const auto d = maxcorr_design(design);
            const maxcorr::MaxCorrOptions o{test.bandwidth, test.sim, false};
            one = [=](rng::StreamKey data_key, std::uint64_t sim_seed) {
                const auto r = maxcorr::maxcorr_test(maxcorr::simulate(d, data_key), test.kn, test.level, o, sim_seed);
                return Outcome{r.reject, false, !r.warnings.empty()};
            };
            break;
        }
        case TestKind::screening: {
            const auto d = screening_design(design);
            signal = d.signal_index;
            screening::ScreeningOptions o;
            o.bandwidth = test.bandwidth;
            o.sim = test.sim;
            one = [=](rng::StreamKey data_key, std::uint64_t sim_seed) {
                const auto s = screening::simulate(d, data_key);
                const auto r = screening::screening_test(Panel(s.x), s.y, test.level, o, sim_seed);
                return Outcome{r.reject, r.argmax == d.signal_index, !r.warnings.empty()};
            };
            break;
        }
        case TestKind::partial: {
            const auto d = partial_design(design);
            signal = d.signal_index;
            partial::PartialOptions o;
            o.bandwidth = test.bandwidth;
            o.sim = test.sim;
            one = [=](rng::StreamKey data_key, std::uint64_t sim_seed) {
                const auto r = partial::partial_test(partial::simulate(d, data_key), test.level, o, sim_seed);
                return Outcome{r.reject, r.argmax == d.signal_index, !r.warnings.empty()};
            };
            break;
        }
    }
    parallel_for(out.size(), workers, [&](std::size_t r) {
        const auto key = root.child(r);
        out[r] = one(key.child(0), key.child(1).value());
    });
    SizePowerRow row;
    row.block = name;
    row.reps = reps;
    std::int64_t hits = 0;
    for (const auto& o : out) {
        row.rejections += o.reject ? 1 : 0;
        hits += o.hit ? 1 : 0;
        row.warnings += o.warned ? 1 : 0;
    }
    row.rate = static_cast<double>(row.rejections) / static_cast<double>(reps);
    const auto w = stats::wilson(static_cast<std::size_t>(row.rejections), static_cast<std::size_t>(reps));
    row.wilson_lo = w.lo;
    row.wilson_hi = w.hi;
    row.argmax_hits = signal >= 0 ? hits : -1;
    return row;
}

void cmd_size_power(const Node& cfg, Context& ctx) {
    const auto test = parse_test_settings(cfg.at("test"));
    const std::int64_t reps = cfg.integer("reps", 2000);
    if (reps < 500) throw ConfigError("field 'reps' must be >= 500");
    const rng::StreamKey root(ctx.seed);
    std::vector<SizePowerRow> rows;
    rows.push_back(size_power_block(test, cfg.at("null"), "null", reps, root.child(0), ctx.workers));
    if (cfg.has("alt")) rows.push_back(size_power_block(test, cfg.at("alt"), "alt", reps, root.child(1), ctx.workers));

    std::string csv = "block,reps,rejections,rate,wilson_lo,wilson_hi,half_width,argmax_rate,warning_rate\n";
    json arr = json::array();
    for (const auto& r : rows) {
        const double hw = 0.5 * (r.wilson_hi - r.wilson_lo);
        const double ar = r.argmax_hits >= 0 ? static_cast<double>(r.argmax_hits) / static_cast<double>(r.reps)
                                             : std::numeric_limits<double>::quiet_NaN();
        const double wr = static_cast<double>(r.warnings) / static_cast<double>(r.reps);
        csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.block, r.reps, r.rejections, format_number(r.rate),
                           format_number(r.wilson_lo), format_number(r.wilson_hi), format_number(hw),
                           r.argmax_hits >= 0 ? format_number(ar) : std::string("NA"), format_number(wr));
        arr.push_back({{"block", r.block},
                       {"reps", r.reps},
                       {"rejections", r.rejections},
                       {"rate", r.rate},
                       {"wilson_lo", r.wilson_lo},
                       {"wilson_hi", r.wilson_hi},
                       {"half_width", hw},
                       {"argmax_rate", r.argmax_hits >= 0 ? json(ar) : json(nullptr)},
                       {"warning_rate", wr}});
        *ctx.log << fmt::format("{:<5} rejection {:.4f}  [{:.4f}, {:.4f}]\n", r.block, r.rate, r.wilson_lo,
                                r.wilson_hi);
    }
    if (ctx.format == "csv" || ctx.format == "both") ctx.out->write("size_power.csv", csv);
    if (ctx.format == "json" || ctx.format == "both") ctx.out->write_json("size_power.json", arr);
}

}  // namespace maxlln::cli
