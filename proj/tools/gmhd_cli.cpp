// gmhd: command-line front end.
//
//   gmhd simulate      [--config f.json] [--lambda L --kappa K --bc B --n N --horizon T ...]
//   gmhd closed-form   --lambda L --u0 SPEC [--alpha A] [--points P]
//   gmhd tstar         --lambda L --u0 SPEC
//   gmhd verify        --scenario thm8.1 [overrides]
//   gmhd sweep         --scenario ID --lambdas a,b,.. --kappas c,d,.. [--pairs]
//   gmhd compare-euler [--u0 SPEC --b0 SPEC --U0 SPEC --horizon T]
//
// Exit codes: 0 success/pass, 1 assertion failure, 2 configuration or I/O error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <json.hpp>

#include "gmhd/closedform.hpp"
#include "gmhd/io.hpp"
#include "gmhd/reduced_ode.hpp"
#include "gmhd/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace gmhd;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kConfigVersion = 1;

struct RunConfig {
    std::string mode;
    std::string scenario;
    double lambda = 1.0;
    double kappa = -1.0;
    std::string bc = "dirichlet";
    std::size_t n = 512;
    double horizon = 1.0;
    double dt_max = 1e-3;
    double blowup_threshold = 1e6;
    double sample_interval = 1e-2;
    std::string dealias = "auto";
    std::string u0 = "quadratic";
    std::string b0 = "zero";
    std::string U0 = "quadratic";
    std::size_t labels = 65;
    std::optional<double> alpha0;
    std::vector<double> lambdas;
    std::vector<double> kappas;
    bool pairs = false;
    std::size_t points = 40;
    unsigned threads = 0;
};

// Raw command-line values; only those given override the config.
struct Flags {
    std::string config, out;
    std::string scenario, bc, dealias, u0, b0, U0;
    double lambda = 0, kappa = 0, horizon = 0, dt_max = 0, threshold = 0, sample = 0, alpha0 = 0;
    std::size_t n = 0, labels = 0, points = 0;
    std::vector<double> lambdas, kappas;
    bool pairs = false;
    unsigned threads = 0;
};

std::string dealias_name(DealiasMode m) {
    switch (m) {
        case DealiasMode::On: return "on";
        case DealiasMode::Off: return "off";
        case DealiasMode::Auto: return "auto";
    }
    return "auto";
}

DealiasMode parse_dealias(const std::string& s) {
    if (s == "on") return DealiasMode::On;
    if (s == "off") return DealiasMode::Off;
    if (s == "auto") return DealiasMode::Auto;
    throw ConfigFault("dealias must be on, off or auto");
}

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["config_version"] = kConfigVersion;
    j["mode"] = c.mode;
    if (!c.scenario.empty()) j["scenario"] = c.scenario;
    j["lambda"] = c.lambda;
    j["kappa"] = c.kappa;
    j["bc"] = c.bc;
    j["n"] = c.n;
    j["horizon"] = c.horizon;
    j["dt_max"] = c.dt_max;
    j["blowup_threshold"] = c.blowup_threshold;
    j["sample_interval"] = c.sample_interval;
    j["dealias"] = c.dealias;
    j["u0"] = c.u0;
    j["b0"] = c.b0;
    j["U0"] = c.U0;
    j["labels"] = c.labels;
    if (c.alpha0) j["alpha0"] = *c.alpha0;
    if (!c.lambdas.empty()) j["lambdas"] = c.lambdas;
    if (!c.kappas.empty()) j["kappas"] = c.kappas;
    j["pairs"] = c.pairs;
    j["points"] = c.points;
    return j;
}

void load_config(const std::string& path, RunConfig& c) {
    std::ifstream in(path);
    if (!in) throw ConfigFault("cannot read config " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigFault("malformed config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigFault("config must be a JSON object");
    if (!j.contains("config_version") || j["config_version"] != kConfigVersion) {
        throw ConfigFault("config_version must be 1");
    }
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const auto& v = it.value();
            if (k == "config_version" || k == "versions" || k == "verdicts" || k == "outputs") continue;
            if (k == "mode") {
                if (v.get<std::string>() != c.mode) {
                    throw ConfigFault("config is for mode '" + v.get<std::string>() + "'");
                }
            } else if (k == "scenario") c.scenario = v.get<std::string>();
            else if (k == "lambda") c.lambda = v.get<double>();
            else if (k == "kappa") c.kappa = v.get<double>();
            else if (k == "bc") c.bc = v.get<std::string>();
            else if (k == "n") c.n = v.get<std::size_t>();
            else if (k == "horizon") c.horizon = v.get<double>();
            else if (k == "dt_max") c.dt_max = v.get<double>();
            else if (k == "blowup_threshold") c.blowup_threshold = v.get<double>();
            else if (k == "sample_interval") c.sample_interval = v.get<double>();
            else if (k == "dealias") c.dealias = v.get<std::string>();
            else if (k == "u0") c.u0 = v.get<std::string>();
            else if (k == "b0") c.b0 = v.get<std::string>();
            else if (k == "U0") c.U0 = v.get<std::string>();
            else if (k == "labels") c.labels = v.get<std::size_t>();
            else if (k == "alpha0") c.alpha0 = v.get<double>();
            else if (k == "lambdas") c.lambdas = v.get<std::vector<double>>();
            else if (k == "kappas") c.kappas = v.get<std::vector<double>>();
            else if (k == "pairs") c.pairs = v.get<bool>();
            else if (k == "points") c.points = v.get<std::size_t>();
            else throw ConfigFault("unknown config key '" + k + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigFault(std::string("bad config value: ") + e.what());
    }
}

StepControl control_of(const RunConfig& c) {
    StepControl ctrl;
    ctrl.dt_max = c.dt_max;
    ctrl.blowup_threshold = c.blowup_threshold;
    ctrl.sample_interval = c.sample_interval;
    ctrl.dealias = parse_dealias(c.dealias);
    ctrl.validate();
    return ctrl;
}

Params params_of(const RunConfig& c) {
    Params p{c.lambda, c.kappa, parse_boundary_condition(c.bc)};
    p.validate();
    return p;
}

Scenario scenario_of(const RunConfig& c) {
    Scenario s = Scenario::defaults(parse_scenario_id(c.scenario));
    s.params = params_of(c);
    s.u0 = c.u0;
    s.b0 = c.b0;
    s.n = c.n;
    s.horizon = c.horizon;
    s.control = control_of(c);
    s.labels = c.labels;
    s.alpha0 = c.alpha0;
    return s;
}

RunConfig from_scenario(const std::string& mode, const Scenario& s) {
    RunConfig c;
    c.mode = mode;
    c.scenario = to_string(s.id);
    c.lambda = s.params.lambda;
    c.kappa = s.params.kappa;
    c.bc = to_string(s.params.bc);
    c.n = s.n;
    c.horizon = s.horizon;
    c.dt_max = s.control.dt_max;
    c.blowup_threshold = s.control.blowup_threshold;
    c.sample_interval = s.control.sample_interval;
    c.dealias = dealias_name(s.control.dealias);
    c.u0 = s.u0;
    c.b0 = s.b0;
    c.labels = s.labels;
    c.alpha0 = s.alpha0;
    return c;
}

// Per-mode defaults before the config file and flags are applied.
RunConfig defaults_for(const std::string& mode, const std::string& scenario) {
    if ((mode == "verify" || mode == "sweep") && !scenario.empty()) {
        return from_scenario(mode, Scenario::defaults(parse_scenario_id(scenario)));
    }
    RunConfig c;
    c.mode = mode;
    if (mode == "compare-euler") {
        c.lambda = c.kappa = 1.0;
        c.b0 = "bump2:0,0.01";
        c.horizon = 0.5;
    }
    return c;
}

void apply_flags(const CLI::App& sub, const Flags& f, RunConfig& c) {
    auto given = [&](const char* name) {
        const CLI::Option* o = sub.get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };
    if (given("--scenario")) c.scenario = f.scenario;
    if (given("--lambda")) c.lambda = f.lambda;
    if (given("--kappa")) c.kappa = f.kappa;
    if (given("--bc")) c.bc = f.bc;
    if (given("--n")) c.n = f.n;
    if (given("--horizon")) c.horizon = f.horizon;
    if (given("--dt-max")) c.dt_max = f.dt_max;
    if (given("--blowup-threshold")) c.blowup_threshold = f.threshold;
    if (given("--sample-interval")) c.sample_interval = f.sample;
    if (given("--dealias")) c.dealias = f.dealias;
    if (given("--u0")) c.u0 = f.u0;
    if (given("--b0")) c.b0 = f.b0;
    if (given("--U0")) c.U0 = f.U0;
    if (given("--labels")) c.labels = f.labels;
    if (given("--alpha")) c.alpha0 = f.alpha0;
    if (given("--lambdas")) c.lambdas = f.lambdas;
    if (given("--kappas")) c.kappas = f.kappas;
    if (given("--pairs")) c.pairs = f.pairs;
    if (given("--points")) c.points = f.points;
    if (given("--threads")) c.threads = f.threads;
}

fs::path output_dir(const Flags& f, const RunConfig& c) {
    if (!f.out.empty()) return f.out;
    const char* root = std::getenv("GMHD_OUT");
    fs::path base = root && *root ? fs::path(root) : fs::path("gmhd_out");
    std::string leaf = c.mode;
    if (!c.scenario.empty() && (c.mode == "verify" || c.mode == "sweep")) leaf += "-" + c.scenario;
    return base / leaf;
}

void write_manifest(const fs::path& dir, const RunConfig& c, const ordered_json& verdicts,
                    const std::vector<std::string>& outputs) {
    ordered_json j = config_json(c);
    j["versions"] = {{"gmhd", kVersion},
                     {"boost", BOOST_LIB_VERSION},
                     {"cli11", CLI11_VERSION},
                     {"compiler", __VERSION__}};
    j["verdicts"] = verdicts;
    j["outputs"] = outputs;
    write_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

std::string num(double v) { return format_double(v); }

// ---- modes --------------------------------------------------------------

int do_simulate(const RunConfig& c, const fs::path& dir) {
    const Params p = params_of(c);
    const StepControl ctrl = control_of(c);
    const GridSpec grid(c.n, p.bc);
    const Preset u0 = Preset::parse(c.u0);
    const Preset b0 = Preset::parse(c.b0);
    u0.validate(p.bc, "u0");
    b0.validate(p.bc, "b0");
    const FieldState init = FieldState::make(0.0, derivative(u0.on(grid)), b0.on(grid));
    std::vector<double> pinned;
    if (c.alpha0) pinned.push_back(*c.alpha0);
    const TrackedRun run =
        run_tracked(init, p, c.horizon, ctrl, TrajectorySet::uniform(p.bc, c.labels, pinned), 2);
    write_atomic(dir / "series.csv", series_csv(run.record));
    write_atomic(dir / "trajectories.csv", trajectories_csv(run));
    ordered_json v;
    v["run_verdict"] = to_string(run.record.verdict);
    v["t_end"] = run.final.t;
    v["t_blowup_estimate"] =
        run.record.t_blowup_estimate ? ordered_json(*run.record.t_blowup_estimate) : ordered_json();
    v["steps"] = run.record.steps;
    if (run.fault) v["fault"] = *run.fault;
    write_manifest(dir, c, v, {"series.csv", "trajectories.csv"});
    std::cout << "verdict " << to_string(run.record.verdict) << " t_end " << num(run.final.t);
    if (run.record.t_blowup_estimate) std::cout << " t_blowup_estimate " << num(*run.record.t_blowup_estimate);
    std::cout << "\n";
    return 0;
}

int do_tstar(const RunConfig& c, const fs::path& dir) {
    const ClosedFormContext ctx(c.lambda, Preset::parse(c.u0));
    const TstarResult r = tstar(ctx);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.value);
    if (r.kind == TstarKind::Finite) {
        std::cout << buf << "\n";
    } else {
        std::cout << to_string(r.kind) << "\n";
    }
    ordered_json v;
    v["kind"] = to_string(r.kind);
    v["t_star"] = std::isfinite(r.value) ? ordered_json(r.value) : ordered_json();
    v["tau_star"] = ctx.tau_star();
    v["partial"] = r.partial;
    v["ratio"] = r.ratio;
    write_manifest(dir, c, v, {});
    return 0;
}

int do_closed_form(const RunConfig& c, const fs::path& dir) {
    const ClosedFormContext ctx(c.lambda, Preset::parse(c.u0));
    const double a0 = c.alpha0.value_or(c.lambda > 0 ? ctx.u0().slope_max().alpha : ctx.u0().slope_min().alpha);
    std::ostringstream os;
    os << "# tau: auxiliary time, t: physical time, Lbar0/Lbar1: label integrals, jac: gamma_alpha at alpha0, "
          "ux: u_x along gamma(alpha0)\n";
    os << "tau,t,Lbar0,Lbar1,jac,ux\n";
    const std::size_t P = std::max<std::size_t>(c.points, 2);
    for (std::size_t k = 0; k < P; ++k) {
        // 1 - 2^(-s), s from 0 to 30, clusters toward tau*
        const double s = 30.0 * static_cast<double>(k) / static_cast<double>(P - 1);
        const double tau = (1.0 - std::pow(2.0, -s)) * ctx.tau_star();
        os << num(tau) << ',' << num(t_of_tau(tau, ctx)) << ',' << num(Lbar(0, tau, ctx)) << ','
           << num(Lbar(1, tau, ctx)) << ',' << num(jac_along(a0, tau, ctx)) << ','
           << num(ux_along(a0, tau, ctx)) << '\n';
    }
    write_atomic(dir / "closed_form.csv", os.str());
    const TstarResult r = tstar(ctx);
    ordered_json v;
    v["alpha0"] = a0;
    v["tau_star"] = ctx.tau_star();
    v["t_star_kind"] = to_string(r.kind);
    v["t_star"] = std::isfinite(r.value) ? ordered_json(r.value) : ordered_json();
    write_manifest(dir, c, v, {"closed_form.csv"});
    std::cout << "tau_star " << num(ctx.tau_star()) << " t_star " << to_string(r.kind) << " " << num(r.value)
              << "\n";
    return 0;
}

int do_verify(const RunConfig& c, const fs::path& dir) {
    if (c.scenario.empty()) throw ConfigFault("verify needs --scenario");
    const Report r = run_scenario(scenario_of(c));
    write_atomic(dir / "report.json", r.to_json() + "\n");
    std::vector<std::string> outs{"report.json"};
    if (r.run) {
        write_atomic(dir / "series.csv", series_csv(r.run->record));
        outs.push_back("series.csv");
        if (!r.run->snapshots.empty()) {
            write_atomic(dir / "trajectories.csv", trajectories_csv(*r.run));
            outs.push_back("trajectories.csv");
        }
    }
    ordered_json v;
    v["status"] = to_string(r.status);
    v["run_verdict"] = r.run_verdict;
    write_manifest(dir, c, v, outs);
    std::cout << to_string(r.scenario.id) << " " << to_string(r.status);
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
    for (const Assertion& a : r.assertions) {
        std::cout << "  " << (a.pass ? "ok   " : "FAIL ") << a.name << " " << num(a.measured)
                  << " <= " << num(a.tolerance) << "\n";
    }
    switch (r.status) {
        case ReportStatus::Pass: return 0;
        case ReportStatus::Fail:
        case ReportStatus::HypothesesUnmet: return 1;
        case ReportStatus::Error: return 2;
    }
    return 2;
}

int do_sweep(const RunConfig& c, const fs::path& dir) {
    if (c.scenario.empty()) throw ConfigFault("sweep needs --scenario");
    std::vector<double> ls = c.lambdas.empty() ? std::vector<double>{c.lambda} : c.lambdas;
    std::vector<double> ks = c.kappas.empty() ? std::vector<double>{c.kappa} : c.kappas;
    std::vector<std::pair<double, double>> grid;
    if (c.pairs) {
        if (ls.size() != ks.size()) throw ConfigFault("--pairs needs equally many lambdas and kappas");
        for (std::size_t i = 0; i < ls.size(); ++i) grid.emplace_back(ls[i], ks[i]);
    } else {
        for (double l : ls) {
            for (double k : ks) grid.emplace_back(l, k);
        }
    }
    for (const auto& [l, k] : grid) {
        if (!std::isfinite(l) || !std::isfinite(k)) throw ConfigFault("sweep grid must be finite");
    }
    const auto rows = sweep(scenario_of(c), grid, c.threads);
    write_atomic(dir / "sweep.csv", sweep_csv(rows));
    ordered_json v = ordered_json::array();
    for (const SweepRow& r : rows) {
        v.push_back({{"lambda", r.lambda}, {"kappa", r.kappa}, {"status", r.status}, {"run_verdict", r.run_verdict}});
        std::cout << num(r.lambda) << " " << num(r.kappa) << " " << r.status << " " << r.run_verdict << "\n";
    }
    write_manifest(dir, c, v, {"sweep.csv"});
    return 0;
}

int do_compare(const RunConfig& c, const fs::path& dir) {
    ComparisonSetup setup{Preset::parse(c.u0), Preset::parse(c.b0), Preset::parse(c.U0), c.n, c.horizon,
                          control_of(c)};
    const ComparisonResult r = comparison_scenario(setup);
    std::ostringstream os;
    os << "# t: time, ux0: u_x(0,t), Ux0: U_x(0,t) of the b = 0 companion, sigma: ux0 - Ux0, "
          "margin: |U_x|^2 - |u_x|^2 + |b_x|^2\n";
    os << "t,ux0,Ux0,sigma,margin\n";
    for (const ComparisonPoint& p : r.series) {
        os << num(p.t) << ',' << num(p.ux0) << ',' << num(p.Ux0) << ',' << num(p.sigma) << ','
           << num(p.margin) << '\n';
    }
    write_atomic(dir / "comparison.csv", os.str());
    ordered_json v;
    v["verdict"] = to_string(r.verdict);
    v["detail"] = r.detail;
    v["first_violation_t"] = r.first_violation_t ? ordered_json(*r.first_violation_t) : ordered_json();
    v["min_sigma"] = r.series.empty() ? ordered_json() : ordered_json(r.min_sigma);
    v["t_end"] = r.t_end;
    write_manifest(dir, c, v, {"comparison.csv"});
    std::cout << to_string(r.verdict);
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << " t_end " << num(r.t_end) << "\n";
    return r.verdict == ComparisonVerdict::Held ? 0 : 1;
}

void add_common(CLI::App* s, Flags& f) {
    s->add_option("--config", f.config, "JSON config file (config_version 1)");
    s->add_option("--out", f.out, "output directory");
    s->add_option("--lambda", f.lambda);
    s->add_option("--kappa", f.kappa);
    s->add_option("--bc", f.bc, "dirichlet or periodic");
    s->add_option("--n", f.n, "grid size");
    s->add_option("--horizon", f.horizon);
    s->add_option("--dt-max", f.dt_max);
    s->add_option("--blowup-threshold", f.threshold);
    s->add_option("--sample-interval", f.sample);
    s->add_option("--dealias", f.dealias, "on, off or auto");
    s->add_option("--u0", f.u0, "initial velocity preset");
    s->add_option("--b0", f.b0, "initial magnetic preset");
    s->add_option("--labels", f.labels, "number of uniform trajectory labels");
    s->add_option("--alpha", f.alpha0, "label of interest");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gmhd: numerical lab for the generalized 1-D MHD system"};
    app.require_subcommand(1);
    Flags f;
    const std::pair<const char*, const char*> modes[] = {
        {"simulate", "run the PDE with tracked trajectories"},
        {"closed-form", "evaluate the kappa = -lambda solution on a tau grid"},
        {"tstar", "print the blowup time t* of the kappa = -lambda solution"},
        {"verify", "run one theorem scenario and check it"},
        {"sweep", "scenario hypotheses and run verdicts over (lambda, kappa)"},
        {"compare-euler", "PDE vs Euler companion at the origin"},
    };
    for (const auto& [m, help] : modes) {
        CLI::App* s = app.add_subcommand(m, help);
        add_common(s, f);
        const std::string mode = m;
        if (mode == "verify" || mode == "sweep") s->add_option("--scenario", f.scenario);
        if (mode == "sweep") {
            s->add_option("--lambdas", f.lambdas)->delimiter(',');
            s->add_option("--kappas", f.kappas)->delimiter(',');
            s->add_flag("--pairs", f.pairs, "zip lambdas and kappas instead of the product");
            s->add_option("--threads", f.threads);
        }
        if (mode == "compare-euler") s->add_option("--U0", f.U0, "companion velocity preset");
        if (mode == "closed-form") s->add_option("--points", f.points);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const CLI::App* sub = app.get_subcommands().front();
    const std::string mode = sub->get_name();
    try {
        std::string scenario = f.scenario;
        if (scenario.empty() && !f.config.empty()) {
            std::ifstream in(f.config);
            try {
                const auto j = ordered_json::parse(in);
                if (j.contains("scenario")) scenario = j["scenario"].get<std::string>();
            } catch (const std::exception&) {
                // reported by load_config
            }
        }
        RunConfig c = defaults_for(mode, scenario);
        if (!f.config.empty()) load_config(f.config, c);
        apply_flags(*sub, f, c);
        // these modes are defined on kappa = -lambda only
        if (mode == "tstar" || mode == "closed-form") c.kappa = -c.lambda;
        const fs::path dir = output_dir(f, c);
        if (mode == "simulate") return do_simulate(c, dir);
        if (mode == "tstar") return do_tstar(c, dir);
        if (mode == "closed-form") return do_closed_form(c, dir);
        if (mode == "verify") return do_verify(c, dir);
        if (mode == "sweep") return do_sweep(c, dir);
        return do_compare(c, dir);
    } catch (const std::exception& e) {
        std::cerr << "gmhd " << mode << ": " << e.what() << "\n";
        return 2;
    }
}
