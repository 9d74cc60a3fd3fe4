// crwburgers - simulation and verification toolkit for correlated-random-walk
// diffusion/Burgers chains and their max-plus traffic automata.
//
// Subcommands: simulate | diagram | verify | classify.
// Exit codes: 0 ok, 1 verification failure, 2 config error, 3 invariant
// violation, 4 insufficient data.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crwb/automata.hpp"
#include "crwb/io.hpp"
#include "crwb/rng.hpp"
#include "crwb/traffic.hpp"
#include "crwb/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitData = 4;

int g_exit_code = kExitOk;

json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw crwb::ConfigError("cannot read config file " + std::string(argv[i + 1]));
            json cfg;
            in >> cfg;
            if (!cfg.is_object()) throw crwb::ConfigError("config must be a JSON object");
            return cfg;
        }
    }
    return json::object();
}

template <typename T>
void apply_default(const json& cfg, const std::string& key, T& value) {
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        out.push_back(std::stod(token));
    }
    if (out.empty()) throw crwb::ConfigError("empty value list: '" + text + "'");
    return out;
}

// Field spec: "random" | "const:<v>" | "<v0>,<v1>,..." | "@<file>"
std::vector<double> resolve_field(const std::string& spec, int n, double cap,
                                  crwb::SeededRng& rng) {
    if (spec == "random") {
        std::vector<double> v(n);
        for (int j = 0; j < n; ++j)
            v[j] = static_cast<double>(rng.uniform_int(0, static_cast<int>(cap)));
        return v;
    }
    if (spec.rfind("const:", 0) == 0) return std::vector<double>(n, std::stod(spec.substr(6)));
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw crwb::ConfigError("cannot read field file " + spec.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        for (char& ch : text)
            if (ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t') ch = ',';
        return parse_value_list(text);
    }
    return parse_value_list(spec);
}

struct SiteOverride {
    int site;
    double value;
};

std::vector<SiteOverride> parse_overrides(const std::vector<std::string>& specs) {
    std::vector<SiteOverride> out;
    for (const std::string& s : specs) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw crwb::ConfigError("expected <site>=<value>, got '" + s + "'");
        out.push_back({std::stoi(s.substr(0, eq)), std::stod(s.substr(eq + 1))});
    }
    return out;
}

bool format_selected(const std::vector<std::string>& formats, const std::string& name) {
    if (formats.empty()) return true;
    return std::find(formats.begin(), formats.end(), name) != formats.end();
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    int n = 30;
    double capacity = 1.0;
    int steps = 29;
    std::uint64_t seed = 1;
    std::string u0_spec = "random";
    std::string vt0_spec;  // default const:<L>
    std::string vt_prev_spec = "const:0";
    std::string out_dir = "out";
    std::vector<std::string> formats;
    std::vector<std::string> u0_sets, vt0_sets;
};

void run_simulate(const SimulateOpts& o) {
    if (o.n < 1) throw crwb::ConfigError("need at least one site");
    if (o.steps < 0) throw crwb::ConfigError("steps must be >= 0");
    const std::string vt0_spec =
        o.vt0_spec.empty() ? "const:" + crwb::io::format_double(o.capacity) : o.vt0_spec;
    for (const std::string& f : o.formats)
        if (f != "csv" && f != "pgm" && f != "json")
            throw crwb::ConfigError("unknown format '" + f + "'");

    crwb::SeededRng rng(o.seed);
    std::vector<double> u0 = resolve_field(o.u0_spec, o.n, o.capacity, rng);
    std::vector<double> vt0 = resolve_field(vt0_spec, o.n, o.capacity, rng);
    std::vector<double> vt_prev = resolve_field(o.vt_prev_spec, o.n, o.capacity, rng);
    if (static_cast<int>(u0.size()) != o.n || static_cast<int>(vt0.size()) != o.n ||
        static_cast<int>(vt_prev.size()) != o.n)
        throw crwb::ConfigError("field length does not match --n " + std::to_string(o.n));
    for (const SiteOverride& ov : parse_overrides(o.u0_sets)) {
        if (ov.site < 0 || ov.site >= o.n) throw crwb::ConfigError("override site out of range");
        u0[ov.site] = ov.value;
    }
    for (const SiteOverride& ov : parse_overrides(o.vt0_sets)) {
        if (ov.site < 0 || ov.site >= o.n) throw crwb::ConfigError("override site out of range");
        vt0[ov.site] = ov.value;
    }

    const crwb::UdBurgersState state(crwb::PeriodicField<double>(u0),
                                     crwb::PeriodicField<double>(vt0),
                                     crwb::PeriodicField<double>(vt_prev), o.capacity);
    const crwb::Trajectory traj = crwb::run(state, o.steps);

    json meta;
    meta["command"] = "simulate";
    meta["n"] = o.n;
    meta["capacity"] = o.capacity;
    meta["steps"] = o.steps;
    meta["seed"] = o.seed;
    meta["u0"] = u0;
    meta["vt0"] = vt0;
    meta["vt_prev"] = vt_prev;
    meta["i0"] = state.initial_bound().values();
    meta["regime"] = state.strict_regime() ? "strict" : "relaxed";
    meta["integral"] = state.integral();
    meta["initial_density"] = crwb::density(state.occupancy(), o.capacity);

    // build everything first, then write, so an error leaves no files behind
    std::map<fs::path, std::string> artifacts;
    const fs::path dir(o.out_dir);
    if (format_selected(o.formats, "csv")) {
        artifacts[dir / "u.csv"] = crwb::io::trajectory_csv(traj.occupancy);
        artifacts[dir / "vt.csv"] = crwb::io::trajectory_csv(traj.inflow_limit);
        artifacts[dir / "x.csv"] = crwb::io::inflow_csv(traj);
        artifacts[dir / "diagnostics.csv"] = crwb::io::diagnostics_csv(traj);
    }
    if (format_selected(o.formats, "pgm")) {
        artifacts[dir / "u.pgm"] = crwb::io::pgm_raster(traj.occupancy, o.capacity);
        artifacts[dir / "vt.pgm"] = crwb::io::pgm_raster(traj.inflow_limit, o.capacity);
    }
    if (format_selected(o.formats, "json")) {
        json files = json::array();
        for (const auto& [path, content] : artifacts) files.push_back(path.filename().string());
        files.push_back("meta.json");
        meta["files"] = files;
        artifacts[dir / "meta.json"] = meta.dump(2) + "\n";
    }
    for (const auto& [path, content] : artifacts) crwb::io::write_file(path, content);
    std::cout << "wrote " << artifacts.size() << " files to " << dir.string() << "\n";
}

void setup_simulate(const json& cfg, CLI::App* sub) {
    auto o = std::make_shared<SimulateOpts>();
    apply_default(cfg, "n", o->n);
    apply_default(cfg, "capacity", o->capacity);
    apply_default(cfg, "steps", o->steps);
    apply_default(cfg, "seed", o->seed);
    apply_default(cfg, "u0", o->u0_spec);
    apply_default(cfg, "vt0", o->vt0_spec);
    apply_default(cfg, "vt-prev", o->vt_prev_spec);
    apply_default(cfg, "out", o->out_dir);

    sub->add_option("--n", o->n, "number of sites");
    sub->add_option("--capacity,-L", o->capacity, "per-site capacity L");
    sub->add_option("--steps", o->steps, "number of time steps");
    sub->add_option("--seed", o->seed, "random seed");
    sub->add_option("--u0", o->u0_spec, "initial occupancy: random | const:<v> | list | @file");
    sub->add_option("--vt0", o->vt0_spec, "initial inflow limits (default const:<L>)");
    sub->add_option("--vt-prev", o->vt_prev_spec, "inflow limits at step -1");
    sub->add_option("--u0-set", o->u0_sets, "override one occupancy entry, <site>=<value>");
    sub->add_option("--vt0-set", o->vt0_sets, "override one inflow limit, <site>=<value>");
    sub->add_option("--out,-o", o->out_dir, "output directory")->envname("CRWB_OUT");
    sub->add_option("--format", o->formats, "subset of csv,pgm,json (default: all)")
        ->delimiter(',');
    sub->callback([o]() { run_simulate(*o); });
}

// ----------------------------------------------------------------- diagram

struct DiagramOpts {
    crwb::DiagramConfig dc;
    std::string mode = "controlled";
    std::string out_dir = "out";
    double tol = 0.02, bin_width = 0.02;
};

void run_diagram(const DiagramOpts& o) {
    crwb::DiagramConfig dc = o.dc;
    if (o.mode == "controlled")
        dc.mode = crwb::DiagramConfig::Mode::ControlledDensity;
    else if (o.mode == "scatter")
        dc.mode = crwb::DiagramConfig::Mode::Scatter;
    else
        throw crwb::ConfigError("mode must be 'controlled' or 'scatter'");

    const std::vector<crwb::DiagramPoint> points = crwb::fundamental_diagram(dc);
    const crwb::TransitionEstimate est =
        crwb::estimate_transitions(points, dc.capacity, dc.vt_min, o.tol, o.bin_width);

    json meta;
    meta["command"] = "diagram";
    meta["n"] = dc.sites;
    meta["capacity"] = dc.capacity;
    meta["mode"] = o.mode;
    meta["vt_min"] = dc.vt_min;
    meta["seed"] = dc.seed;
    meta["fixed_vt0"] = dc.fixed_vt0;
    meta["first_measured"] = dc.resolved_first(dc.sites);
    meta["last_measured"] = dc.resolved_last(dc.sites);
    meta["points"] = points.size();

    const fs::path dir(o.out_dir);
    std::map<fs::path, std::string> artifacts;
    artifacts[dir / "diagram.csv"] = crwb::io::diagram_csv(points);
    artifacts[dir / "diagram.svg"] = crwb::io::diagram_svg(points, dc.capacity, dc.vt_min);
    artifacts[dir / "transitions.json"] = crwb::io::transition_estimate_json(est);
    artifacts[dir / "meta.json"] = meta.dump(2) + "\n";
    for (const auto& [path, content] : artifacts) crwb::io::write_file(path, content);
    std::cout << "wrote " << artifacts.size() << " files to " << dir.string() << "\n";
}

void setup_diagram(const json& cfg, CLI::App* sub) {
    auto o = std::make_shared<DiagramOpts>();
    apply_default(cfg, "n", o->dc.sites);
    apply_default(cfg, "capacity", o->dc.capacity);
    apply_default(cfg, "mode", o->mode);
    apply_default(cfg, "samples-per-density", o->dc.samples_per_density);
    apply_default(cfg, "samples", o->dc.total_samples);
    apply_default(cfg, "grid-step", o->dc.grid_step);
    apply_default(cfg, "vt-min", o->dc.vt_min);
    apply_default(cfg, "seed", o->dc.seed);
    apply_default(cfg, "out", o->out_dir);

    sub->add_option("--n", o->dc.sites, "number of sites");
    sub->add_option("--capacity,-L", o->dc.capacity, "per-site capacity L (integer)");
    sub->add_option("--mode", o->mode, "controlled | scatter");
    sub->add_option("--samples-per-density", o->dc.samples_per_density,
                    "samples per grid density (controlled mode)");
    sub->add_option("--samples", o->dc.total_samples, "total samples (scatter mode)");
    sub->add_option("--grid-step", o->dc.grid_step, "density grid step (controlled mode)");
    sub->add_option("--vt-min", o->dc.vt_min, "lower bound of the inflow-limit draws");
    sub->add_option("--seed", o->dc.seed, "random seed");
    sub->add_flag("--fixed-vt0", o->dc.fixed_vt0, "share one inflow-limit draw across samples");
    sub->add_option("--first-measured", o->dc.first_measured, "first measured step (0 = auto)");
    sub->add_option("--last-measured", o->dc.last_measured, "last measured step (0 = auto)");
    sub->add_option("--tol", o->tol, "plateau tolerance for the transition estimate");
    sub->add_option("--bin-width", o->bin_width, "density bin width for the transition estimate");
    sub->add_option("--out,-o", o->out_dir, "output directory")->envname("CRWB_OUT");
    sub->callback([o]() { run_diagram(*o); });
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
    std::string suite = "all";
    std::string out_path;
    crwb::verify::Options opt;
};

void run_verify(const VerifyOpts& o) {
    std::vector<std::string> selected;
    if (o.suite == "all")
        selected = crwb::verify::all_suites();
    else {
        const auto& names = crwb::verify::all_suites();
        if (std::find(names.begin(), names.end(), o.suite) == names.end())
            throw crwb::ConfigError("unknown suite '" + o.suite + "'");
        selected.push_back(o.suite);
    }

    json report;
    report["seed"] = o.opt.seed;
    report["suites"] = json::array();
    bool all_passed = true;
    for (const std::string& name : selected) {
        const crwb::verify::SuiteResult r = crwb::verify::run_suite(name, o.opt);
        all_passed = all_passed && r.passed;
        std::cout << (r.passed ? "[pass] " : "[FAIL] ") << r.name << " (" << r.checks
                  << " checks";
        if (r.failures > 0) std::cout << ", " << r.failures << " failures; first: " << r.detail;
        std::cout << ")\n";
        report["suites"].push_back({{"name", r.name},
                                    {"passed", r.passed},
                                    {"checks", r.checks},
                                    {"failures", r.failures},
                                    {"detail", r.detail}});
    }
    report["all_passed"] = all_passed;
    if (!o.out_path.empty()) crwb::io::write_file(o.out_path, report.dump(2) + "\n");
    g_exit_code = all_passed ? kExitOk : kExitVerifyFailed;
}

void setup_verify(const json& cfg, CLI::App* sub) {
    auto o = std::make_shared<VerifyOpts>();
    apply_default(cfg, "suite", o->suite);
    apply_default(cfg, "seed", o->opt.seed);
    apply_default(cfg, "trials", o->opt.trials);

    sub->add_option("--suite", o->suite,
                    "cole-hopf | ud-limit | theorems | table1 | rule184 | conservation | all");
    sub->add_option("--seed", o->opt.seed, "random seed for generated instances");
    sub->add_option("--trials", o->opt.trials, "override per-suite trial counts");
    sub->add_option("--out,-o", o->out_path, "write the JSON report here")->envname("CRWB_OUT");
    sub->callback([o]() { run_verify(*o); });
}

// ---------------------------------------------------------------- classify

void setup_classify(CLI::App* sub) {
    auto values = std::make_shared<std::vector<int>>();
    sub->add_option("values", *values, "U_{j-1} U_j U_{j+1} Vt_j Vt_{j+1}, each 0 or 1")
        ->expected(5);
    sub->callback([values]() {
        const auto& v = *values;
        const crwb::CaseOutcome out = crwb::classify_outcome(v[0], v[1], v[2], v[3], v[4]);
        int row_no = 0;
        for (const crwb::NeighbourhoodRow& row : crwb::neighbourhood_table())
            if (row.u_m1 == v[0] && row.u == v[1] && row.u_p1 == v[2] && row.vt == v[3] &&
                row.vt_p1 == v[4])
                row_no = row.no;
        std::cout << "case: " << crwb::to_string(out.label) << "\n"
                  << "X_j: " << out.inflow_in << "\n"
                  << "X_j+1: " << out.inflow_out << "\n"
                  << "U_next: " << out.u_next << "\n"
                  << "table_row: " << row_no << "\n";
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlated-random-walk Burgers chain and traffic automaton toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    json cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    setup_simulate(cfg, app.add_subcommand("simulate", "run a traffic automaton trajectory"));
    setup_diagram(cfg, app.add_subcommand("diagram", "sweep a fundamental diagram"));
    setup_verify(cfg, app.add_subcommand("verify", "run property suites"));
    setup_classify(app.add_subcommand("classify", "classify a binary neighbourhood"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
        app.exit(e);
        return kExitConfig;
    } catch (const crwb::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const crwb::InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return kExitData;
    } catch (const crwb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return g_exit_code;
}
