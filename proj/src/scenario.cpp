#include "qhdlab/scenario.hpp"

#include "qhdlab/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qhdlab {

using nlohmann::json;

// ----- formatting and file plumbing -----------------------------------------

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string resolve_output_dir(const std::string& configured) {
    const char* env = std::getenv("QHDLAB_OUTPUT_DIR");
    std::string dir = (env && *env) ? env : configured;
    if (dir.empty()) dir = ".";
    std::filesystem::create_directories(dir);
    return dir;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ostringstream out;
    out << "t,E,I,K0,K1,B0,B1,mass,min_rho,res_energy,res_dI\n";
    for (const auto& r : traj.records) {
        out << fmt17(r.t) << ',' << fmt17(r.E) << ',' << fmt17(r.I) << ','
            << fmt17(r.K0) << ',' << fmt17(r.K1) << ',' << fmt17(r.B0) << ','
            << fmt17(r.B1) << ',' << fmt17(r.mass) << ',' << fmt17(r.min_rho) << ','
            << fmt17(r.res_energy) << ',' << fmt17(r.res_dI) << '\n';
    }
    write_text_atomic(path, out.str());
}

// ----- config parsing --------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValue {
    std::string section, key, value;
    int line;
};

std::vector<KeyValue> lex_ini(const std::string& text) {
    std::vector<KeyValue> out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        KeyValue kv;
        kv.section = section;
        kv.key = trim(line.substr(0, eq));
        kv.value = trim(line.substr(eq + 1));
        kv.line = lineno;
        if (kv.key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out.push_back(std::move(kv));
    }
    return out;
}

double parse_double(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(kv.line) + ": bad number for '" +
                          kv.key + "'");
    }
}

long parse_long(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        long v = std::stol(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(kv.line) + ": bad integer for '" +
                          kv.key + "'");
    }
}

bool parse_bool(const KeyValue& kv) {
    if (kv.value == "true" || kv.value == "1") return true;
    if (kv.value == "false" || kv.value == "0") return false;
    throw ConfigError("line " + std::to_string(kv.line) + ": bad boolean for '" +
                      kv.key + "'");
}

std::vector<PressureLaw::Term> parse_terms(const KeyValue& kv) {
    std::vector<PressureLaw::Term> terms;
    std::istringstream in(kv.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("line " + std::to_string(kv.line) +
                              ": law terms use coeff:exponent");
        try {
            terms.push_back(
                {std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(kv.line) + ": bad law term '" +
                              item + "'");
        }
    }
    if (terms.empty())
        throw ConfigError("line " + std::to_string(kv.line) + ": empty law term list");
    return terms;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig cfg;
    for (const KeyValue& kv : lex_ini(text)) {
        const std::string& s = kv.section;
        const std::string& k = kv.key;
        auto unknown = [&]() -> ConfigError {
            return ConfigError("line " + std::to_string(kv.line) + ": unknown key '" +
                               k + "' in section [" + s + "]");
        };
        if (s == "run") {
            if (k == "name") cfg.name = kv.value;
            else if (k == "solver") cfg.solver = kv.value;
            else if (k == "seed") cfg.seed = unsigned(parse_long(kv));
            else if (k == "refine") cfg.refine = parse_bool(kv);
            else throw unknown();
        } else if (s == "grid") {
            if (k == "n") cfg.n = std::size_t(parse_long(kv));
            else if (k == "x_lo") cfg.x_lo = parse_double(kv);
            else if (k == "x_hi") cfg.x_hi = parse_double(kv);
            else if (k == "periodic") cfg.periodic = parse_bool(kv);
            else throw unknown();
        } else if (s == "law") {
            if (k == "kind") cfg.law_kind = kv.value;
            else if (k == "gamma") cfg.gamma = parse_double(kv);
            else if (k == "terms") cfg.law_terms = parse_terms(kv);
            else throw unknown();
        } else if (s == "time") {
            if (k == "t_final") cfg.t_final = parse_double(kv);
            else if (k == "record_every") cfg.record_every = std::size_t(parse_long(kv));
            else throw unknown();
        } else if (s == "qhd") {
            if (k == "eps2") cfg.eps2 = parse_double(kv);
            else if (k == "sigma") cfg.sigma = parse_double(kv);
            else if (k == "dt") cfg.qhd_dt = parse_double(kv);
            else if (k == "vacuum_floor") cfg.vacuum_floor = parse_double(kv);
            else throw unknown();
        } else if (s == "nls") {
            if (k == "dt") cfg.nls_dt = parse_double(kv);
            else throw unknown();
        } else if (s == "boundary") {
            if (k == "kind") cfg.boundary = kv.value;
            else if (k == "u0") cfg.u0 = parse_double(kv);
            else if (k == "u1") cfg.u1 = parse_double(kv);
            else if (k == "c1") cfg.c1 = parse_double(kv);
            else if (k == "c2") cfg.c2 = parse_double(kv);
            else throw unknown();
        } else if (s == "initial") {
            if (k == "recipe") cfg.recipe = kv.value;
            else if (k == "rho0") cfg.rho0 = parse_double(kv);
            else if (k == "amp") cfg.amp = parse_double(kv);
            else if (k == "u_amp") cfg.u_amp = parse_double(kv);
            else if (k == "kmode") cfg.kmode = int(parse_long(kv));
            else if (k == "width") cfg.width = parse_double(kv);
            else throw unknown();
        } else if (s == "monitors") {
            if (k == "theorem2") cfg.mon_theorem2 = parse_bool(kv);
            else if (k == "theorem4") cfg.mon_theorem4 = parse_bool(kv);
            else if (k == "alpha") cfg.alpha = parse_double(kv);
            else if (k == "M") cfg.bigM = parse_double(kv);
            else if (k == "lambda") cfg.lambda = parse_double(kv);
            else if (k == "envelope_tol_scale") cfg.envelope_tol_scale = parse_double(kv);
            else throw unknown();
        } else if (s == "stationary") {
            if (k == "J") cfg.stat_J = parse_double(kv);
            else if (k == "K") cfg.stat_K = parse_double(kv);
            else if (k == "w0") cfg.stat_w0 = parse_double(kv);
            else if (k == "dw0") cfg.stat_dw0 = parse_double(kv);
            else if (k == "span") cfg.stat_span = parse_double(kv);
            else if (k == "dx") cfg.stat_dx = parse_double(kv);
            else throw unknown();
        } else if (s == "output") {
            if (k == "dir") cfg.out_dir = kv.value;
            else if (k == "prefix") cfg.prefix = kv.value;
            else throw unknown();
        } else {
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown section [" +
                              s + "]");
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::ostringstream o;
    o << "[run]\n";
    o << "name = " << cfg.name << "\n";
    o << "solver = " << cfg.solver << "\n";
    o << "seed = " << cfg.seed << "\n";
    o << "refine = " << (cfg.refine ? "true" : "false") << "\n";
    o << "[grid]\n";
    o << "n = " << cfg.n << "\n";
    o << "x_lo = " << fmt17(cfg.x_lo) << "\n";
    o << "x_hi = " << fmt17(cfg.x_hi) << "\n";
    o << "periodic = " << (cfg.periodic ? "true" : "false") << "\n";
    o << "[law]\n";
    o << "kind = " << cfg.law_kind << "\n";
    o << "gamma = " << fmt17(cfg.gamma) << "\n";
    if (!cfg.law_terms.empty()) {
        o << "terms = ";
        for (std::size_t i = 0; i < cfg.law_terms.size(); ++i) {
            if (i) o << ", ";
            o << fmt17(cfg.law_terms[i].coeff) << ":" << fmt17(cfg.law_terms[i].exponent);
        }
        o << "\n";
    }
    o << "[time]\n";
    o << "t_final = " << fmt17(cfg.t_final) << "\n";
    o << "record_every = " << cfg.record_every << "\n";
    o << "[qhd]\n";
    o << "eps2 = " << fmt17(cfg.eps2) << "\n";
    o << "sigma = " << fmt17(cfg.sigma) << "\n";
    if (cfg.qhd_dt > 0.0) o << "dt = " << fmt17(cfg.qhd_dt) << "\n";
    o << "vacuum_floor = " << fmt17(cfg.vacuum_floor) << "\n";
    o << "[nls]\n";
    o << "dt = " << fmt17(cfg.nls_dt) << "\n";
    o << "[boundary]\n";
    o << "kind = " << cfg.boundary << "\n";
    o << "u0 = " << fmt17(cfg.u0) << "\n";
    o << "u1 = " << fmt17(cfg.u1) << "\n";
    o << "c1 = " << fmt17(cfg.c1) << "\n";
    o << "c2 = " << fmt17(cfg.c2) << "\n";
    o << "[initial]\n";
    o << "recipe = " << cfg.recipe << "\n";
    o << "rho0 = " << fmt17(cfg.rho0) << "\n";
    o << "amp = " << fmt17(cfg.amp) << "\n";
    o << "u_amp = " << fmt17(cfg.u_amp) << "\n";
    o << "kmode = " << cfg.kmode << "\n";
    o << "width = " << fmt17(cfg.width) << "\n";
    o << "[monitors]\n";
    o << "theorem2 = " << (cfg.mon_theorem2 ? "true" : "false") << "\n";
    o << "theorem4 = " << (cfg.mon_theorem4 ? "true" : "false") << "\n";
    o << "alpha = " << fmt17(cfg.alpha) << "\n";
    o << "M = " << fmt17(cfg.bigM) << "\n";
    o << "lambda = " << fmt17(cfg.lambda) << "\n";
    o << "envelope_tol_scale = " << fmt17(cfg.envelope_tol_scale) << "\n";
    o << "[stationary]\n";
    o << "J = " << fmt17(cfg.stat_J) << "\n";
    o << "K = " << fmt17(cfg.stat_K) << "\n";
    o << "w0 = " << fmt17(cfg.stat_w0) << "\n";
    o << "dw0 = " << fmt17(cfg.stat_dw0) << "\n";
    o << "span = " << fmt17(cfg.stat_span) << "\n";
    o << "dx = " << fmt17(cfg.stat_dx) << "\n";
    o << "[output]\n";
    o << "dir = " << cfg.out_dir << "\n";
    o << "prefix = " << (cfg.prefix.empty() ? cfg.name : cfg.prefix) << "\n";
    return o.str();
}

PressureLaw law_from_config(const ScenarioConfig& cfg) {
    if (cfg.law_kind == "power") return PressureLaw::power(cfg.gamma);
    if (cfg.law_kind == "sum") {
        if (cfg.law_terms.empty())
            throw ConfigError("law kind 'sum' needs a 'terms' list");
        return PressureLaw::sum(cfg.law_terms);
    }
    if (cfg.law_kind == "zero") return PressureLaw::zero();
    throw ConfigError("unknown law kind '" + cfg.law_kind + "'");
}

BoundaryKind boundary_from_config(const ScenarioConfig& cfg) {
    if (cfg.boundary == "periodic") return PeriodicBc{};
    if (cfg.boundary == "dirichlet_velocity")
        return DirichletVelocityBc{cfg.u0, cfg.u1};
    if (cfg.boundary == "monitored") return MonitoredBc{cfg.c1, cfg.c2};
    throw ConfigError("unknown boundary kind '" + cfg.boundary + "'");
}

InitialData build_initial(const ScenarioConfig& cfg, const Grid1D& grid) {
    const double L = grid.length();
    auto xhat = [&](double x) { return (x - grid.x_lo) / L; };
    InitialData d;
    if (cfg.recipe == "constant") {
        d.rho = ScalarField(grid, cfg.rho0);
        d.u = ScalarField(grid, cfg.u_amp);
    } else if (cfg.recipe == "cosine") {
        const double kk = grid.periodic ? 2.0 * std::numbers::pi * cfg.kmode
                                        : std::numbers::pi * cfg.kmode;
        d.rho = ScalarField::sample(
            grid, [&](double x) { return cfg.rho0 + cfg.amp * std::cos(kk * xhat(x)); });
        d.u = ScalarField(grid, cfg.u_amp);
    } else if (cfg.recipe == "inward") {
        d.rho = ScalarField::sample(grid, [&](double x) {
            return cfg.rho0 + cfg.amp * std::cos(2.0 * std::numbers::pi * xhat(x));
        });
        d.u = ScalarField::sample(grid,
                                  [&](double x) { return cfg.u_amp * (xhat(x) - 0.5); });
    } else if (cfg.recipe == "gaussian") {
        const double xc = 0.5 * (grid.x_lo + grid.x_hi);
        d.rho = ScalarField::sample(grid, [&](double x) {
            double z = (x - xc) / cfg.width;
            return cfg.rho0 * std::exp(-z * z);
        });
        d.u = ScalarField(grid, 0.0);
    } else if (cfg.recipe == "plane_wave") {
        d.rho = ScalarField(grid, cfg.rho0);
        d.u = ScalarField(grid, cfg.u_amp);
    } else {
        throw ConfigError("unknown initial recipe '" + cfg.recipe + "'");
    }
    if (kernels::ops().min_v(d.rho.v.data(), d.rho.size()) <= cfg.vacuum_floor)
        throw ConfigError("initial density touches the vacuum floor");
    return d;
}

WaveState build_wave_initial(const ScenarioConfig& cfg, const Grid1D& grid) {
    const double eps = std::sqrt(cfg.eps2);
    InitialData d = build_initial(cfg, grid);
    FluidState f{0.0, d.rho, d.u};
    return madelung_inverse(f, eps, MadelungGauge{0, 0.0}, cfg.vacuum_floor);
}

// ----- scenario execution ----------------------------------------------------

namespace {

json window_json(const std::vector<TimeWindow>& ws) {
    json arr = json::array();
    for (const auto& w : ws) arr.push_back({w.t_begin, w.t_end});
    return arr;
}

json blowup_json(const BlowupReport& r) {
    json j;
    j["I0"] = r.I0;
    j["M0"] = r.M0;
    if (r.T_star) j["T_star"] = *r.T_star;
    j["hypothesis_windows"] = window_json(r.hypothesis_windows);
    j["hypothesis_ever"] = r.hypothesis_ever;
    j["bound_all_ok"] = r.bound_all_ok;
    j["tol"] = r.tol;
    if (r.vacuum_time) j["vacuum_time"] = *r.vacuum_time;
    return j;
}

json theorem4_json(const Theorem4Report& r) {
    json j;
    j["max_K_gap"] = r.max_K_gap;
    j["condition_windows"] = window_json(r.condition_windows);
    j["condition_ever"] = r.condition_ever;
    j["bound_all_ok"] = r.bound_all_ok;
    j["energy_threshold_held"] = r.energy_threshold_held;
    j["E0"] = r.E0;
    j["I0"] = r.I0;
    j["M0"] = r.M0;
    j["tol"] = r.tol;
    j["assumptions"] = {{"inf_P_over_g", r.law_report.inf_p_over_g},
                        {"sup_P_rho_minus_h", r.law_report.sup_p_rho_minus_h},
                        {"max_enthalpy_err", r.law_report.max_enthalpy_err}};
    return j;
}

const char* status_str(RunStatus s) {
    switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::VacuumEvent: return "vacuum";
    case RunStatus::Instability: return "instability";
    }
    return "unknown";
}

Grid1D refined_grid(const Grid1D& g) {
    return Grid1D(g.x_lo, g.x_hi, g.periodic ? 2 * g.n : 2 * g.n - 1, g.periodic);
}

double final_density_gap(const Trajectory& a, const Trajectory& b) {
    const auto& ra = a.states.back().rho.v;
    const auto& rb = b.states.back().rho.v;
    double gap = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i)
        gap = std::max(gap, std::abs(ra[i] - rb[i]));
    return gap;
}

struct SolverPair {
    Trajectory qhd;
    Trajectory nls;
    bool ok = false; // both completed to t_final
};

SolverPair run_pair(const ScenarioConfig& cfg, const Grid1D& grid,
                    const PressureLaw& law, const BoundaryKind& bc) {
    SolverPair pair;
    InitialData d = build_initial(cfg, grid);
    QhdConfig qc;
    qc.eps2 = cfg.eps2;
    qc.bc = bc;
    qc.sigma = cfg.sigma;
    if (cfg.qhd_dt > 0.0) qc.dt = cfg.qhd_dt;
    qc.vacuum_floor = cfg.vacuum_floor;
    qc.t_final = cfg.t_final;
    qc.record_every = cfg.record_every;
    pair.qhd = qhd_run(FluidState{0.0, d.rho, d.u}, law, qc);

    NlsConfig nc;
    nc.eps = std::sqrt(cfg.eps2);
    nc.bc = grid.periodic ? NlsBc::Periodic : NlsBc::Neumann;
    nc.dt = cfg.nls_dt;
    nc.t_final = cfg.t_final;
    nc.record_every = cfg.record_every;
    nc.vacuum_floor = cfg.vacuum_floor;
    pair.nls = nls_run(build_wave_initial(cfg, grid), law, nc).fluid;

    pair.ok = pair.qhd.status == RunStatus::Completed &&
              pair.nls.status == RunStatus::Completed;
    return pair;
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    if (cfg.solver != "qhd" && cfg.solver != "nls" && cfg.solver != "both")
        throw ConfigError("solver must be qhd, nls or both");
    if (cfg.periodic != (cfg.boundary == "periodic"))
        throw ConfigError("grid periodicity and boundary kind disagree");

    Grid1D grid(cfg.x_lo, cfg.x_hi, cfg.n, cfg.periodic);
    PressureLaw law = law_from_config(cfg);
    BoundaryKind bc = boundary_from_config(cfg);

    std::string dir = resolve_output_dir(cfg.out_dir);
    std::string prefix = cfg.prefix.empty() ? cfg.name : cfg.prefix;
    auto path_of = [&](const std::string& suffix) {
        return dir + "/" + prefix + suffix;
    };

    ScenarioResult res;
    json& summary = res.summary;
    summary["run"]["name"] = cfg.name;
    summary["run"]["solver"] = cfg.solver;
    summary["run"]["seed"] = cfg.seed;
    summary["run"]["simd"] = kernels::active_isa();
    summary["run"]["config_ini"] = serialize_scenario(cfg);
    summary["events"] = json::object();
    summary["hypotheses"] = json::object();
    summary["monitors"] = json::object();
    json failed = json::array();

    if (const auto* mon = std::get_if<MonitoredBc>(&bc)) {
        summary["run"]["monitored_sign_regime_ok"] = mon->sign_regime_ok();
    }

    const bool want_qhd = cfg.solver == "qhd" || cfg.solver == "both";
    const bool want_nls = cfg.solver == "nls" || cfg.solver == "both";

    Trajectory traj_qhd, traj_nls;
    if (cfg.solver == "both") {
        SolverPair pair = run_pair(cfg, grid, law, bc);
        traj_qhd = std::move(pair.qhd);
        traj_nls = std::move(pair.nls);
        if (pair.ok) {
            double gap = final_density_gap(traj_qhd, traj_nls);
            summary["monitors"]["xcheck"]["max_density_gap"] = gap;
            if (cfg.refine) {
                ScenarioConfig fine = cfg;
                Grid1D g2 = refined_grid(grid);
                fine.n = g2.n;
                if (cfg.qhd_dt > 0.0) fine.qhd_dt = cfg.qhd_dt / 4.0;
                fine.nls_dt = cfg.nls_dt / 2.0;
                SolverPair pair2 = run_pair(fine, g2, law, bc);
                if (pair2.ok) {
                    double gap2 = final_density_gap(pair2.qhd, pair2.nls);
                    summary["monitors"]["xcheck"]["max_density_gap_refined"] = gap2;
                    summary["monitors"]["xcheck"]["refinement_ratio"] =
                        gap2 > 0.0 ? gap / gap2 : qnan();
                }
            }
        } else {
            summary["monitors"]["xcheck"]["skipped"] = "a run ended early";
        }
    } else if (want_qhd) {
        InitialData d = build_initial(cfg, grid);
        QhdConfig qc;
        qc.eps2 = cfg.eps2;
        qc.bc = bc;
        qc.sigma = cfg.sigma;
        if (cfg.qhd_dt > 0.0) qc.dt = cfg.qhd_dt;
        qc.vacuum_floor = cfg.vacuum_floor;
        qc.t_final = cfg.t_final;
        qc.record_every = cfg.record_every;
        traj_qhd = qhd_run(FluidState{0.0, d.rho, d.u}, law, qc);
    } else {
        NlsConfig nc;
        nc.eps = std::sqrt(cfg.eps2);
        nc.bc = grid.periodic ? NlsBc::Periodic : NlsBc::Neumann;
        nc.dt = cfg.nls_dt;
        nc.t_final = cfg.t_final;
        nc.record_every = cfg.record_every;
        nc.vacuum_floor = cfg.vacuum_floor;
        traj_nls = nls_run(build_wave_initial(cfg, grid), law, nc).fluid;
    }

    if (want_qhd) {
        write_trajectory_csv(path_of("_qhd.csv"), traj_qhd);
        res.files_written.push_back(path_of("_qhd.csv"));
        summary["run"]["qhd_status"] = status_str(traj_qhd.status);
        summary["run"]["qhd_dt"] = traj_qhd.dt;
        if (traj_qhd.status == RunStatus::VacuumEvent) {
            summary["events"]["vacuum_time"] = traj_qhd.event_time;
            VacuumEventReport ev = blowup_detect(traj_qhd, cfg.vacuum_floor);
            summary["events"]["fraction_near_vacuum"] = ev.fraction_near_vacuum;
        }
        if (traj_qhd.status == RunStatus::Instability) {
            summary["events"]["instability_time"] = traj_qhd.event_time;
            summary["events"]["note"] = traj_qhd.note;
            res.exit_code = 3;
        }
    }
    if (want_nls) {
        write_trajectory_csv(path_of("_nls.csv"), traj_nls);
        res.files_written.push_back(path_of("_nls.csv"));
        summary["run"]["nls_status"] = status_str(traj_nls.status);
        if (traj_nls.status == RunStatus::VacuumEvent)
            summary["events"]["nls_vacuum_suspend_time"] = traj_nls.event_time;
        if (traj_nls.status == RunStatus::Instability) {
            summary["events"]["nls_instability_time"] = traj_nls.event_time;
            res.exit_code = 3;
        }
    }

    // monitors act on the hydrodynamic trajectory (QHD when available)
    const Trajectory& mtraj = want_qhd ? traj_qhd : traj_nls;
    if (!mtraj.records.empty()) {
        BlowupReport init = initial_data_report(mtraj.states[0].rho, mtraj.states[0].u,
                                                mtraj.weight);
        summary["monitors"]["initial_data"] = blowup_json(init);
        if (cfg.mon_theorem2) {
            BlowupReport rep = theorem2_monitor(mtraj, init, cfg.envelope_tol_scale);
            summary["monitors"]["theorem2"] = blowup_json(rep);
            summary["hypotheses"]["theorem2_windows"] =
                window_json(rep.hypothesis_windows);
            if (rep.hypothesis_ever && !rep.bound_all_ok)
                failed.push_back("theorem2_envelope");
        }
        if (cfg.mon_theorem4) {
            Theorem4Params p;
            p.alpha = cfg.alpha;
            p.bigM = cfg.bigM;
            p.u0 = cfg.u0;
            p.u1 = cfg.u1;
            p.lambda = cfg.lambda;
            try {
                Theorem4Report rep =
                    theorem4_monitor(mtraj, law, p, cfg.envelope_tol_scale);
                summary["monitors"]["theorem4"] = theorem4_json(rep);
                summary["hypotheses"]["theorem4_windows"] =
                    window_json(rep.condition_windows);
                if (rep.condition_ever && !rep.bound_all_ok)
                    failed.push_back("theorem4_envelope");
            } catch (const Error& e) {
                summary["monitors"]["theorem4"]["aborted"] = e.what();
                failed.push_back("theorem4_assumptions");
            }
        }
    }

    summary["failed_checks"] = failed;
    if (res.exit_code == 0 && !failed.empty()) res.exit_code = 4;

    write_text_atomic(path_of("_summary.json"), summary.dump(2) + "\n");
    res.files_written.push_back(path_of("_summary.json"));
    return res;
}

ScenarioResult predict_scenario(const ScenarioConfig& cfg) {
    Grid1D grid(cfg.x_lo, cfg.x_hi, cfg.n, cfg.periodic);
    InitialData d = build_initial(cfg, grid);
    BlowupReport rep = initial_data_report(d.rho, d.u, default_weight(grid));

    ScenarioResult res;
    res.summary["run"]["name"] = cfg.name;
    res.summary["run"]["config_ini"] = serialize_scenario(cfg);
    res.summary["monitors"]["initial_data"] = blowup_json(rep);

    std::string dir = resolve_output_dir(cfg.out_dir);
    std::string prefix = cfg.prefix.empty() ? cfg.name : cfg.prefix;
    std::string path = dir + "/" + prefix + "_predict.json";
    write_text_atomic(path, res.summary.dump(2) + "\n");
    res.files_written.push_back(path);
    return res;
}

ScenarioResult run_stationary_scenario(const ScenarioConfig& cfg) {
    StationaryParams p;
    p.J = cfg.stat_J;
    p.K = cfg.stat_K;
    p.law = law_from_config(cfg);
    p.w0 = cfg.stat_w0;
    p.dw0 = cfg.stat_dw0;
    p.span = cfg.stat_span;
    p.floor = cfg.vacuum_floor;
    StationaryProfile prof = stationary_shoot(p, cfg.stat_dx);

    ScenarioResult res;
    json& j = res.summary;
    j["run"]["name"] = cfg.name;
    j["run"]["config_ini"] = serialize_scenario(cfg);
    switch (prof.outcome) {
    case ShootOutcome::Completed: j["stationary"]["outcome"] = "completed"; break;
    case ShootOutcome::Vacuum: j["stationary"]["outcome"] = "vacuum"; break;
    case ShootOutcome::Overflow: j["stationary"]["outcome"] = "overflow"; break;
    }
    j["stationary"]["stop_x"] = prof.stop_x;
    j["stationary"]["J"] = p.J;
    j["stationary"]["K"] = p.K;

    std::string dir = resolve_output_dir(cfg.out_dir);
    std::string prefix = cfg.prefix.empty() ? cfg.name : cfg.prefix;

    std::ostringstream csv;
    csv << "x,w,dw\n";
    for (std::size_t i = 0; i < prof.n_valid; ++i)
        csv << fmt17(prof.grid.x(i)) << ',' << fmt17(prof.w[i]) << ','
            << fmt17(prof.dw[i]) << '\n';
    std::string csv_path = dir + "/" + prefix + "_profile.csv";
    write_text_atomic(csv_path, csv.str());
    res.files_written.push_back(csv_path);

    if (prof.complete()) {
        ScalarField r = stationary_residual(prof.w_field(), p);
        double worst = 0.0;
        for (double v : r.v) worst = std::max(worst, std::abs(v));
        j["stationary"]["max_residual"] = worst;
    }

    std::string sum_path = dir + "/" + prefix + "_summary.json";
    write_text_atomic(sum_path, j.dump(2) + "\n");
    res.files_written.push_back(sum_path);
    return res;
}

ScenarioResult run_weights_check(const std::string& domain, int dim, double c,
                                 const std::vector<double>& q, std::size_t samples,
                                 unsigned seed, const std::string& out_dir) {
    DomainDescriptor dom;
    if (domain == "ball") dom = DomainDescriptor::ball(dim);
    else if (domain == "cylinder") dom = DomainDescriptor::cylinder(dim);
    else if (domain == "box") dom = DomainDescriptor::box1d();
    else if (domain == "quadratic") {
        std::array<double, 3> qa{0.5, 0.5, 0.5};
        for (std::size_t i = 0; i < q.size() && i < 3; ++i) qa[i] = q[i];
        dom = DomainDescriptor::quadratic(dim, c, qa);
    } else {
        throw ConfigError("unknown weight domain '" + domain + "'");
    }

    WeightFunction w = make_weight(dom);
    WeightReport rep = verify_weight(w, samples, seed);

    ScenarioResult res;
    json& j = res.summary;
    j["domain"] = domain;
    j["dim"] = dom.dim;
    Point origin{domain == "cylinder" ? 0.0 : 0.0, 0.25, 0.25};
    if (domain == "ball" || domain == "quadratic") origin = Point{0.0, 0.0, 0.0};
    if (domain == "box") origin = Point{0.5, 0.0, 0.0};
    j["laplacian_a"] = -w.g(origin);
    if (domain == "quadratic") {
        double det = 1.0;
        for (int i = 0; i < dom.dim; ++i) det *= 2.0 * dom.quad_q[std::size_t(i)];
        j["det_hess_neg_a"] = det;
    }
    json checks = json::array();
    for (const auto& cchk : rep.checks) {
        checks.push_back({{"name", cchk.name},
                          {"value", cchk.value},
                          {"threshold", cchk.threshold},
                          {"pass", cchk.ok}});
    }
    j["checks"] = checks;
    j["all_ok"] = rep.all_ok;
    res.exit_code = rep.all_ok ? 0 : 4;

    std::string dir = resolve_output_dir(out_dir);
    std::string path = dir + "/weights_" + domain + "_d" + std::to_string(dom.dim) +
                       ".json";
    write_text_atomic(path, j.dump(2) + "\n");
    res.files_written.push_back(path);
    return res;
}

} // namespace qhdlab
