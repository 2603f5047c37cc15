#pragma once

#include "qhdlab/nls_solver.hpp"
#include "qhdlab/qhd_solver.hpp"
#include "qhdlab/stationary.hpp"
#include "qhdlab/weights.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qhdlab {

// Scenario description, parsed from an INI-style config (sections with
// key = value pairs, '#' comments). All physical parameters are plain
// nondimensional decimals.
struct ScenarioConfig {
    // [run]
    std::string name = "scenario";
    std::string solver = "qhd"; // qhd | nls | both
    unsigned seed = 12345;
    bool refine = false;        // re-run the cross-check at halved dx

    // [grid]
    std::size_t n = 256;
    double x_lo = 0.0, x_hi = 1.0;
    bool periodic = false;

    // [law]
    std::string law_kind = "power"; // power | sum | zero
    double gamma = 2.0;
    std::vector<PressureLaw::Term> law_terms;

    // [time]
    double t_final = 0.1;
    std::size_t record_every = 100;

    // [qhd]
    double eps2 = 2.0;
    double sigma = 0.1;
    double qhd_dt = 0.0; // 0 = sigma * dx^2 policy
    double vacuum_floor = kVacuumFloor;

    // [nls]
    double nls_dt = 1e-4;

    // [boundary]
    std::string boundary = "monitored"; // periodic | dirichlet_velocity | monitored
    double u0 = 0.0, u1 = 0.0;
    double c1 = 0.0, c2 = 0.0;

    // [initial]
    std::string recipe = "constant"; // constant|cosine|inward|gaussian|plane_wave
    double rho0 = 1.0;
    double amp = 0.0;
    double u_amp = 0.0;
    int kmode = 1;
    double width = 1.0; // gaussian width

    // [monitors]
    bool mon_theorem2 = false;
    bool mon_theorem4 = false;
    double alpha = 2.0;
    double bigM = 10.0;
    double lambda = 1.0;
    double envelope_tol_scale = 1e-3;

    // [stationary]
    double stat_J = 0.0, stat_K = 0.0;
    double stat_w0 = 1.0, stat_dw0 = 0.0;
    double stat_span = 1.0, stat_dx = 1e-3;

    // [output]
    std::string out_dir = ".";
    std::string prefix; // defaults to name
};

ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
std::string serialize_scenario(const ScenarioConfig& cfg); // canonical INI

PressureLaw law_from_config(const ScenarioConfig& cfg);
BoundaryKind boundary_from_config(const ScenarioConfig& cfg);

struct InitialData {
    ScalarField rho, u;
};
InitialData build_initial(const ScenarioConfig& cfg, const Grid1D& grid);
WaveState build_wave_initial(const ScenarioConfig& cfg, const Grid1D& grid);

struct ScenarioResult {
    nlohmann::json summary;
    int exit_code = 0; // 0 ok, 2 config, 3 instability, 4 monitor failure
    std::vector<std::string> files_written;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);
ScenarioResult predict_scenario(const ScenarioConfig& cfg);
ScenarioResult run_stationary_scenario(const ScenarioConfig& cfg);
ScenarioResult run_weights_check(const std::string& domain, int dim, double c,
                                 const std::vector<double>& q, std::size_t samples,
                                 unsigned seed, const std::string& out_dir);

struct SuiteCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};
// Built-in acceptance-property suites at pinned desk-scale parameters.
// Names: all | numerics | physics | identities | weights | stationary.
std::vector<SuiteCheck> verify_suite(const std::string& which);

// 17-significant-digit decimal formatting used by every emitted file.
std::string fmt17(double x);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_text_atomic(const std::string& path, const std::string& content);
std::string resolve_output_dir(const std::string& configured);

} // namespace qhdlab
