#pragma once

#include "qhdlab/physics.hpp"

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qhdlab {

inline double qnan() { return std::numeric_limits<double>::quiet_NaN(); }

// Per-snapshot diagnostics. E is the total energy (kinetic + enthalpy
// primitive + quantum), I the weighted-density observable, K the iso-energy
// field at the endpoints, B the boundary momentum-flux indicator at the
// endpoints. res_energy / res_dI are the two balance-law residuals, filled
// in after a run completes. Fields that need a division by sqrt(rho) are
// NaN while the density sits at or below the vacuum floor.
struct DiagnosticsRecord {
    double t = 0.0;
    double E = qnan();
    double I = qnan();
    double K0 = qnan(), K1 = qnan();
    double B0 = qnan(), B1 = qnan();
    double mass = qnan();
    double min_rho = qnan();
    double res_energy = qnan();
    double res_dI = qnan();
};

enum class RunStatus { Completed, VacuumEvent, Instability };

struct Trajectory {
    std::vector<FluidState> states;
    std::vector<DiagnosticsRecord> records;
    RunStatus status = RunStatus::Completed;
    double event_time = qnan(); // vacuum or instability time when status says so
    std::string note;

    // run metadata
    Grid1D grid;
    PressureLaw law;
    BoundaryKind bc = PeriodicBc{};
    ScalarField weight; // observable weight the records used
    double dt = 0.0;
};

// E = int 1/2 rho u^2 + g(rho) + (sqrt(rho)_x)^2 dx
double energy(const FluidState& s, const PressureLaw& law,
              double floor = kVacuumFloor);

// K = 1/2 u^2 + h(rho) - (sqrt(rho))_xx / sqrt(rho), pointwise
ScalarField iso_energy_K(const FluidState& s, const PressureLaw& law,
                         double floor = kVacuumFloor);

// B = u^2 + P(rho)/rho - (sqrt(rho))_xx / sqrt(rho). Note u^2 (not 1/2 u^2)
// and P/rho (not h): B - (K + 1/2 u^2) = P/rho - h.
ScalarField indicator_B_field(const FluidState& s, const PressureLaw& law,
                              double floor = kVacuumFloor);
std::pair<double, double> boundary_indicator_B(const FluidState& s,
                                               const PressureLaw& law,
                                               double floor = kVacuumFloor);

// I = int weight * rho dx, weight >= 0 required.
double observable_I(const FluidState& s, const ScalarField& weight);

// The default 1D observable weight (x - x_lo)(x_hi - x); equals x(1-x)
// on [0,1].
ScalarField default_weight(const Grid1D& g);

// Snapshot record assembly; never throws on vacuum, suspends the affected
// entries instead.
DiagnosticsRecord snapshot_record(const FluidState& s, const PressureLaw& law,
                                  const ScalarField& weight,
                                  double floor = kVacuumFloor);

// ----- blow-up prediction and monitors -------------------------------------

struct TimeWindow {
    double t_begin = 0.0, t_end = 0.0;
};

struct BlowupReport {
    double I0 = qnan();
    double M0 = qnan();
    std::optional<double> T_star;              // -I0/M0, present iff M0 < 0
    std::vector<TimeWindow> hypothesis_windows; // both endpoint indicators <= 0
    std::vector<std::pair<double, bool>> bound_checks; // (t, I <= I0+M0 t+tol)
    bool hypothesis_ever = false;
    bool bound_all_ok = true;
    std::optional<double> vacuum_time;
    double tol = 0.0;
};

// I0, M0 = int weight' * rho_I u_I dx and the predicted horizon.
BlowupReport initial_data_report(const ScalarField& rho_i, const ScalarField& u_i,
                                 const ScalarField& weight);

// Completes a report against a trajectory: hypothesis windows from the B
// signs, envelope I(t) <= I0 + M0 t + tol checked inside them only.
BlowupReport theorem2_monitor(const Trajectory& traj, BlowupReport report,
                              double tol_scale = 1e-3);

// r(t) = E(t) - E(0) + int_0^t (u rho K)(1,s) - (u rho K)(0,s) ds.
// The boundary bracket drops for periodic runs. NaN once vacuum suspends
// the diagnostics.
std::vector<double> energy_balance_residual(const Trajectory& traj,
                                            const PressureLaw& law);

// Residual of the observable identity
//   dI/dt(t) = M0 - 2 int_0^t int (rho u^2 + P + 2 sqrt(rho)_x^2) dx ds
//              + int_0^t (rho B)(1,s) ds + int_0^t (rho B)(0,s) ds
// on bounded [0,1] runs. dI/dt is taken by central differences over the
// snapshot times.
std::vector<double> observable_identity_residual(const Trajectory& traj,
                                                 const PressureLaw& law);

struct Theorem4Params {
    double alpha = 2.0;  // > 1
    double bigM = 1.0;   // > 0, lower bound scale for -K(0,t)
    double u0 = 0.0, u1 = 0.0;
    double lambda = 1.0; // pressure constant, P/g >= lambda
};

struct Theorem4Report {
    double max_K_gap = qnan(); // max_t |K(0,t) - K(1,t)|
    std::vector<TimeWindow> condition_windows; // where -M <= K0 <= -alpha*max^2
    // Envelope branch per snapshot: 0 = M0 < 0 (straight-line envelope),
    // 1 = wall-density integral past threshold, 2 = below threshold
    // (quadratic envelope), 3 = zero boundary velocity branch.
    std::vector<int> branch;
    std::vector<double> envelope;
    std::vector<std::pair<double, bool>> bound_checks; // inside windows only
    bool bound_all_ok = true;
    bool condition_ever = false;
    bool energy_threshold_held = true; // proof's "E(0) large enough" clause
    double E0 = qnan(), I0 = qnan(), M0 = qnan();
    LawAssumptionReport law_report;
    double tol = 0.0;
};

// Throws Error when the pressure assumptions fail for params.lambda.
Theorem4Report theorem4_monitor(const Trajectory& traj, const PressureLaw& law,
                                const Theorem4Params& params,
                                double tol_scale = 1e-3);

struct VacuumEventReport {
    bool occurred = false;
    double t = qnan();
    double fraction_near_vacuum = 0.0; // grid points below 10*floor
};

VacuumEventReport blowup_detect(const Trajectory& traj, double floor = kVacuumFloor);

} // namespace qhdlab
