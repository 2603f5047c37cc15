#pragma once

#include "qhdlab/diagnostics.hpp"

#include <optional>

namespace qhdlab {

// Explicit RK4 in conservative variables (rho, rho u). The dispersive term
// makes the stiffest mode Schroedinger-like, so dt scales with dx^2.
struct QhdConfig {
    double eps2 = 2.0;               // scaled Planck constant squared
    BoundaryKind bc = PeriodicBc{};
    double sigma = 0.1;              // dt = sigma * dx^2
    std::optional<double> dt;        // explicit step override
    double vacuum_floor = kVacuumFloor;
    double t_final = 1.0;
    std::size_t record_every = 100;
};

struct QhdRhs {
    ScalarField drho_dt;
    ScalarField dmom_dt;
};

// Right-hand side of the conservative system:
//   rho_t = -(rho u)_x
//   (rho u)_t = -(rho u^2 + P(rho))_x + (eps2/2) rho (bohm(rho))_x
// Boundary rows follow cfg.bc: periodic wraps; DirichletVelocity reflects
// rho (rho_x = 0) and pins u at the endpoints; Monitored reflects rho and
// extrapolates the momentum. Throws VacuumError below the floor.
QhdRhs qhd_rhs(const FluidState& s, const PressureLaw& law, const QhdConfig& cfg);

// Integrates to t_final, recording diagnostics every record_every steps
// (plus first and last). Vacuum contact terminates the run early with
// RunStatus::VacuumEvent -- the detection outcome, not a failure. Any
// non-finite value terminates with RunStatus::Instability.
Trajectory qhd_run(const FluidState& ic, const PressureLaw& law, const QhdConfig& cfg,
                   const ScalarField* weight = nullptr);

} // namespace qhdlab
