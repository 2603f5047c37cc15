#pragma once

#include "qhdlab/physics.hpp"

namespace qhdlab {

// Stationary profiles w = sqrt(rho) of the flux/iso-energy system
//   rho u = J,   1/2 u^2 + h(rho) - w_xx / w = K
// recast as the second-order ODE  w'' = w (J^2/(2 w^4) + h(w^2) - K).
// Shooting from x = 0: the literature discusses the system only through the
// constants J and K, so an initial-value probe is the faithful tool; losing
// positivity along the way is a recorded event, not an error.
struct StationaryParams {
    double J = 0.0;
    double K = 0.0;
    PressureLaw law;
    double w0 = 1.0;   // w(0) > 0
    double dw0 = 0.0;  // w'(0)
    double span = 1.0;
    double floor = kVacuumFloor;
    double overflow = 1e8;
};

enum class ShootOutcome { Completed, Vacuum, Overflow };

struct StationaryProfile {
    Grid1D grid;              // [0, span], bounded
    std::vector<double> w;    // valid on [0, n_valid)
    std::vector<double> dw;
    std::size_t n_valid = 0;
    ShootOutcome outcome = ShootOutcome::Completed;
    double stop_x = 0.0;      // where integration ended

    bool complete() const { return outcome == ShootOutcome::Completed; }
    ScalarField w_field() const; // requires complete()
};

// Classical RK4 on (w, w') with step dx.
StationaryProfile stationary_shoot(const StationaryParams& p, double dx);

// Pointwise residual  J^2/(2 w^4) + h(w^2) - w''/w - K  with the shared
// finite-difference stencils.
ScalarField stationary_residual(const ScalarField& w, const StationaryParams& p);

} // namespace qhdlab
