#pragma once

#include "qhdlab/grid.hpp"

#include <variant>

namespace qhdlab {

// Boundary treatment for the hydrodynamic runs. `Periodic` wraps.
// `DirichletVelocity` keeps rho_x = 0 by ghost reflection and pins the
// velocity at both endpoints. `Monitored` keeps rho_x = 0 and extrapolates
// the momentum; the momentum-flux boundary condition it stands in for is
// observed through the B indicator, never imposed.
struct PeriodicBc {};
struct DirichletVelocityBc {
    double u0 = 0.0, u1 = 0.0;
};
struct MonitoredBc {
    double c1 = 0.0, c2 = 0.0;
    // The blow-up regime expects nonpositive boundary constants. Positive
    // values are legal but flagged.
    bool sign_regime_ok() const { return c1 <= 0.0 && c2 <= 0.0; }
};

using BoundaryKind = std::variant<PeriodicBc, DirichletVelocityBc, MonitoredBc>;

inline bool is_periodic(const BoundaryKind& bc) {
    return std::holds_alternative<PeriodicBc>(bc);
}

// Finite differences, second-order central in the interior. Bounded edges
// use one-sided second-order stencils for orders 1-2 and one-sided
// first-order for order 3. Throws on non-finite input, on a grid too short
// for the stencil, or when bc periodicity disagrees with the grid.
ScalarField derivative(const ScalarField& f, int order, const BoundaryKind& bc);

// Derivative on raw storage (same stencils); out and f must not alias.
void derivative_raw(double* out, const double* f, std::size_t n, double dx,
                    bool periodic, int order);

// Trapezoid rule on bounded grids, rectangle rule on periodic grids.
double integrate(const ScalarField& f);
double integrate_raw(const double* f, std::size_t n, double dx, bool periodic);

// Tensorized 2D counterpart.
double integrate2d(const Field2D& f);

} // namespace qhdlab
