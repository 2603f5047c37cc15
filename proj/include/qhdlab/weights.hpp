#pragma once

#include "qhdlab/nls_solver.hpp"

#include <array>
#include <functional>

namespace qhdlab {

using Point = std::array<double, 3>; // unused trailing components are zero

// Supported fluid domains for the auxiliary weight problem. The quadratic
// family lives on the ellipsoid {a >= 0} with an all-Dirichlet boundary;
// general convex domains (Monge-Ampere solves) are out of scope.
enum class DomainKind { Ball, Cylinder, Box1D, Quadratic };

struct DomainDescriptor {
    DomainKind kind = DomainKind::Ball;
    int dim = 1;
    double quad_c = 1.0;
    std::array<double, 3> quad_q{0.5, 0.5, 0.5};

    static DomainDescriptor ball(int d);
    static DomainDescriptor cylinder(int d);          // [-1,1] x [0,1]^{d-1}
    static DomainDescriptor box1d();                  // [0,1], both ends Dirichlet
    static DomainDescriptor quadratic(int d, double c, std::array<double, 3> q);
};

// Closed-form weight: the paper's constructions are analytic, so exact
// derivatives keep the verification checks sharp instead of
// discretization-limited. Evaluators are open fields so tests can build
// tampered weights.
struct WeightFunction {
    DomainDescriptor domain;
    std::function<double(const Point&)> a;
    std::function<Point(const Point&)> grad;
    std::function<std::array<double, 9>(const Point&)> hess; // row-major dim x dim
    std::function<double(const Point&)> g;                   // -Laplacian a
    std::function<double(const Point&)> lap_g;
    std::function<Point(const Point&)> grad_g;
};

WeightFunction make_weight(const DomainDescriptor& dom);

// max eigenvalue of a symmetric dim x dim matrix (dim <= 3)
double max_eigenvalue_sym(const std::array<double, 9>& m, int dim);

struct CheckResult {
    std::string name;
    double value = 0.0;     // worst-case margin, sign convention per check
    double threshold = 0.0; // pass iff value <= threshold
    bool ok = false;
};

struct WeightReport {
    std::vector<CheckResult> checks;
    bool all_ok = true;
    const CheckResult* find(const std::string& name) const;
};

// Samples the interior quasi-randomly (fixed seed) and the boundary along
// facet parametrizations, then checks: Hess(a) negative-semidefinite,
// g = -Lap a, a = 0 on the Dirichlet part, grad a . nu = 0 on the Neumann
// part, a >= 0, g >= 0, Lap g <= 0 and dg/dnu >= 0.
WeightReport verify_weight(const WeightFunction& w, std::size_t samples = 10000,
                           unsigned seed = 12345);

// Boundary samples with outward normals, per Dirichlet/Neumann part.
struct BoundarySample {
    Point x;
    Point nu;
};
std::vector<BoundarySample> dirichlet_samples(const DomainDescriptor& dom,
                                              std::size_t count, unsigned seed = 12345);
std::vector<BoundarySample> neumann_samples(const DomainDescriptor& dom,
                                            std::size_t count, unsigned seed = 12345);

// The Dirichlet-boundary integrand of the multi-D blow-up condition,
//   (da/dnu)(Lap sqrt(rho)/sqrt(rho) + |grad sqrt(rho)|^2/rho - P/rho)
//     - (u . grad a)(u . nu),
// together with the paper's reduced ball/cylinder forms.
struct IntegrandSample {
    Point x;
    double general = 0.0;
    double reduced = 0.0; // NaN when no reduced form exists for the domain
};

// Constant-state evaluation at the domain's Dirichlet boundary samples.
std::vector<IntegrandSample> dirichlet_integrand_const(const WeightFunction& w,
                                                       double rho0, const Point& u,
                                                       const PressureLaw& law,
                                                       std::size_t count = 64,
                                                       unsigned seed = 12345);

// Grid-state evaluation along the x = +-1 traces of a cylinder-domain
// tensor grid (one-sided stencils toward the facets).
struct FacetTrace {
    std::vector<IntegrandSample> left, right; // x = -1 and x = +1
    double max_discrepancy = 0.0;             // max |general - reduced|
};
FacetTrace dirichlet_integrand_2d(const WeightFunction& w, const FluidState2D& s,
                                  const PressureLaw& law);

// Theorem-3.1 monitor over a 2D Madelung-image trajectory on a cylinder
// grid: I(t) = int a rho, M0 = int rho_I u_I . grad a, envelope check
// inside windows where the boundary-condition flags hold.
struct MultiDReport {
    double I0 = qnan(), M0 = qnan();
    std::optional<double> T_star;
    std::vector<double> times, I;
    std::vector<TimeWindow> hypothesis_windows;
    std::vector<std::pair<double, bool>> bound_checks;
    bool hypothesis_ever = false;
    bool bound_all_ok = true;
    double tol = 0.0;
};

MultiDReport multiD_observable_monitor(const Trajectory2D& traj,
                                       const WeightFunction& w,
                                       const PressureLaw& law,
                                       double tol_scale = 1e-3,
                                       double flag_tol = 1e-6);

} // namespace qhdlab
