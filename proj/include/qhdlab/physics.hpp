#pragma once

#include "qhdlab/numerics.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace qhdlab {

inline constexpr double kVacuumFloor = 1e-12;

// Barotropic pressure law P(rho) as a sum of power terms c * rho^gamma with
// c > 0, gamma > 1, plus the closed forms tied to it: the enthalpy h with
// h'(rho) = P'(rho)/rho and its density primitive g(rho) = integral of h,
// both pinned by h(0) = g(0) = 0. An empty term list is the pressureless
// (free) law.
class PressureLaw {
  public:
    struct Term {
        double coeff;
        double exponent;
    };

    PressureLaw() = default; // free law: P = h = g = 0

    static PressureLaw power(double gamma);                     // P = rho^gamma
    static PressureLaw sum(std::vector<Term> terms);            // P = sum c rho^g
    static PressureLaw zero() { return PressureLaw(); }

    double P(double rho) const;
    double dP(double rho) const;
    double h(double rho) const;
    double g(double rho) const;

    // Array forms used in the solver inner loops.
    void P_arr(double* out, const double* rho, std::size_t n) const;
    void h_arr(double* out, const double* rho, std::size_t n) const;

    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

  private:
    explicit PressureLaw(std::vector<Term> t) : terms_(std::move(t)) {}
    std::vector<Term> terms_;
};

struct LawPoint {
    double P, h, g;
};

// Closed-form evaluation at a single density; throws on rho < 0.
LawPoint law_eval(const PressureLaw& law, double rho);

// Checks the pressure assumptions backing the Dirichlet-velocity theorem,
// plus the enthalpy relation h' = P'/rho by central finite differences,
// over a log-spaced density sample in (0, rho_max].
struct LawAssumptionReport {
    bool p_over_g_ok = false;      // inf P/g >= lambda
    double inf_p_over_g = 0.0;
    bool p_rho_minus_h_ok = false; // sup (P/rho - h) <= 0
    double sup_p_rho_minus_h = 0.0;
    bool enthalpy_ok = false;      // |h' - P'/rho| <= tol*(1+|P'/rho|)
    double max_enthalpy_err = 0.0;
    bool all_ok() const { return p_over_g_ok && p_rho_minus_h_ok && enthalpy_ok; }
};

LawAssumptionReport law_assumption_check(const PressureLaw& law, double rho_max,
                                         double lambda, std::size_t samples = 200,
                                         double tol = 1e-6);

struct FluidState {
    double t = 0.0;
    ScalarField rho;
    ScalarField u;
};

struct WaveState {
    double t = 0.0;
    Grid1D grid;
    std::vector<std::complex<double>> psi;
    double eps = 1.0;

    template <typename F>
    static WaveState sample(const Grid1D& g, double eps, F&& f) {
        WaveState w;
        w.grid = g;
        w.eps = eps;
        w.psi.resize(g.n);
        for (std::size_t i = 0; i < g.n; ++i) w.psi[i] = f(g.x(i));
        return w;
    }
};

// Additive phase constant the transform pair leaves free: the phase value
// at one anchor grid point.
struct MadelungGauge {
    std::size_t anchor = 0;
    double phase = 0.0;
};

// (Laplacian of sqrt(rho)) / sqrt(rho). Throws VacuumError when min rho is
// at or below `floor`.
ScalarField bohm(const ScalarField& rho, const BoundaryKind& bc,
                 double floor = kVacuumFloor);

// rho = |psi|^2, u = eps * Im(conj(psi) psi_x) / |psi|^2.
FluidState madelung_forward(const WaveState& w, double floor = kVacuumFloor);

// psi = sqrt(rho) exp(i S / eps) with S the cumulative trapezoid of u from
// the gauge anchor. One-dimensional states only: there is deliberately no
// multi-D overload, since irrotationality of u is not checked.
WaveState madelung_inverse(const FluidState& f, double eps, const MadelungGauge& gauge,
                           double floor = kVacuumFloor);

// 2D wave state and its hydrodynamic image, used by the multi-D monitors.
struct WaveState2D {
    double t = 0.0;
    Grid2D grid;
    std::vector<std::complex<double>> psi;
    double eps = 1.0;

    template <typename F>
    static WaveState2D sample(const Grid2D& g, double eps, F&& f) {
        WaveState2D w;
        w.grid = g;
        w.eps = eps;
        w.psi.resize(g.size());
        for (std::size_t iy = 0; iy < g.gy.n; ++iy)
            for (std::size_t ix = 0; ix < g.gx.n; ++ix)
                w.psi[g.idx(ix, iy)] = f(g.gx.x(ix), g.gy.x(iy));
        return w;
    }
};

struct FluidState2D {
    double t = 0.0;
    Field2D rho;
    Field2D ux, uy;
};

FluidState2D madelung_forward2d(const WaveState2D& w, double floor = kVacuumFloor);

} // namespace qhdlab
