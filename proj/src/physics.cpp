#include "qhdlab/physics.hpp"

#include "qhdlab/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qhdlab {

PressureLaw PressureLaw::power(double gamma) {
    if (!(gamma > 1.0)) throw Error("PressureLaw: power law needs gamma > 1");
    return PressureLaw({{1.0, gamma}});
}

PressureLaw PressureLaw::sum(std::vector<Term> terms) {
    for (const Term& t : terms) {
        if (!(t.coeff > 0.0)) throw Error("PressureLaw: coefficients must be positive");
        if (!(t.exponent > 1.0)) throw Error("PressureLaw: exponents must exceed 1");
    }
    return PressureLaw(std::move(terms));
}

double PressureLaw::P(double rho) const {
    double s = 0.0;
    for (const Term& t : terms_) s += t.coeff * std::pow(rho, t.exponent);
    return s;
}

double PressureLaw::dP(double rho) const {
    double s = 0.0;
    for (const Term& t : terms_)
        s += t.coeff * t.exponent * std::pow(rho, t.exponent - 1.0);
    return s;
}

double PressureLaw::h(double rho) const {
    double s = 0.0;
    for (const Term& t : terms_)
        s += t.coeff * t.exponent / (t.exponent - 1.0) * std::pow(rho, t.exponent - 1.0);
    return s;
}

double PressureLaw::g(double rho) const {
    double s = 0.0;
    for (const Term& t : terms_)
        s += t.coeff / (t.exponent - 1.0) * std::pow(rho, t.exponent);
    return s;
}

void PressureLaw::P_arr(double* out, const double* rho, std::size_t n) const {
    std::fill(out, out + n, 0.0);
    for (const Term& t : terms_) {
        if (t.exponent == 2.0) {
            for (std::size_t i = 0; i < n; ++i) out[i] += t.coeff * rho[i] * rho[i];
        } else if (t.exponent == 3.0) {
            for (std::size_t i = 0; i < n; ++i)
                out[i] += t.coeff * rho[i] * rho[i] * rho[i];
        } else {
            for (std::size_t i = 0; i < n; ++i)
                out[i] += t.coeff * std::pow(rho[i], t.exponent);
        }
    }
}

void PressureLaw::h_arr(double* out, const double* rho, std::size_t n) const {
    std::fill(out, out + n, 0.0);
    for (const Term& t : terms_) {
        const double c = t.coeff * t.exponent / (t.exponent - 1.0);
        if (t.exponent == 2.0) {
            for (std::size_t i = 0; i < n; ++i) out[i] += c * rho[i];
        } else if (t.exponent == 3.0) {
            for (std::size_t i = 0; i < n; ++i) out[i] += c * rho[i] * rho[i];
        } else {
            for (std::size_t i = 0; i < n; ++i)
                out[i] += c * std::pow(rho[i], t.exponent - 1.0);
        }
    }
}

LawPoint law_eval(const PressureLaw& law, double rho) {
    if (rho < 0.0) throw Error("law_eval: negative density");
    return {law.P(rho), law.h(rho), law.g(rho)};
}

LawAssumptionReport law_assumption_check(const PressureLaw& law, double rho_max,
                                         double lambda, std::size_t samples,
                                         double tol) {
    if (!(rho_max > 0.0)) throw Error("law_assumption_check: rho_max must be positive");
    if (!(lambda > 0.0)) throw Error("law_assumption_check: lambda must be positive");
    if (samples < 2) samples = 2;

    LawAssumptionReport rep;
    rep.inf_p_over_g = std::numeric_limits<double>::infinity();
    rep.sup_p_rho_minus_h = -std::numeric_limits<double>::infinity();
    rep.max_enthalpy_err = 0.0;

    const double lo = rho_max * 1e-6;
    for (std::size_t k = 0; k < samples; ++k) {
        double frac = double(k) / double(samples - 1);
        double rho = lo * std::pow(rho_max / lo, frac);
        double P = law.P(rho), h = law.h(rho), g = law.g(rho);

        if (law.is_zero()) {
            rep.inf_p_over_g = std::numeric_limits<double>::quiet_NaN();
        } else {
            rep.inf_p_over_g = std::min(rep.inf_p_over_g, P / g);
        }
        rep.sup_p_rho_minus_h = std::max(rep.sup_p_rho_minus_h, P / rho - h);

        double dr = 1e-5 * rho;
        double h_fd = (law.h(rho + dr) - law.h(rho - dr)) / (2.0 * dr);
        double h_exact = law.dP(rho) / rho;
        double err = std::abs(h_fd - h_exact) / (1.0 + std::abs(h_exact));
        rep.max_enthalpy_err = std::max(rep.max_enthalpy_err, err);
    }

    rep.p_over_g_ok = !law.is_zero() && rep.inf_p_over_g >= lambda;
    rep.p_rho_minus_h_ok = rep.sup_p_rho_minus_h <= 0.0;
    rep.enthalpy_ok = rep.max_enthalpy_err <= tol;
    return rep;
}

ScalarField bohm(const ScalarField& rho, const BoundaryKind& bc, double floor) {
    const auto& k = kernels::ops();
    if (k.min_v(rho.v.data(), rho.size()) <= floor)
        throw VacuumError("bohm: density at or below vacuum floor");
    ScalarField w(rho.grid);
    k.sqrt_v(w.v.data(), rho.v.data(), rho.size());
    ScalarField d2 = derivative(w, 2, bc);
    ScalarField out(rho.grid);
    k.div(out.v.data(), d2.v.data(), w.v.data(), rho.size());
    return out;
}

FluidState madelung_forward(const WaveState& w, double floor) {
    const auto& k = kernels::ops();
    const std::size_t n = w.grid.n;
    if (!(w.eps > 0.0)) throw Error("madelung_forward: eps must be positive");

    FluidState f;
    f.t = w.t;
    f.rho = ScalarField(w.grid);
    f.u = ScalarField(w.grid);
    k.abs2_c(f.rho.v.data(), reinterpret_cast<const double*>(w.psi.data()), n);
    if (k.min_v(f.rho.v.data(), n) <= floor)
        throw VacuumError("madelung_forward: |psi|^2 at or below vacuum floor");

    std::vector<double> re(n), im(n), dre(n), dim(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = w.psi[i].real();
        im[i] = w.psi[i].imag();
    }
    derivative_raw(dre.data(), re.data(), n, w.grid.dx(), w.grid.periodic, 1);
    derivative_raw(dim.data(), im.data(), n, w.grid.dx(), w.grid.periodic, 1);
    for (std::size_t i = 0; i < n; ++i)
        f.u.v[i] = w.eps * (re[i] * dim[i] - im[i] * dre[i]) / f.rho.v[i];
    return f;
}

WaveState madelung_inverse(const FluidState& f, double eps, const MadelungGauge& gauge,
                           double floor) {
    const std::size_t n = f.rho.grid.n;
    if (!(eps > 0.0)) throw Error("madelung_inverse: eps must be positive");
    if (gauge.anchor >= n) throw Error("madelung_inverse: gauge anchor off the grid");
    if (kernels::ops().min_v(f.rho.v.data(), n) <= floor)
        throw VacuumError("madelung_inverse: density at or below vacuum floor");

    const double dx = f.rho.grid.dx();
    std::vector<double> S(n);
    S[gauge.anchor] = gauge.phase;
    for (std::size_t i = gauge.anchor + 1; i < n; ++i)
        S[i] = S[i - 1] + 0.5 * dx * (f.u.v[i - 1] + f.u.v[i]);
    for (std::size_t i = gauge.anchor; i-- > 0;)
        S[i] = S[i + 1] - 0.5 * dx * (f.u.v[i] + f.u.v[i + 1]);

    WaveState w;
    w.t = f.t;
    w.grid = f.rho.grid;
    w.eps = eps;
    w.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        w.psi[i] = std::sqrt(f.rho.v[i]) * std::polar(1.0, S[i] / eps);
    return w;
}

FluidState2D madelung_forward2d(const WaveState2D& w, double floor) {
    const auto& k = kernels::ops();
    const std::size_t nx = w.grid.gx.n, ny = w.grid.gy.n, np = nx * ny;
    if (!(w.eps > 0.0)) throw Error("madelung_forward2d: eps must be positive");

    FluidState2D f;
    f.t = w.t;
    f.rho = Field2D(w.grid);
    f.ux = Field2D(w.grid);
    f.uy = Field2D(w.grid);
    k.abs2_c(f.rho.v.data(), reinterpret_cast<const double*>(w.psi.data()), np);
    if (k.min_v(f.rho.v.data(), np) <= floor)
        throw VacuumError("madelung_forward2d: |psi|^2 at or below vacuum floor");

    std::vector<double> re(np), im(np);
    for (std::size_t i = 0; i < np; ++i) {
        re[i] = w.psi[i].real();
        im[i] = w.psi[i].imag();
    }

    // x-direction: contiguous rows
    std::vector<double> dre(nx), dim(nx);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const std::size_t off = iy * nx;
        derivative_raw(dre.data(), re.data() + off, nx, w.grid.gx.dx(),
                       w.grid.gx.periodic, 1);
        derivative_raw(dim.data(), im.data() + off, nx, w.grid.gx.dx(),
                       w.grid.gx.periodic, 1);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            std::size_t i = off + ix;
            f.ux.v[i] = w.eps * (re[i] * dim[ix] - im[i] * dre[ix]) / f.rho.v[i];
        }
    }

    // y-direction: gather strided columns
    std::vector<double> cre(ny), cim(ny), dcre(ny), dcim(ny);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            cre[iy] = re[iy * nx + ix];
            cim[iy] = im[iy * nx + ix];
        }
        derivative_raw(dcre.data(), cre.data(), ny, w.grid.gy.dx(), w.grid.gy.periodic,
                       1);
        derivative_raw(dcim.data(), cim.data(), ny, w.grid.gy.dx(), w.grid.gy.periodic,
                       1);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            std::size_t i = iy * nx + ix;
            f.uy.v[i] = w.eps * (cre[iy] * dcim[iy] - cim[iy] * dcre[iy]) / f.rho.v[i];
        }
    }
    return f;
}

} // namespace qhdlab
