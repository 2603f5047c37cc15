#include "qhdlab/stationary.hpp"

#include "qhdlab/numerics.hpp"

#include <cmath>

namespace qhdlab {

ScalarField StationaryProfile::w_field() const {
    if (!complete()) throw Error("StationaryProfile: incomplete shot has no field");
    ScalarField f(grid);
    f.v = w;
    return f;
}

StationaryProfile stationary_shoot(const StationaryParams& p, double dx) {
    if (!(p.w0 > 0.0)) throw Error("stationary_shoot: w0 must be positive");
    if (!(p.span > 0.0)) throw Error("stationary_shoot: span must be positive");
    if (!(dx > 0.0)) throw Error("stationary_shoot: dx must be positive");

    const std::size_t nsteps = std::max<std::size_t>(8, std::size_t(std::llround(p.span / dx)));
    const double h = p.span / double(nsteps);

    StationaryProfile prof;
    prof.grid = Grid1D(0.0, p.span, nsteps + 1, false);
    prof.w.assign(nsteps + 1, 0.0);
    prof.dw.assign(nsteps + 1, 0.0);

    auto accel = [&](double w) {
        return w * (0.5 * p.J * p.J / (w * w * w * w) + p.law.h(w * w) - p.K);
    };

    double w = p.w0, dw = p.dw0;
    prof.w[0] = w;
    prof.dw[0] = dw;
    prof.n_valid = 1;
    for (std::size_t i = 0; i < nsteps; ++i) {
        double k1w = dw, k1v = accel(w);
        double k2w = dw + 0.5 * h * k1v, k2v = accel(w + 0.5 * h * k1w);
        double k3w = dw + 0.5 * h * k2v, k3v = accel(w + 0.5 * h * k2w);
        double k4w = dw + h * k3v, k4v = accel(w + h * k3w);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        dw += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

        if (!(w > p.floor)) {
            prof.outcome = ShootOutcome::Vacuum;
            prof.stop_x = double(i + 1) * h;
            return prof;
        }
        if (!std::isfinite(w) || !std::isfinite(dw) || std::abs(w) > p.overflow ||
            std::abs(dw) > p.overflow) {
            prof.outcome = ShootOutcome::Overflow;
            prof.stop_x = double(i + 1) * h;
            return prof;
        }
        prof.w[i + 1] = w;
        prof.dw[i + 1] = dw;
        prof.n_valid = i + 2;
    }
    prof.stop_x = p.span;
    return prof;
}

ScalarField stationary_residual(const ScalarField& w, const StationaryParams& p) {
    const std::size_t n = w.size();
    for (double x : w.v)
        if (!(x > p.floor)) throw VacuumError("stationary_residual: profile at vacuum");

    std::vector<double> d2(n);
    derivative_raw(d2.data(), w.v.data(), n, w.grid.dx(), w.grid.periodic, 2);
    ScalarField r(w.grid);
    for (std::size_t i = 0; i < n; ++i) {
        double wi = w.v[i];
        r.v[i] = 0.5 * p.J * p.J / (wi * wi * wi * wi) + p.law.h(wi * wi) -
                 d2[i] / wi - p.K;
    }
    return r;
}

} // namespace qhdlab
