#include "qhdlab/numerics.hpp"

#include "qhdlab/kernels/kernels.hpp"

#include <string>

namespace qhdlab {

namespace {

void check_input(const ScalarField& f, int order, const BoundaryKind& bc) {
    if (order < 1 || order > 3) throw Error("derivative: order must be 1, 2 or 3");
    if (f.grid.n < std::size_t(order) + 2)
        throw Error("derivative: grid too short for order-" + std::to_string(order) +
                    " stencil");
    if (is_periodic(bc) != f.grid.periodic)
        throw Error("derivative: boundary kind disagrees with grid periodicity");
    if (!all_finite(f.v)) throw Error("derivative: non-finite input");
}

} // namespace

void derivative_raw(double* out, const double* f, std::size_t n, double dx,
                    bool periodic, int order) {
    const auto& k = kernels::ops();
    const double inv2 = 1.0 / (2.0 * dx);
    const double invsq = 1.0 / (dx * dx);
    const double invcb = 1.0 / (dx * dx * dx);

    auto wrap = [n](std::ptrdiff_t i) -> std::size_t {
        return std::size_t((i % std::ptrdiff_t(n) + std::ptrdiff_t(n)) % std::ptrdiff_t(n));
    };

    switch (order) {
    case 1:
        k.diff_c(out + 1, f + 1, inv2, n - 2);
        if (periodic) {
            out[0] = inv2 * (f[1] - f[n - 1]);
            out[n - 1] = inv2 * (f[0] - f[n - 2]);
        } else {
            out[0] = inv2 * (-3.0 * f[0] + 4.0 * f[1] - f[2]);
            out[n - 1] = inv2 * (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]);
        }
        break;
    case 2:
        k.lap_c(out + 1, f + 1, invsq, n - 2);
        if (periodic) {
            out[0] = invsq * (f[1] - 2.0 * f[0] + f[n - 1]);
            out[n - 1] = invsq * (f[0] - 2.0 * f[n - 1] + f[n - 2]);
        } else {
            out[0] = invsq * (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]);
            out[n - 1] =
                invsq * (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]);
        }
        break;
    case 3:
        // central: (f[i+2] - 2f[i+1] + 2f[i-1] - f[i-2]) / (2 dx^3), sign
        // fixed so f = x^3 gives +6
        if (periodic) {
            for (std::size_t i = 0; i < n; ++i) {
                std::ptrdiff_t s = std::ptrdiff_t(i);
                out[i] = 0.5 * invcb *
                         (f[wrap(s + 2)] - 2.0 * f[wrap(s + 1)] + 2.0 * f[wrap(s - 1)] -
                          f[wrap(s - 2)]);
            }
        } else {
            for (std::size_t i = 2; i + 2 < n; ++i)
                out[i] = 0.5 * invcb *
                         (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]);
            // first-order one-sided closures
            for (std::size_t i = 0; i < 2; ++i)
                out[i] = invcb * (-f[i] + 3.0 * f[i + 1] - 3.0 * f[i + 2] + f[i + 3]);
            for (std::size_t i = n - 2; i < n; ++i)
                out[i] = invcb * (f[i] - 3.0 * f[i - 1] + 3.0 * f[i - 2] - f[i - 3]);
        }
        break;
    }
}

ScalarField derivative(const ScalarField& f, int order, const BoundaryKind& bc) {
    check_input(f, order, bc);
    ScalarField out(f.grid);
    derivative_raw(out.v.data(), f.v.data(), f.grid.n, f.grid.dx(), f.grid.periodic,
                   order);
    return out;
}

double integrate_raw(const double* f, std::size_t n, double dx, bool periodic) {
    double s = kernels::ops().sum(f, n);
    if (!periodic) s -= 0.5 * (f[0] + f[n - 1]);
    return s * dx;
}

double integrate(const ScalarField& f) {
    if (!all_finite(f.v)) throw Error("integrate: non-finite input");
    return integrate_raw(f.v.data(), f.grid.n, f.grid.dx(), f.grid.periodic);
}

double integrate2d(const Field2D& f) {
    if (!all_finite(f.v)) throw Error("integrate2d: non-finite input");
    const Grid1D& gx = f.grid.gx;
    const Grid1D& gy = f.grid.gy;
    std::vector<double> rows(gy.n);
    for (std::size_t iy = 0; iy < gy.n; ++iy)
        rows[iy] = integrate_raw(f.v.data() + iy * gx.n, gx.n, gx.dx(), gx.periodic);
    return integrate_raw(rows.data(), gy.n, gy.dx(), gy.periodic);
}

} // namespace qhdlab
