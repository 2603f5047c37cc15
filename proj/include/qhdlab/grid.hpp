#pragma once

#include "qhdlab/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace qhdlab {

// Uniform 1D grid. Bounded grids carry both endpoints (dx = L/(n-1));
// periodic grids drop the duplicate right endpoint (dx = L/n).
struct Grid1D {
    double x_lo = 0.0;
    double x_hi = 1.0;
    std::size_t n = 0;
    bool periodic = false;

    Grid1D() = default;
    Grid1D(double lo, double hi, std::size_t npts, bool per = false)
        : x_lo(lo), x_hi(hi), n(npts), periodic(per) {
        if (!(hi > lo)) throw Error("Grid1D: x_hi must exceed x_lo");
        if (n < 8) throw Error("Grid1D: need at least 8 points");
    }

    double length() const { return x_hi - x_lo; }
    double dx() const { return periodic ? length() / double(n) : length() / double(n - 1); }
    double x(std::size_t i) const { return x_lo + double(i) * dx(); }

    bool operator==(const Grid1D&) const = default;
};

struct ScalarField {
    Grid1D grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid1D& g, double fill = 0.0) : grid(g), v(g.n, fill) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    template <typename F>
    static ScalarField sample(const Grid1D& g, F&& f) {
        ScalarField out(g);
        for (std::size_t i = 0; i < g.n; ++i) out.v[i] = f(g.x(i));
        return out;
    }
};

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Tensor-product grid for the 2D wave runs and the multi-D monitors.
// Values are stored row-major: index = iy*gx.n + ix.
struct Grid2D {
    Grid1D gx, gy;
    std::size_t size() const { return gx.n * gy.n; }
    std::size_t idx(std::size_t ix, std::size_t iy) const { return iy * gx.n + ix; }
    bool operator==(const Grid2D&) const = default;
};

struct Field2D {
    Grid2D grid;
    std::vector<double> v;

    Field2D() = default;
    explicit Field2D(const Grid2D& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& at(std::size_t ix, std::size_t iy) { return v[grid.idx(ix, iy)]; }
    double at(std::size_t ix, std::size_t iy) const { return v[grid.idx(ix, iy)]; }

    template <typename F>
    static Field2D sample(const Grid2D& g, F&& f) {
        Field2D out(g);
        for (std::size_t iy = 0; iy < g.gy.n; ++iy)
            for (std::size_t ix = 0; ix < g.gx.n; ++ix)
                out.v[g.idx(ix, iy)] = f(g.gx.x(ix), g.gy.x(iy));
        return out;
    }
};

} // namespace qhdlab
