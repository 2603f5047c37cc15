#include "qhdlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qhdlab {

namespace {

double dot3(const Point& a, const Point& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

} // namespace

DomainDescriptor DomainDescriptor::ball(int d) {
    if (d < 1 || d > 3) throw Error("DomainDescriptor: ball dimension must be 1..3");
    DomainDescriptor dom;
    dom.kind = DomainKind::Ball;
    dom.dim = d;
    return dom;
}

DomainDescriptor DomainDescriptor::cylinder(int d) {
    if (d < 2 || d > 3) throw Error("DomainDescriptor: cylinder dimension must be 2..3");
    DomainDescriptor dom;
    dom.kind = DomainKind::Cylinder;
    dom.dim = d;
    return dom;
}

DomainDescriptor DomainDescriptor::box1d() {
    DomainDescriptor dom;
    dom.kind = DomainKind::Box1D;
    dom.dim = 1;
    return dom;
}

DomainDescriptor DomainDescriptor::quadratic(int d, double c, std::array<double, 3> q) {
    if (d < 1 || d > 3) throw Error("DomainDescriptor: dimension must be 1..3");
    if (!(c > 0.0)) throw Error("DomainDescriptor: quadratic constant must be positive");
    for (int i = 0; i < d; ++i)
        if (!(q[std::size_t(i)] > 0.0))
            throw Error("DomainDescriptor: quadratic coefficients must be positive");
    DomainDescriptor dom;
    dom.kind = DomainKind::Quadratic;
    dom.dim = d;
    dom.quad_c = c;
    dom.quad_q = q;
    return dom;
}

WeightFunction make_weight(const DomainDescriptor& dom) {
    WeightFunction w;
    w.domain = dom;
    const int d = dom.dim;
    switch (dom.kind) {
    case DomainKind::Ball:
        w.a = [d](const Point& x) {
            double r2 = 0.0;
            for (int i = 0; i < d; ++i) r2 += x[std::size_t(i)] * x[std::size_t(i)];
            return 1.0 - r2;
        };
        w.grad = [d](const Point& x) {
            Point g{0, 0, 0};
            for (int i = 0; i < d; ++i) g[std::size_t(i)] = -2.0 * x[std::size_t(i)];
            return g;
        };
        w.hess = [d](const Point&) {
            std::array<double, 9> h{};
            for (int i = 0; i < d; ++i) h[std::size_t(i * d + i)] = -2.0;
            return h;
        };
        w.g = [d](const Point&) { return 2.0 * d; };
        break;
    case DomainKind::Cylinder:
        w.a = [](const Point& x) { return 1.0 - x[0] * x[0]; };
        w.grad = [](const Point& x) { return Point{-2.0 * x[0], 0.0, 0.0}; };
        w.hess = [](const Point&) {
            std::array<double, 9> h{};
            h[0] = -2.0;
            return h;
        };
        w.g = [](const Point&) { return 2.0; };
        break;
    case DomainKind::Box1D:
        w.a = [](const Point& x) { return x[0] * (1.0 - x[0]); };
        w.grad = [](const Point& x) { return Point{1.0 - 2.0 * x[0], 0.0, 0.0}; };
        w.hess = [](const Point&) {
            std::array<double, 9> h{};
            h[0] = -2.0;
            return h;
        };
        w.g = [](const Point&) { return 2.0; };
        break;
    case DomainKind::Quadratic: {
        const double c = dom.quad_c;
        const auto q = dom.quad_q;
        w.a = [d, c, q](const Point& x) {
            double s = c;
            for (int i = 0; i < d; ++i)
                s -= q[std::size_t(i)] * x[std::size_t(i)] * x[std::size_t(i)];
            return s;
        };
        w.grad = [d, q](const Point& x) {
            Point g{0, 0, 0};
            for (int i = 0; i < d; ++i)
                g[std::size_t(i)] = -2.0 * q[std::size_t(i)] * x[std::size_t(i)];
            return g;
        };
        w.hess = [d, q](const Point&) {
            std::array<double, 9> h{};
            for (int i = 0; i < d; ++i) h[std::size_t(i * d + i)] = -2.0 * q[std::size_t(i)];
            return h;
        };
        double gsum = 0.0;
        for (int i = 0; i < d; ++i) gsum += 2.0 * q[std::size_t(i)];
        w.g = [gsum](const Point&) { return gsum; };
        break;
    }
    }
    // all built-in weights have constant g
    w.lap_g = [](const Point&) { return 0.0; };
    w.grad_g = [](const Point&) { return Point{0.0, 0.0, 0.0}; };
    return w;
}

double max_eigenvalue_sym(const std::array<double, 9>& m, int dim) {
    if (dim == 1) return m[0];
    if (dim == 2) {
        double a = m[0], b = m[1], c = m[3];
        double mean = 0.5 * (a + c);
        double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        (void)disc;
        return mean + std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    }
    // cyclic Jacobi for the 3x3 case
    std::array<double, 9> a = m;
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(a[1]) + std::abs(a[2]) + std::abs(a[5]);
        if (off < 1e-15) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                double apq = a[std::size_t(p * 3 + q)];
                if (std::abs(apq) < 1e-18) continue;
                double app = a[std::size_t(p * 3 + p)], aqq = a[std::size_t(q * 3 + q)];
                double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    double akp = a[std::size_t(k * 3 + p)], akq = a[std::size_t(k * 3 + q)];
                    a[std::size_t(k * 3 + p)] = c * akp - s * akq;
                    a[std::size_t(k * 3 + q)] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = a[std::size_t(p * 3 + k)], aqk = a[std::size_t(q * 3 + k)];
                    a[std::size_t(p * 3 + k)] = c * apk - s * aqk;
                    a[std::size_t(q * 3 + k)] = s * apk + c * aqk;
                }
            }
        }
    }
    return std::max({a[0], a[4], a[8]});
}

namespace {

std::vector<Point> interior_samples(const DomainDescriptor& dom, std::size_t count,
                                    unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Point> pts;
    pts.reserve(count);
    const int d = dom.dim;
    while (pts.size() < count) {
        Point x{0, 0, 0};
        switch (dom.kind) {
        case DomainKind::Ball: {
            double r2 = 0.0;
            for (int i = 0; i < d; ++i) {
                x[std::size_t(i)] = 2.0 * u01(rng) - 1.0;
                r2 += x[std::size_t(i)] * x[std::size_t(i)];
            }
            if (r2 >= 1.0) continue;
            break;
        }
        case DomainKind::Cylinder:
            x[0] = 2.0 * u01(rng) - 1.0;
            for (int i = 1; i < d; ++i) x[std::size_t(i)] = u01(rng);
            break;
        case DomainKind::Box1D:
            x[0] = u01(rng);
            break;
        case DomainKind::Quadratic: {
            double a = 0.0;
            for (int i = 0; i < d; ++i) {
                double bound = std::sqrt(dom.quad_c / dom.quad_q[std::size_t(i)]);
                x[std::size_t(i)] = bound * (2.0 * u01(rng) - 1.0);
                a += dom.quad_q[std::size_t(i)] * x[std::size_t(i)] * x[std::size_t(i)];
            }
            if (a >= dom.quad_c) continue;
            break;
        }
        }
        pts.push_back(x);
    }
    return pts;
}

Point sphere_direction(std::mt19937& rng, int d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Point u{0, 0, 0};
    double norm = 0.0;
    do {
        norm = 0.0;
        for (int i = 0; i < d; ++i) {
            u[std::size_t(i)] = gauss(rng);
            norm += u[std::size_t(i)] * u[std::size_t(i)];
        }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (int i = 0; i < d; ++i) u[std::size_t(i)] /= norm;
    return u;
}

} // namespace

std::vector<BoundarySample> dirichlet_samples(const DomainDescriptor& dom,
                                              std::size_t count, unsigned seed) {
    std::mt19937 rng(seed ^ 0x9e3779b9u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<BoundarySample> out;
    out.reserve(count);
    const int d = dom.dim;
    for (std::size_t s = 0; s < count; ++s) {
        switch (dom.kind) {
        case DomainKind::Ball: {
            Point nu = d == 1 ? Point{s % 2 ? 1.0 : -1.0, 0.0, 0.0}
                              : sphere_direction(rng, d);
            out.push_back({nu, nu}); // |x| = 1, nu = x
            break;
        }
        case DomainKind::Cylinder: {
            double sgn = (s % 2 == 0) ? -1.0 : 1.0;
            Point x{sgn, 0, 0};
            for (int i = 1; i < d; ++i) x[std::size_t(i)] = u01(rng);
            out.push_back({x, Point{sgn, 0.0, 0.0}});
            break;
        }
        case DomainKind::Box1D: {
            double sgn = (s % 2 == 0) ? -1.0 : 1.0;
            out.push_back({Point{sgn < 0 ? 0.0 : 1.0, 0.0, 0.0}, Point{sgn, 0.0, 0.0}});
            break;
        }
        case DomainKind::Quadratic: {
            Point u = sphere_direction(rng, d);
            double qsum = 0.0;
            for (int i = 0; i < d; ++i)
                qsum += dom.quad_q[std::size_t(i)] * u[std::size_t(i)] * u[std::size_t(i)];
            double t = std::sqrt(dom.quad_c / qsum);
            Point x{0, 0, 0}, nu{0, 0, 0};
            double norm = 0.0;
            for (int i = 0; i < d; ++i) {
                x[std::size_t(i)] = t * u[std::size_t(i)];
                nu[std::size_t(i)] = 2.0 * dom.quad_q[std::size_t(i)] * x[std::size_t(i)];
                norm += nu[std::size_t(i)] * nu[std::size_t(i)];
            }
            norm = std::sqrt(norm);
            for (int i = 0; i < d; ++i) nu[std::size_t(i)] /= norm;
            out.push_back({x, nu});
            break;
        }
        }
    }
    return out;
}

std::vector<BoundarySample> neumann_samples(const DomainDescriptor& dom,
                                            std::size_t count, unsigned seed) {
    std::mt19937 rng(seed ^ 0x7f4a7c15u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<BoundarySample> out;
    if (dom.kind != DomainKind::Cylinder) return out; // other domains: all Dirichlet
    const int d = dom.dim;
    const int nfacets = 2 * (d - 1);
    for (std::size_t s = 0; s < count; ++s) {
        int f = int(s) % nfacets;             // facet: cross-section wall
        int axis = 1 + f / 2;                 // 1..d-1
        double side = (f % 2 == 0) ? 0.0 : 1.0;
        Point x{2.0 * u01(rng) - 1.0, 0, 0};
        for (int i = 1; i < d; ++i) x[std::size_t(i)] = u01(rng);
        x[std::size_t(axis)] = side;
        Point nu{0, 0, 0};
        nu[std::size_t(axis)] = (side == 0.0) ? -1.0 : 1.0;
        out.push_back({x, nu});
    }
    return out;
}

const CheckResult* WeightReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

WeightReport verify_weight(const WeightFunction& w, std::size_t samples, unsigned seed) {
    const DomainDescriptor& dom = w.domain;
    const int d = dom.dim;
    WeightReport rep;

    auto push = [&](const std::string& name, double value, double threshold) {
        CheckResult c{name, value, threshold, value <= threshold};
        rep.all_ok = rep.all_ok && c.ok;
        rep.checks.push_back(std::move(c));
    };

    std::vector<Point> pts = interior_samples(dom, samples, seed);
    double max_eig = -std::numeric_limits<double>::infinity();
    double max_lap_id = 0.0;
    double worst_a = -std::numeric_limits<double>::infinity();  // max of -a
    double worst_g = -std::numeric_limits<double>::infinity();  // max of -g
    double worst_lg = -std::numeric_limits<double>::infinity(); // max of lap g
    for (const Point& x : pts) {
        auto H = w.hess(x);
        max_eig = std::max(max_eig, max_eigenvalue_sym(H, d));
        double tr = 0.0;
        for (int i = 0; i < d; ++i) tr += H[std::size_t(i * d + i)];
        max_lap_id = std::max(max_lap_id, std::abs(tr + w.g(x)));
        worst_a = std::max(worst_a, -w.a(x));
        worst_g = std::max(worst_g, -w.g(x));
        worst_lg = std::max(worst_lg, w.lap_g(x));
    }
    push("hessian_negative_semidefinite", max_eig, 1e-10);
    push("g_matches_minus_laplacian", max_lap_id, 1e-10);
    push("a_nonnegative", worst_a, 1e-10);
    push("g_nonnegative", worst_g, 1e-10);
    push("laplacian_g_nonpositive", worst_lg, 1e-10);

    std::size_t bcount = std::max<std::size_t>(64, samples / 16);
    auto dir = dirichlet_samples(dom, bcount, seed);
    double max_a_dir = 0.0;
    double worst_dgdnu = -std::numeric_limits<double>::infinity();
    for (const auto& b : dir) {
        max_a_dir = std::max(max_a_dir, std::abs(w.a(b.x)));
        worst_dgdnu = std::max(worst_dgdnu, -dot3(w.grad_g(b.x), b.nu));
    }
    push("a_zero_on_dirichlet", max_a_dir, 1e-10);

    auto neu = neumann_samples(dom, bcount, seed);
    double max_flat = 0.0;
    for (const auto& b : neu) {
        max_flat = std::max(max_flat, std::abs(dot3(w.grad(b.x), b.nu)));
        worst_dgdnu = std::max(worst_dgdnu, -dot3(w.grad_g(b.x), b.nu));
    }
    push("grad_a_normal_flat_on_neumann", max_flat, 1e-10);
    push("dg_dnu_nonnegative", worst_dgdnu, 1e-10);
    return rep;
}

namespace {

double reduced_factor(DomainKind kind) {
    switch (kind) {
    case DomainKind::Ball:
    case DomainKind::Cylinder:
        return 2.0;
    case DomainKind::Box1D:
        return 1.0;
    default:
        return qnan();
    }
}

} // namespace

std::vector<IntegrandSample> dirichlet_integrand_const(const WeightFunction& w,
                                                       double rho0, const Point& u,
                                                       const PressureLaw& law,
                                                       std::size_t count,
                                                       unsigned seed) {
    if (!(rho0 > 0.0)) throw VacuumError("dirichlet_integrand_const: vacuum state");
    const double p_over_rho = law.P(rho0) / rho0;
    const double factor = reduced_factor(w.domain.kind);

    std::vector<IntegrandSample> out;
    for (const auto& b : dirichlet_samples(w.domain, count, seed)) {
        IntegrandSample s;
        s.x = b.x;
        Point grad = w.grad(b.x);
        double danu = dot3(grad, b.nu);
        // constant state: Lap sqrt(rho) = 0, grad sqrt(rho) = 0
        s.general = danu * (-p_over_rho) - dot3(u, grad) * dot3(u, b.nu);
        if (std::isfinite(factor)) {
            double un = 0.0;
            switch (w.domain.kind) {
            case DomainKind::Ball:
                un = dot3(u, b.x); // u . x on the unit sphere
                break;
            case DomainKind::Cylinder:
            case DomainKind::Box1D:
                un = u[0];
                break;
            default:
                break;
            }
            s.reduced = factor * (un * un + p_over_rho);
        } else {
            s.reduced = qnan();
        }
        out.push_back(s);
    }
    return out;
}

FacetTrace dirichlet_integrand_2d(const WeightFunction& w, const FluidState2D& s,
                                  const PressureLaw& law) {
    if (w.domain.kind != DomainKind::Cylinder || w.domain.dim != 2)
        throw Error("dirichlet_integrand_2d: cylinder domains only");
    const Grid2D& g = s.rho.grid;
    const std::size_t nx = g.gx.n, ny = g.gy.n;
    const double dx = g.gx.dx(), dy = g.gy.dx();

    // sqrt(rho) and its derivatives on the full grid (traces need one-sided
    // x-stencils and central y-stencils)
    std::vector<double> wv(nx * ny);
    for (std::size_t i = 0; i < nx * ny; ++i) {
        if (s.rho.v[i] <= kVacuumFloor)
            throw VacuumError("dirichlet_integrand_2d: vacuum near boundary");
        wv[i] = std::sqrt(s.rho.v[i]);
    }
    std::vector<double> wx(nx * ny), wxx(nx * ny), wy(nx * ny), wyy(nx * ny);
    std::vector<double> row(nx), drow(nx);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double* src = wv.data() + iy * nx;
        derivative_raw(wx.data() + iy * nx, src, nx, dx, false, 1);
        derivative_raw(wxx.data() + iy * nx, src, nx, dx, false, 2);
    }
    std::vector<double> col(ny), dcol(ny);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) col[iy] = wv[iy * nx + ix];
        derivative_raw(dcol.data(), col.data(), ny, dy, false, 1);
        for (std::size_t iy = 0; iy < ny; ++iy) wy[iy * nx + ix] = dcol[iy];
        derivative_raw(dcol.data(), col.data(), ny, dy, false, 2);
        for (std::size_t iy = 0; iy < ny; ++iy) wyy[iy * nx + ix] = dcol[iy];
    }

    FacetTrace trace;
    auto eval = [&](std::size_t ix, double nux) {
        std::vector<IntegrandSample> vals;
        for (std::size_t iy = 0; iy < ny; ++iy) {
            std::size_t i = iy * nx + ix;
            double x = g.gx.x(ix), y = g.gy.x(iy);
            Point pt{x, y, 0.0};
            Point grad = w.grad(pt);
            double danu = grad[0] * nux;
            double lapw = wxx[i] + wyy[i];
            double grad2 = wx[i] * wx[i] + wy[i] * wy[i];
            double rho = s.rho.v[i];
            double ux = s.ux.v[i], uy = s.uy.v[i];
            double u_dot_grad = ux * grad[0] + uy * grad[1];
            double u_dot_nu = ux * nux;
            IntegrandSample samp;
            samp.x = pt;
            samp.general = danu * (lapw / wv[i] + grad2 / rho - law.P(rho) / rho) -
                           u_dot_grad * u_dot_nu;
            samp.reduced = 2.0 * (ux * ux + law.P(rho) / rho - lapw / wv[i]);
            trace.max_discrepancy =
                std::max(trace.max_discrepancy, std::abs(samp.general - samp.reduced));
            vals.push_back(samp);
        }
        return vals;
    };
    trace.left = eval(0, -1.0);
    trace.right = eval(nx - 1, 1.0);
    return trace;
}

MultiDReport multiD_observable_monitor(const Trajectory2D& traj,
                                       const WeightFunction& w, const PressureLaw& law,
                                       double tol_scale, double flag_tol) {
    MultiDReport rep;
    const std::size_t m = traj.states.size();
    if (m == 0) return rep;
    const Grid2D& g = traj.grid;
    const std::size_t nx = g.gx.n, ny = g.gy.n;

    Field2D a_field = Field2D::sample(g, [&](double x, double y) {
        return w.a(Point{x, y, 0.0});
    });

    rep.times = traj.times;
    rep.I.resize(m);
    std::vector<char> on(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        const FluidState2D& s = traj.states[k];
        Field2D prod(g);
        for (std::size_t i = 0; i < prod.v.size(); ++i)
            prod.v[i] = a_field.v[i] * s.rho.v[i];
        rep.I[k] = integrate2d(prod);

        if (!all_finite(s.ux.v)) continue; // suspended diagnostics: flags off
        // (3.6): sign of the Dirichlet integrand on both facets
        FacetTrace tr = dirichlet_integrand_2d(w, s, law);
        double worst36 = -std::numeric_limits<double>::infinity();
        for (const auto& v : tr.left) worst36 = std::max(worst36, v.general);
        for (const auto& v : tr.right) worst36 = std::max(worst36, v.general);
        // (3.7): u . nu on the cross-section walls
        double worst37 = 0.0;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            worst37 = std::max(worst37, std::abs(s.uy.v[ix]));
            worst37 = std::max(worst37, std::abs(s.uy.v[(ny - 1) * nx + ix]));
        }
        // (3.8): normal derivative of sqrt(rho) on the whole boundary
        double worst38 = 0.0;
        {
            std::vector<double> wv(nx * ny);
            for (std::size_t i = 0; i < nx * ny; ++i) wv[i] = std::sqrt(s.rho.v[i]);
            std::vector<double> d1(nx);
            for (std::size_t iy = 0; iy < ny; ++iy) {
                derivative_raw(d1.data(), wv.data() + iy * nx, nx, g.gx.dx(), false, 1);
                worst38 = std::max({worst38, std::abs(d1[0]), std::abs(d1[nx - 1])});
            }
            std::vector<double> col(ny), dc(ny);
            for (std::size_t ix = 0; ix < nx; ++ix) {
                for (std::size_t iy = 0; iy < ny; ++iy) col[iy] = wv[iy * nx + ix];
                derivative_raw(dc.data(), col.data(), ny, g.gy.dx(), false, 1);
                worst38 = std::max({worst38, std::abs(dc[0]), std::abs(dc[ny - 1])});
            }
        }
        on[k] = worst36 <= 0.0 && worst37 <= flag_tol && worst38 <= flag_tol;
    }

    rep.I0 = rep.I[0];
    {
        const FluidState2D& s0 = traj.states[0];
        Field2D integrand(g);
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix) {
                std::size_t i = g.idx(ix, iy);
                Point grad = w.grad(Point{g.gx.x(ix), g.gy.x(iy), 0.0});
                integrand.v[i] =
                    s0.rho.v[i] * (s0.ux.v[i] * grad[0] + s0.uy.v[i] * grad[1]);
            }
        rep.M0 = integrate2d(integrand);
    }
    if (rep.M0 < 0.0) rep.T_star = -rep.I0 / rep.M0;
    rep.tol = tol_scale * (1.0 + std::abs(rep.I0));

    // windows and the envelope check
    std::size_t k = 0;
    while (k < m) {
        if (!on[k]) {
            ++k;
            continue;
        }
        std::size_t j = k;
        while (j + 1 < m && on[j + 1]) ++j;
        rep.hypothesis_windows.push_back({rep.times[k], rep.times[j]});
        k = j + 1;
    }
    rep.hypothesis_ever = !rep.hypothesis_windows.empty();
    for (std::size_t i = 0; i < m; ++i) {
        if (!on[i]) continue;
        bool ok = rep.I[i] <= rep.I0 + rep.M0 * rep.times[i] + rep.tol;
        rep.bound_checks.emplace_back(rep.times[i], ok);
        if (!ok) rep.bound_all_ok = false;
    }
    return rep;
}

} // namespace qhdlab
