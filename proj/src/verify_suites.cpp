// Built-in verification suites behind `qhdlab verify <name>`: the module
// acceptance properties at pinned desk-scale parameters. Values are
// worst-case margins; a check passes when value <= threshold.

#include "qhdlab/scenario.hpp"

#include "qhdlab/kernels/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qhdlab {

namespace {

using std::numbers::pi;

void push(std::vector<SuiteCheck>& out, const std::string& name, double value,
          double threshold) {
    out.push_back({name, value, threshold, value <= threshold});
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sup_err_vs(const ScalarField& f, const std::function<double(double)>& ref) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        m = std::max(m, std::abs(f.v[i] - ref(f.grid.x(i))));
    return m;
}

void numerics_suite(std::vector<SuiteCheck>& out) {
    Grid1D gb(0.0, 1.0, 129, false);
    BoundaryKind bb = MonitoredBc{};

    auto linear = ScalarField::sample(gb, [](double x) { return x; });
    push(out, "numerics/derivative_linear_exact",
         sup_err_vs(derivative(linear, 1, bb), [](double) { return 1.0; }), 1e-12);

    auto quad = ScalarField::sample(gb, [](double x) { return x * x; });
    push(out, "numerics/derivative_quadratic_exact",
         sup_err_vs(derivative(quad, 2, bb), [](double) { return 2.0; }), 1e-10);

    // second-order convergence of d/dx sin on a periodic grid
    auto sin_err = [&](std::size_t n) {
        Grid1D g(0.0, 2.0 * pi, n, true);
        auto f = ScalarField::sample(g, [](double x) { return std::sin(x); });
        return sup_err_vs(derivative(f, 1, PeriodicBc{}), [](double x) {
            return std::cos(x);
        });
    };
    double e64 = sin_err(64), e128 = sin_err(128);
    push(out, "numerics/derivative_order2_ratio_low", 3.5 - e64 / e128, 0.0);
    push(out, "numerics/derivative_order2_ratio_high", e64 / e128 - 4.5, 0.0);

    Grid1D gq(0.0, 1.0, 1025, false);
    auto hump = ScalarField::sample(gq, [](double x) { return x * (1.0 - x); });
    push(out, "numerics/integrate_hump",
         std::abs(integrate(hump) - 1.0 / 6.0), 1e-6);

    // discrete integration by parts on a periodic grid
    Grid1D gp(0.0, 2.0 * pi, 128, true);
    auto f = ScalarField::sample(gp, [](double x) { return std::sin(x) + 0.3 * std::cos(2 * x); });
    auto g2 = ScalarField::sample(gp, [](double x) { return std::cos(3 * x); });
    auto df = derivative(f, 1, PeriodicBc{});
    auto dg = derivative(g2, 1, PeriodicBc{});
    std::vector<double> prod(gp.n);
    for (std::size_t i = 0; i < gp.n; ++i)
        prod[i] = f.v[i] * dg.v[i] + df.v[i] * g2.v[i];
    push(out, "numerics/integration_by_parts",
         std::abs(integrate_raw(prod.data(), gp.n, gp.dx(), true)), 1e-12);
}

void physics_suite(std::vector<SuiteCheck>& out) {
    PressureLaw law = PressureLaw::power(2.0);
    LawPoint p = law_eval(law, 1.0);
    push(out, "physics/law_gamma2_at_unit_density",
         std::abs(p.P - 1.0) + std::abs(p.h - 2.0) + std::abs(p.g - 1.0), 1e-14);

    // rho h - g = P for power laws
    double worst = 0.0;
    for (double gamma : {1.5, 2.0, 3.0}) {
        PressureLaw l = PressureLaw::power(gamma);
        for (double rho : {1e-3, 0.1, 1.0, 4.0}) {
            double lhs = rho * l.h(rho) - l.g(rho);
            worst = std::max(worst, std::abs(lhs - l.P(rho)) / (1.0 + l.P(rho)));
        }
    }
    push(out, "physics/rho_h_minus_g_equals_P", worst, 1e-12);

    LawAssumptionReport rep = law_assumption_check(law, 10.0, 1.0);
    push(out, "physics/gamma2_assumptions", rep.all_ok() ? 0.0 : 1.0, 0.5);

    Grid1D g(0.0, 2.0 * pi, 256, true);
    auto rho = ScalarField::sample(g, [](double x) { return 1.0 + 0.5 * std::cos(x); });
    ScalarField b = bohm(rho, PeriodicBc{});
    // closed form: rho''/(2 rho) - rho'^2/(4 rho^2)
    double err = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double x = g.x(i), r = 1.0 + 0.5 * std::cos(x);
        double rp = -0.5 * std::sin(x), rpp = -0.5 * std::cos(x);
        double ref = rpp / (2.0 * r) - rp * rp / (4.0 * r * r);
        err = std::max(err, std::abs(b.v[i] - ref));
    }
    push(out, "physics/bohm_closed_form", err, 1e-3);

    // Madelung round trip
    auto u = ScalarField::sample(g, [](double x) { return 0.05 * std::sin(x); });
    Grid1D g512(0.0, 2.0 * pi, 512, true);
    auto rho5 = ScalarField::sample(g512, [](double x) { return 1.0 + 0.1 * std::cos(x); });
    auto u5 = ScalarField::sample(g512, [](double x) { return 0.05 * std::sin(x); });
    FluidState fs{0.0, rho5, u5};
    WaveState ws = madelung_inverse(fs, 1.0, MadelungGauge{0, 0.0});
    FluidState back = madelung_forward(ws);
    push(out, "physics/madelung_round_trip",
         std::max(max_abs_diff(back.rho.v, rho5.v), max_abs_diff(back.u.v, u5.v)),
         1e-6);
}

void identities_suite(std::vector<SuiteCheck>& out) {
    // periodic energy residual at n = 128 vs 256 with (dx, dt) halving
    auto energy_res = [&](std::size_t n, double dt) {
        Grid1D g(0.0, 2.0 * pi, n, true);
        auto rho = ScalarField::sample(g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
        auto u = ScalarField(g, 0.0);
        QhdConfig qc;
        qc.bc = PeriodicBc{};
        qc.dt = dt;
        qc.t_final = 0.1;
        qc.record_every = 200;
        PressureLaw law = PressureLaw::sum({{0.5, 2.0}});
        Trajectory t = qhd_run(FluidState{0.0, rho, u}, law, qc);
        double worst = 0.0;
        for (const auto& r : t.records) worst = std::max(worst, std::abs(r.res_energy));
        return worst;
    };
    double r128 = energy_res(128, 2e-5);
    double r256 = energy_res(256, 5e-6);
    push(out, "identities/energy_residual_n128", r128, 1e-5);
    push(out, "identities/energy_residual_ratio", 1.8 - r128 / r256, 0.0);

    // bounded observable-identity residual, n = 128 vs 255
    auto obs_res = [&](std::size_t n) {
        Grid1D g(0.0, 1.0, n, false);
        auto rho = ScalarField::sample(g, [](double x) { return 1.0 + 0.1 * std::cos(pi * x); });
        auto u = ScalarField(g, 0.0);
        QhdConfig qc;
        qc.bc = MonitoredBc{};
        qc.t_final = 0.02;
        qc.record_every = 20;
        PressureLaw law = PressureLaw::sum({{0.5, 2.0}});
        Trajectory t = qhd_run(FluidState{0.0, rho, u}, law, qc);
        double worst = 0.0;
        for (const auto& r : t.records)
            if (std::isfinite(r.res_dI)) worst = std::max(worst, std::abs(r.res_dI));
        return worst;
    };
    double o128 = obs_res(128);
    double o255 = obs_res(255);
    push(out, "identities/observable_residual_n128", o128, 1e-3);
    push(out, "identities/observable_residual_ratio", 1.8 - o128 / o255, 0.0);
}

void weights_suite(std::vector<SuiteCheck>& out) {
    for (int d = 1; d <= 3; ++d) {
        WeightFunction w = make_weight(DomainDescriptor::ball(d));
        WeightReport rep = verify_weight(w, 2000);
        push(out, "weights/ball_d" + std::to_string(d), rep.all_ok ? 0.0 : 1.0, 0.5);
        push(out, "weights/ball_d" + std::to_string(d) + "_laplacian",
             std::abs(-w.g(Point{0, 0, 0}) + 2.0 * d), 1e-12);
    }
    push(out, "weights/cylinder",
         verify_weight(make_weight(DomainDescriptor::cylinder(2)), 2000).all_ok ? 0.0 : 1.0,
         0.5);
    push(out, "weights/box",
         verify_weight(make_weight(DomainDescriptor::box1d()), 2000).all_ok ? 0.0 : 1.0,
         0.5);
    DomainDescriptor quad = DomainDescriptor::quadratic(2, 0.5, {0.5, 0.5, 0.5});
    push(out, "weights/quadratic",
         verify_weight(make_weight(quad), 2000).all_ok ? 0.0 : 1.0, 0.5);
    double det = 1.0;
    for (int i = 0; i < quad.dim; ++i) det *= 2.0 * quad.quad_q[std::size_t(i)];
    push(out, "weights/quadratic_monge_ampere", std::abs(det - 1.0), 0.0);

    PressureLaw law = PressureLaw::power(2.0);
    for (const char* kind : {"ball", "cylinder"}) {
        WeightFunction w = make_weight(kind == std::string("ball")
                                           ? DomainDescriptor::ball(3)
                                           : DomainDescriptor::cylinder(2));
        auto samples = dirichlet_integrand_const(w, 1.3, Point{0.3, -0.2, 0.1}, law);
        double worst = 0.0;
        for (const auto& s : samples)
            worst = std::max(worst, std::abs(s.general - s.reduced));
        push(out, std::string("weights/") + kind + "_reduced_integrand", worst, 1e-10);
    }
}

void stationary_suite(std::vector<SuiteCheck>& out) {
    PressureLaw law = PressureLaw::power(2.0);

    StationaryParams pc;
    pc.law = law;
    pc.J = 0.0;
    pc.w0 = 1.0;
    pc.dw0 = 0.0;
    pc.K = law.h(1.0);
    pc.span = 1.0;
    StationaryProfile prof = stationary_shoot(pc, 1e-3);
    double dev = 0.0;
    for (std::size_t i = 0; i < prof.n_valid; ++i)
        dev = std::max(dev, std::abs(prof.w[i] - 1.0));
    push(out, "stationary/constant_fixed_point", dev, 1e-12);

    StationaryParams pp = pc;
    pp.w0 = 1.0 + 1e-3;
    auto endpoint = [&](double dx) {
        StationaryProfile p = stationary_shoot(pp, dx);
        return p.w.back();
    };
    double w1 = endpoint(4e-3), w2 = endpoint(2e-3), w3 = endpoint(1e-3);
    double ratio = std::abs(w1 - w2) / std::abs(w2 - w3);
    push(out, "stationary/order4_ratio_low", 11.0 - ratio, 0.0);
    push(out, "stationary/order4_ratio_high", ratio - 22.0, 0.0);

    StationaryProfile fine = stationary_shoot(pp, 1e-3);
    ScalarField res = stationary_residual(fine.w_field(), pp);
    double worst = 0.0;
    for (double v : res.v) worst = std::max(worst, std::abs(v));
    push(out, "stationary/shot_residual", worst, 1e-8);
}

} // namespace

std::vector<SuiteCheck> verify_suite(const std::string& which) {
    std::vector<SuiteCheck> out;
    bool all = which == "all";
    if (all || which == "numerics") numerics_suite(out);
    if (all || which == "physics") physics_suite(out);
    if (all || which == "identities") identities_suite(out);
    if (all || which == "weights") weights_suite(out);
    if (all || which == "stationary") stationary_suite(out);
    if (out.empty())
        throw ConfigError("unknown verify suite '" + which +
                          "' (use all, numerics, physics, identities, weights, stationary)");
    return out;
}

} // namespace qhdlab
