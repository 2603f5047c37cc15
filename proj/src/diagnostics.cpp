#include "qhdlab/diagnostics.hpp"

#include "qhdlab/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace qhdlab {

namespace {

double min_rho_of(const FluidState& s) {
    return kernels::ops().min_v(s.rho.v.data(), s.rho.size());
}

// trapezoid of the series (t_k, y_k) up to each index
std::vector<double> cumtrapz(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t k = 1; k < t.size(); ++k)
        out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
    return out;
}

// d/dt of a snapshot series; central in the interior, one-sided at the ends
std::vector<double> ddt(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t m = t.size();
    std::vector<double> out(m, qnan());
    if (m < 2) return out;
    for (std::size_t k = 1; k + 1 < m; ++k)
        out[k] = (y[k + 1] - y[k - 1]) / (t[k + 1] - t[k - 1]);
    // second-order one-sided ends when the spacing is uniform enough
    auto uniform3 = [&](std::size_t a) {
        double d1 = t[a + 1] - t[a], d2 = t[a + 2] - t[a + 1];
        return std::abs(d1 - d2) <= 1e-9 * std::max(d1, d2);
    };
    if (m >= 3 && uniform3(0)) {
        double dt0 = t[1] - t[0];
        out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt0);
    } else {
        out[0] = (y[1] - y[0]) / (t[1] - t[0]);
    }
    if (m >= 3 && uniform3(m - 3)) {
        double dt0 = t[m - 1] - t[m - 2];
        out[m - 1] = (3.0 * y[m - 1] - 4.0 * y[m - 2] + y[m - 3]) / (2.0 * dt0);
    } else {
        out[m - 1] = (y[m - 1] - y[m - 2]) / (t[m - 1] - t[m - 2]);
    }
    return out;
}

std::vector<TimeWindow> windows_from_flags(const std::vector<double>& t,
                                           const std::vector<char>& on) {
    std::vector<TimeWindow> w;
    std::size_t k = 0;
    while (k < t.size()) {
        if (!on[k]) {
            ++k;
            continue;
        }
        std::size_t j = k;
        while (j + 1 < t.size() && on[j + 1]) ++j;
        w.push_back({t[k], t[j]});
        k = j + 1;
    }
    return w;
}

} // namespace

double energy(const FluidState& s, const PressureLaw& law, double floor) {
    const auto& k = kernels::ops();
    const std::size_t n = s.rho.size();
    if (min_rho_of(s) <= floor) throw VacuumError("energy: density at vacuum floor");

    std::vector<double> w(n), dw(n), integrand(n);
    k.sqrt_v(w.data(), s.rho.v.data(), n);
    derivative_raw(dw.data(), w.data(), n, s.rho.grid.dx(), s.rho.grid.periodic, 1);
    for (std::size_t i = 0; i < n; ++i) {
        double rho = s.rho.v[i], u = s.u.v[i];
        integrand[i] = 0.5 * rho * u * u + law.g(rho) + dw[i] * dw[i];
    }
    return integrate_raw(integrand.data(), n, s.rho.grid.dx(), s.rho.grid.periodic);
}

namespace {

// shared assembly for K and B: returns bohm term (sqrt rho)_xx / sqrt rho
std::vector<double> bohm_term(const FluidState& s, double floor, const char* who) {
    const auto& k = kernels::ops();
    const std::size_t n = s.rho.size();
    if (min_rho_of(s) <= floor) throw VacuumError(std::string(who) + ": density at vacuum floor");
    std::vector<double> w(n), d2(n), out(n);
    k.sqrt_v(w.data(), s.rho.v.data(), n);
    derivative_raw(d2.data(), w.data(), n, s.rho.grid.dx(), s.rho.grid.periodic, 2);
    k.div(out.data(), d2.data(), w.data(), n);
    return out;
}

} // namespace

ScalarField iso_energy_K(const FluidState& s, const PressureLaw& law, double floor) {
    std::vector<double> q = bohm_term(s, floor, "iso_energy_K");
    ScalarField out(s.rho.grid);
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        double u = s.u.v[i];
        out.v[i] = 0.5 * u * u + law.h(s.rho.v[i]) - q[i];
    }
    return out;
}

ScalarField indicator_B_field(const FluidState& s, const PressureLaw& law, double floor) {
    std::vector<double> q = bohm_term(s, floor, "indicator_B");
    ScalarField out(s.rho.grid);
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        double u = s.u.v[i], rho = s.rho.v[i];
        out.v[i] = u * u + law.P(rho) / rho - q[i];
    }
    return out;
}

std::pair<double, double> boundary_indicator_B(const FluidState& s,
                                               const PressureLaw& law, double floor) {
    ScalarField b = indicator_B_field(s, law, floor);
    return {b.v.front(), b.v.back()};
}

double observable_I(const FluidState& s, const ScalarField& weight) {
    const auto& k = kernels::ops();
    if (weight.grid != s.rho.grid)
        throw Error("observable_I: weight grid mismatch");
    if (k.min_v(weight.v.data(), weight.size()) < 0.0)
        throw Error("observable_I: negative weight rejected");
    std::vector<double> prod(weight.size());
    k.mul(prod.data(), weight.v.data(), s.rho.v.data(), weight.size());
    return integrate_raw(prod.data(), weight.size(), weight.grid.dx(),
                         weight.grid.periodic);
}

ScalarField default_weight(const Grid1D& g) {
    return ScalarField::sample(g, [&](double x) { return (x - g.x_lo) * (g.x_hi - x); });
}

DiagnosticsRecord snapshot_record(const FluidState& s, const PressureLaw& law,
                                  const ScalarField& weight, double floor) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.mass = integrate(s.rho);
    r.min_rho = min_rho_of(s);
    if (!(r.min_rho > floor) || !all_finite(s.u.v)) return r; // diagnostics suspended
    r.E = energy(s, law, floor);
    r.I = observable_I(s, weight);
    ScalarField K = iso_energy_K(s, law, floor);
    r.K0 = K.v.front();
    r.K1 = K.v.back();
    auto [b0, b1] = boundary_indicator_B(s, law, floor);
    r.B0 = b0;
    r.B1 = b1;
    return r;
}

BlowupReport initial_data_report(const ScalarField& rho_i, const ScalarField& u_i,
                                 const ScalarField& weight) {
    const auto& k = kernels::ops();
    const std::size_t n = weight.size();
    if (k.min_v(weight.v.data(), n) < 0.0)
        throw Error("initial_data_report: negative weight rejected");
    if (k.min_v(rho_i.v.data(), n) <= 0.0)
        throw Error("initial_data_report: rho_I must be positive");

    BlowupReport rep;
    FluidState s{0.0, rho_i, u_i};
    rep.I0 = observable_I(s, weight);

    BoundaryKind bc = weight.grid.periodic ? BoundaryKind(PeriodicBc{})
                                           : BoundaryKind(MonitoredBc{});
    ScalarField dw = derivative(weight, 1, bc);
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i)
        integrand[i] = dw.v[i] * rho_i.v[i] * u_i.v[i];
    rep.M0 = integrate_raw(integrand.data(), n, weight.grid.dx(), weight.grid.periodic);
    if (rep.M0 < 0.0) rep.T_star = -rep.I0 / rep.M0;
    return rep;
}

BlowupReport theorem2_monitor(const Trajectory& traj, BlowupReport rep,
                              double tol_scale) {
    const std::size_t m = traj.records.size();
    rep.tol = tol_scale * (1.0 + std::abs(rep.I0));
    std::vector<double> t(m);
    std::vector<char> on(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        const auto& r = traj.records[k];
        t[k] = r.t;
        on[k] = std::isfinite(r.B0) && std::isfinite(r.B1) && r.B0 <= 0.0 && r.B1 <= 0.0;
    }
    rep.hypothesis_windows = windows_from_flags(t, on);
    rep.hypothesis_ever = !rep.hypothesis_windows.empty();
    rep.bound_checks.clear();
    rep.bound_all_ok = true;
    for (std::size_t k = 0; k < m; ++k) {
        if (!on[k]) continue;
        const auto& r = traj.records[k];
        bool ok = r.I <= rep.I0 + rep.M0 * r.t + rep.tol;
        rep.bound_checks.emplace_back(r.t, ok);
        if (!ok) rep.bound_all_ok = false;
    }
    if (traj.status == RunStatus::VacuumEvent) rep.vacuum_time = traj.event_time;
    return rep;
}

std::vector<double> energy_balance_residual(const Trajectory& traj,
                                            const PressureLaw& law) {
    (void)law; // records already carry E and K; kept for interface symmetry
    const std::size_t m = traj.records.size();
    std::vector<double> r(m, qnan());
    if (m == 0) return r;
    const bool periodic = traj.grid.periodic;

    std::vector<double> t(m), bracket(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        t[k] = traj.records[k].t;
        if (!periodic) {
            const auto& s = traj.states[k];
            const auto& rec = traj.records[k];
            if (!std::isfinite(rec.K0)) {
                bracket[k] = qnan();
                continue;
            }
            double left = s.u.v.front() * s.rho.v.front() * rec.K0;
            double right = s.u.v.back() * s.rho.v.back() * rec.K1;
            bracket[k] = right - left;
        }
    }
    std::vector<double> acc = cumtrapz(t, bracket);
    const double E0 = traj.records[0].E;
    for (std::size_t k = 0; k < m; ++k)
        r[k] = traj.records[k].E - E0 + (periodic ? 0.0 : acc[k]);
    return r;
}

std::vector<double> observable_identity_residual(const Trajectory& traj,
                                                 const PressureLaw& law) {
    const std::size_t m = traj.records.size();
    std::vector<double> r(m, qnan());
    if (m < 3) return r;
    if (traj.grid.periodic)
        throw Error("observable_identity_residual: bounded-domain runs only");
    if (std::abs(traj.grid.x_lo) > 1e-12 || std::abs(traj.grid.x_hi - 1.0) > 1e-12)
        throw Error("observable_identity_residual: identity is stated on [0,1]");

    std::vector<double> t(m), I(m), Q(m, qnan()), rb0(m, qnan()), rb1(m, qnan());
    const std::size_t n = traj.grid.n;
    std::vector<double> w(n), dw(n), integrand(n);
    for (std::size_t k = 0; k < m; ++k) {
        const auto& rec = traj.records[k];
        t[k] = rec.t;
        I[k] = rec.I;
        if (!std::isfinite(rec.E)) continue; // suspended past vacuum
        const auto& s = traj.states[k];
        kernels::ops().sqrt_v(w.data(), s.rho.v.data(), n);
        derivative_raw(dw.data(), w.data(), n, traj.grid.dx(), false, 1);
        for (std::size_t i = 0; i < n; ++i) {
            double rho = s.rho.v[i], u = s.u.v[i];
            integrand[i] = rho * u * u + law.P(rho) + 2.0 * dw[i] * dw[i];
        }
        Q[k] = integrate_raw(integrand.data(), n, traj.grid.dx(), false);
        rb0[k] = s.rho.v.front() * rec.B0;
        rb1[k] = s.rho.v.back() * rec.B1;
    }

    // M0 from the initial snapshot with the default x(1-x) weight
    BlowupReport init =
        initial_data_report(traj.states[0].rho, traj.states[0].u, traj.weight);

    std::vector<double> dIdt = ddt(t, I);
    std::vector<double> accQ = cumtrapz(t, Q);
    std::vector<double> acc0 = cumtrapz(t, rb0);
    std::vector<double> acc1 = cumtrapz(t, rb1);
    for (std::size_t k = 0; k < m; ++k)
        r[k] = dIdt[k] - (init.M0 - 2.0 * accQ[k] + acc1[k] + acc0[k]);
    return r;
}

Theorem4Report theorem4_monitor(const Trajectory& traj, const PressureLaw& law,
                                const Theorem4Params& params, double tol_scale) {
    if (!(params.alpha > 1.0)) throw Error("theorem4_monitor: alpha must exceed 1");
    if (!(params.bigM > 0.0)) throw Error("theorem4_monitor: M must be positive");

    Theorem4Report rep;
    rep.law_report = law_assumption_check(law, 10.0, params.lambda);
    if (!rep.law_report.all_ok())
        throw Error("theorem4_monitor: pressure assumptions fail for lambda");

    const std::size_t m = traj.records.size();
    if (m == 0) return rep;

    rep.I0 = traj.records[0].I;
    rep.E0 = traj.records[0].E;
    {
        BlowupReport init =
            initial_data_report(traj.states[0].rho, traj.states[0].u, traj.weight);
        rep.M0 = init.M0;
    }

    const double umax = std::max(std::abs(params.u0), std::abs(params.u1));
    const double cmin = std::min(params.lambda, 2.0);
    rep.tol = tol_scale * (1.0 + std::abs(rep.I0));

    std::vector<double> t(m), rho0(m, 0.0), rho1(m, 0.0);
    std::vector<char> on(m, 0);
    rep.max_K_gap = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto& rec = traj.records[k];
        t[k] = rec.t;
        rho0[k] = traj.states[k].rho.v.front();
        rho1[k] = traj.states[k].rho.v.back();
        if (std::isfinite(rec.K0) && std::isfinite(rec.K1))
            rep.max_K_gap = std::max(rep.max_K_gap, std::abs(rec.K0 - rec.K1));
        double upper = umax > 0.0 ? -params.alpha * umax * umax : 0.0;
        on[k] = std::isfinite(rec.K0) && rec.K0 >= -params.bigM && rec.K0 <= upper;
    }
    rep.condition_windows = windows_from_flags(t, on);
    rep.condition_ever = !rep.condition_windows.empty();

    std::vector<double> acc0 = cumtrapz(t, rho0);
    std::vector<double> acc1 = cumtrapz(t, rho1);

    rep.branch.assign(m, -1);
    rep.envelope.assign(m, qnan());
    for (std::size_t k = 0; k < m; ++k) {
        double tk = t[k];
        if (umax == 0.0) {
            rep.branch[k] = 3;
            rep.envelope[k] = rep.I0 + tk * (rep.M0 - 2.0 * rep.E0 * cmin);
        } else if (rep.M0 < 0.0) {
            rep.branch[k] = 0;
            rep.envelope[k] = rep.I0 + rep.M0 * tk;
        } else {
            double thr = 2.0 * rep.M0 / (umax * umax);
            if (acc0[k] >= thr || acc1[k] >= thr) {
                rep.branch[k] = 1;
                rep.envelope[k] = rep.I0 - rep.M0 * tk * (2.0 * params.alpha - 2.0);
            } else {
                rep.branch[k] = 2;
                rep.envelope[k] =
                    rep.I0 + rep.M0 * tk -
                    cmin * tk * tk * (rep.E0 - 4.0 * rep.M0 * params.bigM / umax);
            }
        }
    }

    // proof-side "E(0) large enough" clauses
    if (umax == 0.0) {
        rep.energy_threshold_held = rep.E0 >= rep.M0 / (2.0 * cmin);
    } else if (rep.M0 >= 0.0) {
        rep.energy_threshold_held = rep.E0 >= 4.0 * rep.M0 * params.bigM / umax;
    }

    rep.bound_checks.clear();
    rep.bound_all_ok = true;
    for (std::size_t k = 0; k < m; ++k) {
        if (!on[k] || !rep.energy_threshold_held) continue;
        bool ok = traj.records[k].I <= rep.envelope[k] + rep.tol;
        rep.bound_checks.emplace_back(t[k], ok);
        if (!ok) rep.bound_all_ok = false;
    }
    return rep;
}

VacuumEventReport blowup_detect(const Trajectory& traj, double floor) {
    VacuumEventReport rep;
    for (std::size_t k = 0; k < traj.records.size(); ++k) {
        if (traj.records[k].min_rho <= floor) {
            rep.occurred = true;
            rep.t = traj.records[k].t;
            const auto& rho = traj.states[k].rho.v;
            std::size_t cnt = 0;
            for (double x : rho)
                if (x < 10.0 * floor) ++cnt;
            rep.fraction_near_vacuum = double(cnt) / double(rho.size());
            return rep;
        }
    }
    if (traj.status == RunStatus::VacuumEvent) {
        rep.occurred = true;
        rep.t = traj.event_time;
        // event landed between snapshots; use the last stored state
        if (!traj.states.empty()) {
            const auto& rho = traj.states.back().rho.v;
            std::size_t cnt = 0;
            for (double x : rho)
                if (x < 10.0 * floor) ++cnt;
            rep.fraction_near_vacuum = double(cnt) / double(rho.size());
        }
    }
    return rep;
}

} // namespace qhdlab
