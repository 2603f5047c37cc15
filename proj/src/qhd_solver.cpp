#include "qhdlab/qhd_solver.hpp"

#include "qhdlab/kernels/kernels.hpp"

#include <cmath>

namespace qhdlab {

namespace {

constexpr std::size_t kGhost = 2;

// Workspace with two ghost layers per side. Extended index e(i) = i+2 for
// i in [-2, n+1]; the bohm buffer holds [-1, n] at b(i) = i+1.
struct RhsWork {
    std::size_t n = 0;
    double dx = 0.0;
    std::vector<double> rho_e, m_e, w_e, u_e, p_e, flux_e, lap_e, bohm_e, dbohm;

    explicit RhsWork(const Grid1D& g) : n(g.n), dx(g.dx()) {
        const std::size_t ne = n + 2 * kGhost;
        rho_e.resize(ne);
        m_e.resize(ne);
        w_e.resize(ne);
        u_e.resize(ne);
        p_e.resize(ne);
        flux_e.resize(ne);
        lap_e.resize(n + 2);
        bohm_e.resize(n + 2);
        dbohm.resize(n);
    }
};

void fill_ghosts(RhsWork& wk, const double* rho, const double* m,
                 const BoundaryKind& bc) {
    const std::size_t n = wk.n;
    std::copy(rho, rho + n, wk.rho_e.begin() + kGhost);
    std::copy(m, m + n, wk.m_e.begin() + kGhost);

    if (is_periodic(bc)) {
        for (std::size_t k = 1; k <= kGhost; ++k) {
            wk.rho_e[kGhost - k] = rho[n - k];
            wk.m_e[kGhost - k] = m[n - k];
            wk.rho_e[kGhost + n - 1 + k] = rho[k - 1];
            wk.m_e[kGhost + n - 1 + k] = m[k - 1];
        }
        return;
    }

    // rho_x = 0 at both walls: even reflection about the endpoint
    for (std::size_t k = 1; k <= kGhost; ++k) {
        wk.rho_e[kGhost - k] = rho[k];
        wk.rho_e[kGhost + n - 1 + k] = rho[n - 1 - k];
    }

    if (const auto* d = std::get_if<DirichletVelocityBc>(&bc)) {
        // momentum odd about the pinned wall value rho_wall * u_wall
        const double m0 = rho[0] * d->u0;
        const double m1 = rho[n - 1] * d->u1;
        for (std::size_t k = 1; k <= kGhost; ++k) {
            wk.m_e[kGhost - k] = 2.0 * m0 - m[k];
            wk.m_e[kGhost + n - 1 + k] = 2.0 * m1 - m[n - 1 - k];
        }
    } else {
        // monitored: linear extrapolation of the momentum
        for (std::size_t k = 1; k <= kGhost; ++k) {
            wk.m_e[kGhost - k] = double(k + 1) * m[0] - double(k) * m[1];
            wk.m_e[kGhost + n - 1 + k] =
                double(k + 1) * m[n - 1] - double(k) * m[n - 2];
        }
    }
}

// rho and m given pointwise; writes drho, dmom (each length n)
void rhs_core(RhsWork& wk, const double* rho, const double* m,
              const PressureLaw& law, const QhdConfig& cfg, double* drho,
              double* dmom) {
    const auto& k = kernels::ops();
    const std::size_t n = wk.n, ne = n + 2 * kGhost;
    const double inv2dx = 1.0 / (2.0 * wk.dx);

    fill_ghosts(wk, rho, m, cfg.bc);

    // Bohm potential on [-1, n]
    k.sqrt_v(wk.w_e.data(), wk.rho_e.data(), ne);
    k.lap_c(wk.lap_e.data(), wk.w_e.data() + kGhost - 1, 1.0 / (wk.dx * wk.dx), n + 2);
    k.div(wk.bohm_e.data(), wk.lap_e.data(), wk.w_e.data() + kGhost - 1, n + 2);

    // advective flux rho u^2 + P on the full extended range
    k.div(wk.u_e.data(), wk.m_e.data(), wk.rho_e.data(), ne);
    law.P_arr(wk.p_e.data(), wk.rho_e.data(), ne);
    k.mul(wk.flux_e.data(), wk.m_e.data(), wk.u_e.data(), ne);
    k.axpby(wk.flux_e.data(), 1.0, wk.flux_e.data(), 1.0, wk.p_e.data(), ne);

    k.diff_c(drho, wk.m_e.data() + kGhost, -inv2dx, n);
    k.diff_c(dmom, wk.flux_e.data() + kGhost, -inv2dx, n);
    k.diff_c(wk.dbohm.data(), wk.bohm_e.data() + 1, 0.5 * cfg.eps2 * inv2dx, n);
    k.fmacc(dmom, rho, wk.dbohm.data(), n);

    if (const auto* d = std::get_if<DirichletVelocityBc>(&cfg.bc)) {
        // pinned velocity: the wall momentum follows the wall density
        dmom[0] = d->u0 * drho[0];
        dmom[n - 1] = d->u1 * drho[n - 1];
    }
}

} // namespace

QhdRhs qhd_rhs(const FluidState& s, const PressureLaw& law, const QhdConfig& cfg) {
    const auto& k = kernels::ops();
    const std::size_t n = s.rho.size();
    if (is_periodic(cfg.bc) != s.rho.grid.periodic)
        throw Error("qhd_rhs: boundary kind disagrees with grid periodicity");
    if (k.min_v(s.rho.v.data(), n) <= cfg.vacuum_floor)
        throw VacuumError("qhd_rhs: density at or below vacuum floor");

    RhsWork wk(s.rho.grid);
    std::vector<double> m(n);
    k.mul(m.data(), s.rho.v.data(), s.u.v.data(), n);

    QhdRhs out{ScalarField(s.rho.grid), ScalarField(s.rho.grid)};
    rhs_core(wk, s.rho.v.data(), m.data(), law, cfg, out.drho_dt.v.data(),
             out.dmom_dt.v.data());
    if (!all_finite(out.drho_dt.v) || !all_finite(out.dmom_dt.v))
        throw Error("qhd_rhs: non-finite right-hand side");
    return out;
}

Trajectory qhd_run(const FluidState& ic, const PressureLaw& law, const QhdConfig& cfg,
                   const ScalarField* weight) {
    const auto& k = kernels::ops();
    const Grid1D& g = ic.rho.grid;
    const std::size_t n = g.n;

    if (!(cfg.t_final > 0.0)) throw Error("qhd_run: t_final must be positive");
    if (!(cfg.sigma > 0.0 && cfg.sigma <= 1.0))
        throw Error("qhd_run: sigma must lie in (0,1]");
    if (!(cfg.eps2 > 0.0)) throw Error("qhd_run: eps2 must be positive");
    if (is_periodic(cfg.bc) != g.periodic)
        throw Error("qhd_run: boundary kind disagrees with grid periodicity");
    if (k.min_v(ic.rho.v.data(), n) <= cfg.vacuum_floor)
        throw VacuumError("qhd_run: initial density at or below vacuum floor");

    Trajectory traj;
    traj.grid = g;
    traj.law = law;
    traj.bc = cfg.bc;
    traj.weight = weight ? *weight : default_weight(g);

    double dt_raw = cfg.dt.value_or(cfg.sigma * g.dx() * g.dx());
    std::size_t nsteps = std::max<std::size_t>(1, std::size_t(std::llround(cfg.t_final / dt_raw)));
    const double dt = cfg.t_final / double(nsteps);
    traj.dt = dt;

    std::vector<double> rho(ic.rho.v), m(n);
    k.mul(m.data(), rho.data(), ic.u.v.data(), n);
    if (const auto* d = std::get_if<DirichletVelocityBc>(&cfg.bc)) {
        m[0] = rho[0] * d->u0;
        m[n - 1] = rho[n - 1] * d->u1;
    }

    RhsWork wk(g);
    std::vector<double> kr1(n), km1(n), kr2(n), km2(n), kr3(n), km3(n), kr4(n), km4(n);
    std::vector<double> rs(n), ms(n);

    auto record = [&](double t) {
        FluidState s;
        s.t = t;
        s.rho = ScalarField(g);
        s.rho.v = rho;
        s.u = ScalarField(g);
        double minr = k.min_v(rho.data(), n);
        if (minr > cfg.vacuum_floor)
            k.div(s.u.v.data(), m.data(), rho.data(), n);
        else
            std::fill(s.u.v.begin(), s.u.v.end(), qnan());
        traj.records.push_back(snapshot_record(s, law, traj.weight, cfg.vacuum_floor));
        traj.states.push_back(std::move(s));
    };

    // vacuum contact inside a stage aborts the step
    auto stage_ok = [&](const std::vector<double>& r) {
        return k.min_v(r.data(), n) > cfg.vacuum_floor;
    };

    record(0.0);
    double t = 0.0;
    for (std::size_t step = 0; step < nsteps; ++step) {
        bool vacuum = false;
        do {
            rhs_core(wk, rho.data(), m.data(), law, cfg, kr1.data(), km1.data());
            k.axpby(rs.data(), 1.0, rho.data(), 0.5 * dt, kr1.data(), n);
            k.axpby(ms.data(), 1.0, m.data(), 0.5 * dt, km1.data(), n);
            if (!stage_ok(rs)) { vacuum = true; break; }
            rhs_core(wk, rs.data(), ms.data(), law, cfg, kr2.data(), km2.data());
            k.axpby(rs.data(), 1.0, rho.data(), 0.5 * dt, kr2.data(), n);
            k.axpby(ms.data(), 1.0, m.data(), 0.5 * dt, km2.data(), n);
            if (!stage_ok(rs)) { vacuum = true; break; }
            rhs_core(wk, rs.data(), ms.data(), law, cfg, kr3.data(), km3.data());
            k.axpby(rs.data(), 1.0, rho.data(), dt, kr3.data(), n);
            k.axpby(ms.data(), 1.0, m.data(), dt, km3.data(), n);
            if (!stage_ok(rs)) { vacuum = true; break; }
            rhs_core(wk, rs.data(), ms.data(), law, cfg, kr4.data(), km4.data());
        } while (false);

        if (!vacuum) {
            const double w16 = dt / 6.0, w13 = dt / 3.0;
            k.comb4(rho.data(), rho.data(), w16, kr1.data(), w13, kr2.data(), w13,
                    kr3.data(), w16, kr4.data(), n);
            k.comb4(m.data(), m.data(), w16, km1.data(), w13, km2.data(), w13,
                    km3.data(), w16, km4.data(), n);
            if (const auto* d = std::get_if<DirichletVelocityBc>(&cfg.bc)) {
                m[0] = rho[0] * d->u0;
                m[n - 1] = rho[n - 1] * d->u1;
            }
            t = double(step + 1) * dt;
        }

        double minr = k.min_v(rho.data(), n);
        double probe = k.sum(rho.data(), n) + k.sum(m.data(), n);
        if (!std::isfinite(probe)) {
            traj.status = RunStatus::Instability;
            traj.event_time = t;
            traj.note = "non-finite state";
            record(t);
            return traj;
        }
        if (vacuum || minr <= cfg.vacuum_floor) {
            traj.status = RunStatus::VacuumEvent;
            traj.event_time = vacuum ? t : double(step + 1) * dt;
            traj.note = "density reached the vacuum floor";
            record(traj.event_time);
            break;
        }
        if ((step + 1) % cfg.record_every == 0 || step + 1 == nsteps)
            record(t);
    }

    // attach residual series to the records
    std::vector<double> re = energy_balance_residual(traj, law);
    for (std::size_t i = 0; i < re.size(); ++i) traj.records[i].res_energy = re[i];
    if (!g.periodic && std::abs(g.x_lo) <= 1e-12 && std::abs(g.x_hi - 1.0) <= 1e-12 &&
        traj.records.size() >= 3) {
        std::vector<double> rd = observable_identity_residual(traj, law);
        for (std::size_t i = 0; i < rd.size(); ++i) traj.records[i].res_dI = rd[i];
    }
    return traj;
}

} // namespace qhdlab
