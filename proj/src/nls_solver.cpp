#include "qhdlab/nls_solver.hpp"

#include "qhdlab/kernels/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace qhdlab {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void phase_half_step(std::vector<std::complex<double>>& psi, const PressureLaw& law,
                     double dt, double eps, std::vector<double>& rho,
                     std::vector<double>& hval) {
    if (law.is_zero()) return;
    const std::size_t n = psi.size();
    const auto& k = kernels::ops();
    k.abs2_c(rho.data(), reinterpret_cast<const double*>(psi.data()), n);
    law.h_arr(hval.data(), rho.data(), n);
    const double c = -0.5 * dt / eps;
    for (std::size_t i = 0; i < n; ++i) psi[i] *= std::polar(1.0, c * hval[i]);
}

} // namespace

struct NlsStepper::Impl {
    Grid1D grid;
    NlsBc bc;
    double eps;
    std::size_t n;

    // periodic path
    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_complex* cbuf = nullptr;

    // Neumann path (cosine basis, separate real transforms for re/im)
    fftw_plan cos_re = nullptr, cos_im = nullptr;
    double* rbuf = nullptr;
    double* ibuf = nullptr;

    std::vector<double> lambda; // kinetic eigenvalues k^2 per mode
    std::vector<double> rho, hval;
    std::vector<std::complex<double>> kin; // cached exp(-i eps k^2 dt / 2)
    double kin_dt = 0.0;
    bool kin_valid = false;

    Impl(const Grid1D& g, NlsBc b, double e) : grid(g), bc(b), eps(e), n(g.n) {
        if (!(eps > 0.0)) throw Error("NlsStepper: eps must be positive");
        if ((bc == NlsBc::Periodic) != g.periodic)
            throw Error("NlsStepper: boundary kind disagrees with grid periodicity");
        rho.resize(n);
        hval.resize(n);
        lambda.resize(n);
        kin.resize(n);
        const double L = g.length();

        std::lock_guard<std::mutex> lock(planner_mutex());
        if (bc == NlsBc::Periodic) {
            cbuf = fftw_alloc_complex(n);
            fwd = fftw_plan_dft_1d(int(n), cbuf, cbuf, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_1d(int(n), cbuf, cbuf, FFTW_BACKWARD, FFTW_ESTIMATE);
            for (std::size_t j = 0; j < n; ++j) {
                double freq = (j <= n / 2) ? double(j) : double(j) - double(n);
                double kx = 2.0 * std::numbers::pi * freq / L;
                lambda[j] = kx * kx;
            }
        } else {
            rbuf = fftw_alloc_real(n);
            ibuf = fftw_alloc_real(n);
            cos_re = fftw_plan_r2r_1d(int(n), rbuf, rbuf, FFTW_REDFT00, FFTW_ESTIMATE);
            cos_im = fftw_plan_r2r_1d(int(n), ibuf, ibuf, FFTW_REDFT00, FFTW_ESTIMATE);
            for (std::size_t j = 0; j < n; ++j) {
                double kx = std::numbers::pi * double(j) / L;
                lambda[j] = kx * kx;
            }
        }
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (cos_re) fftw_destroy_plan(cos_re);
        if (cos_im) fftw_destroy_plan(cos_im);
        if (cbuf) fftw_free(cbuf);
        if (rbuf) fftw_free(rbuf);
        if (ibuf) fftw_free(ibuf);
    }

    void refresh_kinetic(double dt) {
        if (kin_valid && dt == kin_dt) return;
        for (std::size_t j = 0; j < n; ++j)
            kin[j] = std::polar(1.0, -0.5 * eps * lambda[j] * dt);
        kin_dt = dt;
        kin_valid = true;
    }

    void kinetic_step(std::vector<std::complex<double>>& psi, double dt) {
        refresh_kinetic(dt);
        if (bc == NlsBc::Periodic) {
            auto* z = reinterpret_cast<std::complex<double>*>(cbuf);
            std::copy(psi.begin(), psi.end(), z);
            fftw_execute(fwd);
            const double scale = 1.0 / double(n);
            for (std::size_t j = 0; j < n; ++j) z[j] *= kin[j] * scale;
            fftw_execute(bwd);
            std::copy(z, z + n, psi.begin());
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                rbuf[i] = psi[i].real();
                ibuf[i] = psi[i].imag();
            }
            fftw_execute(cos_re);
            fftw_execute(cos_im);
            const double scale = 1.0 / (2.0 * double(n - 1));
            for (std::size_t j = 0; j < n; ++j) {
                std::complex<double> c(rbuf[j], ibuf[j]);
                c *= kin[j] * scale;
                rbuf[j] = c.real();
                ibuf[j] = c.imag();
            }
            fftw_execute(cos_re);
            fftw_execute(cos_im);
            for (std::size_t i = 0; i < n; ++i) psi[i] = {rbuf[i], ibuf[i]};
        }
    }
};

NlsStepper::NlsStepper(const Grid1D& grid, NlsBc bc, double eps)
    : impl_(std::make_unique<Impl>(grid, bc, eps)) {}
NlsStepper::~NlsStepper() = default;
NlsStepper::NlsStepper(NlsStepper&&) noexcept = default;
NlsStepper& NlsStepper::operator=(NlsStepper&&) noexcept = default;

void NlsStepper::step(std::vector<std::complex<double>>& psi, const PressureLaw& law,
                      double dt) {
    if (psi.size() != impl_->n) throw Error("NlsStepper: size mismatch");
    phase_half_step(psi, law, dt, impl_->eps, impl_->rho, impl_->hval);
    impl_->kinetic_step(psi, dt);
    phase_half_step(psi, law, dt, impl_->eps, impl_->rho, impl_->hval);
}

WaveState nls_step(const WaveState& w, const PressureLaw& law, const NlsConfig& cfg) {
    NlsStepper stepper(w.grid, cfg.bc, cfg.eps);
    WaveState out = w;
    out.eps = cfg.eps;
    stepper.step(out.psi, law, cfg.dt);
    out.t = w.t + cfg.dt;
    return out;
}

namespace {

double wave_mass(const WaveState& w, std::vector<double>& rho) {
    kernels::ops().abs2_c(rho.data(), reinterpret_cast<const double*>(w.psi.data()),
                          w.grid.n);
    return integrate_raw(rho.data(), w.grid.n, w.grid.dx(), w.grid.periodic);
}

double wave_energy(const WaveState& w, const PressureLaw& law,
                   std::vector<double>& rho) {
    const std::size_t n = w.grid.n;
    std::vector<double> re(n), im(n), dre(n), dim(n), integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = w.psi[i].real();
        im[i] = w.psi[i].imag();
    }
    derivative_raw(dre.data(), re.data(), n, w.grid.dx(), w.grid.periodic, 1);
    derivative_raw(dim.data(), im.data(), n, w.grid.dx(), w.grid.periodic, 1);
    const double half_eps2 = 0.5 * w.eps * w.eps;
    for (std::size_t i = 0; i < n; ++i)
        integrand[i] =
            half_eps2 * (dre[i] * dre[i] + dim[i] * dim[i]) + law.g(rho[i]);
    return integrate_raw(integrand.data(), n, w.grid.dx(), w.grid.periodic);
}

} // namespace

WaveTrajectory nls_run(const WaveState& ic, const PressureLaw& law,
                       const NlsConfig& cfg, const ScalarField* weight) {
    const Grid1D& g = ic.grid;
    const std::size_t n = g.n;
    if (!(cfg.t_final > 0.0)) throw Error("nls_run: t_final must be positive");
    if (!(cfg.dt > 0.0)) throw Error("nls_run: dt must be positive");

    WaveTrajectory out;
    out.fluid.grid = g;
    out.fluid.law = law;
    out.fluid.bc = g.periodic ? BoundaryKind(PeriodicBc{}) : BoundaryKind(MonitoredBc{});
    out.fluid.weight = weight ? *weight : default_weight(g);

    std::size_t nsteps =
        std::max<std::size_t>(1, std::size_t(std::llround(cfg.t_final / cfg.dt)));
    const double dt = cfg.t_final / double(nsteps);
    out.fluid.dt = dt;

    NlsStepper stepper(g, cfg.bc, cfg.eps);
    WaveState w = ic;
    w.eps = cfg.eps;

    std::vector<double> rho(n);
    auto record = [&](double t) {
        w.t = t;
        out.states.push_back(w);
        out.times.push_back(t);
        out.mass.push_back(wave_mass(w, rho));
        out.nls_energy.push_back(wave_energy(w, law, rho));

        double minr = kernels::ops().min_v(rho.data(), n);
        FluidState s;
        if (minr > cfg.vacuum_floor) {
            s = madelung_forward(w, cfg.vacuum_floor);
        } else {
            if (!out.vacuum_suspend_time) out.vacuum_suspend_time = t;
            if (out.fluid.status == RunStatus::Completed) {
                out.fluid.status = RunStatus::VacuumEvent;
                out.fluid.event_time = t;
                out.fluid.note = "hydrodynamic diagnostics suspended at vacuum";
            }
            s.t = t;
            s.rho = ScalarField(g);
            s.rho.v = rho;
            s.u = ScalarField(g, qnan());
        }
        out.fluid.records.push_back(
            snapshot_record(s, law, out.fluid.weight, cfg.vacuum_floor));
        out.fluid.states.push_back(std::move(s));
    };

    record(0.0);
    for (std::size_t step = 0; step < nsteps; ++step) {
        stepper.step(w.psi, law, dt);
        double t = double(step + 1) * dt;
        double probe = 0.0;
        for (std::size_t i = 0; i < n; i += (n > 16 ? n / 16 : 1))
            probe += std::norm(w.psi[i]);
        if (!std::isfinite(probe)) {
            out.status = RunStatus::Instability;
            out.fluid.status = RunStatus::Instability;
            out.fluid.event_time = t;
            out.fluid.note = "non-finite wave state";
            w.t = t;
            break;
        }
        if ((step + 1) % cfg.record_every == 0 || step + 1 == nsteps) record(t);
    }

    std::vector<double> re = energy_balance_residual(out.fluid, law);
    for (std::size_t i = 0; i < re.size(); ++i) out.fluid.records[i].res_energy = re[i];
    if (!g.periodic && std::abs(g.x_lo) <= 1e-12 && std::abs(g.x_hi - 1.0) <= 1e-12 &&
        out.fluid.records.size() >= 3 && !out.vacuum_suspend_time) {
        std::vector<double> rd = observable_identity_residual(out.fluid, law);
        for (std::size_t i = 0; i < rd.size(); ++i) out.fluid.records[i].res_dI = rd[i];
    }
    return out;
}

// ----- 2D ------------------------------------------------------------------

struct NlsStepper2D::Impl {
    Grid2D grid;
    NlsBc bc;
    double eps;
    std::size_t nx, ny, np;

    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan cos_re = nullptr, cos_im = nullptr;
    double* rbuf = nullptr;
    double* ibuf = nullptr;

    std::vector<double> lambda;
    std::vector<double> rho, hval;
    std::vector<std::complex<double>> kin;
    double kin_dt = 0.0;
    bool kin_valid = false;

    Impl(const Grid2D& g, NlsBc b, double e)
        : grid(g), bc(b), eps(e), nx(g.gx.n), ny(g.gy.n), np(nx * ny) {
        if (!(eps > 0.0)) throw Error("NlsStepper2D: eps must be positive");
        bool per = bc == NlsBc::Periodic;
        if (per != g.gx.periodic || per != g.gy.periodic)
            throw Error("NlsStepper2D: boundary kind disagrees with grid periodicity");
        rho.resize(np);
        hval.resize(np);
        lambda.resize(np);
        kin.resize(np);
        const double Lx = g.gx.length(), Ly = g.gy.length();

        std::lock_guard<std::mutex> lock(planner_mutex());
        if (per) {
            cbuf = fftw_alloc_complex(np);
            // FFTW is row-major with the first dimension slowest: (ny, nx)
            fwd = fftw_plan_dft_2d(int(ny), int(nx), cbuf, cbuf, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
            bwd = fftw_plan_dft_2d(int(ny), int(nx), cbuf, cbuf, FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
            for (std::size_t jy = 0; jy < ny; ++jy) {
                double fy = (jy <= ny / 2) ? double(jy) : double(jy) - double(ny);
                double kyv = 2.0 * std::numbers::pi * fy / Ly;
                for (std::size_t jx = 0; jx < nx; ++jx) {
                    double fx = (jx <= nx / 2) ? double(jx) : double(jx) - double(nx);
                    double kxv = 2.0 * std::numbers::pi * fx / Lx;
                    lambda[jy * nx + jx] = kxv * kxv + kyv * kyv;
                }
            }
        } else {
            rbuf = fftw_alloc_real(np);
            ibuf = fftw_alloc_real(np);
            cos_re = fftw_plan_r2r_2d(int(ny), int(nx), rbuf, rbuf, FFTW_REDFT00,
                                      FFTW_REDFT00, FFTW_ESTIMATE);
            cos_im = fftw_plan_r2r_2d(int(ny), int(nx), ibuf, ibuf, FFTW_REDFT00,
                                      FFTW_REDFT00, FFTW_ESTIMATE);
            for (std::size_t jy = 0; jy < ny; ++jy) {
                double kyv = std::numbers::pi * double(jy) / Ly;
                for (std::size_t jx = 0; jx < nx; ++jx) {
                    double kxv = std::numbers::pi * double(jx) / Lx;
                    lambda[jy * nx + jx] = kxv * kxv + kyv * kyv;
                }
            }
        }
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (cos_re) fftw_destroy_plan(cos_re);
        if (cos_im) fftw_destroy_plan(cos_im);
        if (cbuf) fftw_free(cbuf);
        if (rbuf) fftw_free(rbuf);
        if (ibuf) fftw_free(ibuf);
    }

    void refresh_kinetic(double dt) {
        if (kin_valid && dt == kin_dt) return;
        for (std::size_t j = 0; j < np; ++j)
            kin[j] = std::polar(1.0, -0.5 * eps * lambda[j] * dt);
        kin_dt = dt;
        kin_valid = true;
    }

    void kinetic_step(std::vector<std::complex<double>>& psi, double dt) {
        refresh_kinetic(dt);
        if (bc == NlsBc::Periodic) {
            auto* z = reinterpret_cast<std::complex<double>*>(cbuf);
            std::copy(psi.begin(), psi.end(), z);
            fftw_execute(fwd);
            const double scale = 1.0 / double(np);
            for (std::size_t j = 0; j < np; ++j) z[j] *= kin[j] * scale;
            fftw_execute(bwd);
            std::copy(z, z + np, psi.begin());
        } else {
            for (std::size_t i = 0; i < np; ++i) {
                rbuf[i] = psi[i].real();
                ibuf[i] = psi[i].imag();
            }
            fftw_execute(cos_re);
            fftw_execute(cos_im);
            const double scale =
                1.0 / (4.0 * double(nx - 1) * double(ny - 1));
            for (std::size_t j = 0; j < np; ++j) {
                std::complex<double> c(rbuf[j], ibuf[j]);
                c *= kin[j] * scale;
                rbuf[j] = c.real();
                ibuf[j] = c.imag();
            }
            fftw_execute(cos_re);
            fftw_execute(cos_im);
            for (std::size_t i = 0; i < np; ++i) psi[i] = {rbuf[i], ibuf[i]};
        }
    }
};

NlsStepper2D::NlsStepper2D(const Grid2D& grid, NlsBc bc, double eps)
    : impl_(std::make_unique<Impl>(grid, bc, eps)) {}
NlsStepper2D::~NlsStepper2D() = default;
NlsStepper2D::NlsStepper2D(NlsStepper2D&&) noexcept = default;
NlsStepper2D& NlsStepper2D::operator=(NlsStepper2D&&) noexcept = default;

void NlsStepper2D::step(std::vector<std::complex<double>>& psi,
                        const PressureLaw& law, double dt) {
    if (psi.size() != impl_->np) throw Error("NlsStepper2D: size mismatch");
    phase_half_step(psi, law, dt, impl_->eps, impl_->rho, impl_->hval);
    impl_->kinetic_step(psi, dt);
    phase_half_step(psi, law, dt, impl_->eps, impl_->rho, impl_->hval);
}

Trajectory2D nls_run2d(const WaveState2D& ic, const PressureLaw& law,
                       const NlsConfig& cfg) {
    const Grid2D& g = ic.grid;
    const std::size_t np = g.size();
    if (!(cfg.t_final > 0.0)) throw Error("nls_run2d: t_final must be positive");

    Trajectory2D out;
    out.grid = g;
    out.eps = cfg.eps;

    std::size_t nsteps =
        std::max<std::size_t>(1, std::size_t(std::llround(cfg.t_final / cfg.dt)));
    const double dt = cfg.t_final / double(nsteps);

    NlsStepper2D stepper(g, cfg.bc, cfg.eps);
    WaveState2D w = ic;
    w.eps = cfg.eps;

    std::vector<double> rho(np);
    auto record = [&](double t) {
        w.t = t;
        out.times.push_back(t);
        kernels::ops().abs2_c(rho.data(), reinterpret_cast<const double*>(w.psi.data()),
                              np);
        Field2D rf(g);
        rf.v = rho;
        out.mass.push_back(integrate2d(rf));
        double minr = kernels::ops().min_v(rho.data(), np);
        if (minr > cfg.vacuum_floor) {
            out.states.push_back(madelung_forward2d(w, cfg.vacuum_floor));
        } else {
            if (!out.vacuum_suspend_time) out.vacuum_suspend_time = t;
            FluidState2D s;
            s.t = t;
            s.rho = rf;
            s.ux = Field2D(g, qnan());
            s.uy = Field2D(g, qnan());
            out.states.push_back(std::move(s));
        }
    };

    record(0.0);
    for (std::size_t step = 0; step < nsteps; ++step) {
        stepper.step(w.psi, law, dt);
        double t = double(step + 1) * dt;
        double probe = std::norm(w.psi[0]) + std::norm(w.psi[np / 2]);
        if (!std::isfinite(probe)) {
            out.status = RunStatus::Instability;
            break;
        }
        if ((step + 1) % cfg.record_every == 0 || step + 1 == nsteps) record(t);
    }
    return out;
}

} // namespace qhdlab
