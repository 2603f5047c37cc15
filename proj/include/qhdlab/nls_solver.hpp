#pragma once

#include "qhdlab/diagnostics.hpp"

#include <memory>
#include <optional>

namespace qhdlab {

// Strang split-step integrator for  i eps psi_t = -eps^2/2 Lap psi + h(|psi|^2) psi.
// The nonlinear phase half-steps are exact (|psi| is invariant under them);
// the kinetic step is diagonal in a trigonometric basis -- complex
// exponentials on periodic grids, cosines on bounded grids, which enforces
// d(psi)/dnu = 0 and hence a homogeneous Neumann density. Exact kinetic
// diagonalization frees dt from the dx^2 stability constraint, which is
// what makes this solver the trustworthy cross-check for the explicit
// hydrodynamic integrator.
enum class NlsBc { Periodic, Neumann };

struct NlsConfig {
    double eps = 1.0;
    NlsBc bc = NlsBc::Periodic;
    double dt = 1e-4;
    double t_final = 1.0;
    std::size_t record_every = 100;
    double vacuum_floor = kVacuumFloor;
};

// Per-run transform workspace (owns FFTW plans; movable, not copyable).
class NlsStepper {
  public:
    NlsStepper(const Grid1D& grid, NlsBc bc, double eps);
    ~NlsStepper();
    NlsStepper(NlsStepper&&) noexcept;
    NlsStepper& operator=(NlsStepper&&) noexcept;
    NlsStepper(const NlsStepper&) = delete;
    NlsStepper& operator=(const NlsStepper&) = delete;

    void step(std::vector<std::complex<double>>& psi, const PressureLaw& law,
              double dt);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Single Strang step (one-shot convenience over NlsStepper).
WaveState nls_step(const WaveState& w, const PressureLaw& law, const NlsConfig& cfg);

struct WaveTrajectory {
    std::vector<WaveState> states;
    std::vector<double> times;
    std::vector<double> mass;       // int |psi|^2
    std::vector<double> nls_energy; // int eps^2/2 |psi_x|^2 + g(|psi|^2)
    Trajectory fluid;               // Madelung images with full diagnostics
    RunStatus status = RunStatus::Completed;
    // first time min|psi|^2 fell to the floor; hydrodynamic diagnostics are
    // suspended from there on while the wave keeps evolving
    std::optional<double> vacuum_suspend_time;
};

WaveTrajectory nls_run(const WaveState& ic, const PressureLaw& law,
                       const NlsConfig& cfg, const ScalarField* weight = nullptr);

// 2D tensor-grid variant; hydrodynamic fields for the multi-D monitors are
// always Madelung images of these runs.
class NlsStepper2D {
  public:
    NlsStepper2D(const Grid2D& grid, NlsBc bc, double eps);
    ~NlsStepper2D();
    NlsStepper2D(NlsStepper2D&&) noexcept;
    NlsStepper2D& operator=(NlsStepper2D&&) noexcept;
    NlsStepper2D(const NlsStepper2D&) = delete;
    NlsStepper2D& operator=(const NlsStepper2D&) = delete;

    void step(std::vector<std::complex<double>>& psi, const PressureLaw& law,
              double dt);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct Trajectory2D {
    std::vector<FluidState2D> states;
    std::vector<double> times;
    std::vector<double> mass;
    RunStatus status = RunStatus::Completed;
    std::optional<double> vacuum_suspend_time;
    Grid2D grid;
    double eps = 1.0;
};

Trajectory2D nls_run2d(const WaveState2D& ic, const PressureLaw& law,
                       const NlsConfig& cfg);

} // namespace qhdlab
