#pragma once

#include "thermoporo/grid.hpp"
#include "thermoporo/linear_solvers.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace thermoporo {

/// Steady Stokes, or one implicit Euler step of unsteady Stokes with inertia
/// coefficient ρτ and step Δt.
struct StokesMode {
    double inertia = 0.0;
    double dt = 0.0;

    [[nodiscard]] static StokesMode steady() noexcept { return {}; }
    [[nodiscard]] static StokesMode implicit_step(double rho_tau, double dt);
    /// Mass coefficient ρτ/Δt of the step (zero when steady).
    [[nodiscard]] double c0() const noexcept { return dt > 0.0 ? inertia / dt : 0.0; }
};

struct StokesSolution {
    FaceField velocity;
    CellField pressure;
    SolverReport report;
};

/// MAC discretization of
///     c0 v - mu Δv + grad R = f + c0 v_prev,   div v = 0
/// on the fluid cells of a periodic grid. A face carries an unknown velocity
/// only when both adjacent cells are fluid; all other faces are held at zero
/// (no-slip). Tangential walls sit half a cell away from the face.
///
/// The pressure is found by preconditioned conjugate gradients on the Schur
/// complement B A^-1 B^T with the Cahouet-Chabard preconditioner
/// mu I + c0 (B B^T)^-1; the inner velocity and pressure-Laplacian solves use
/// sparse Cholesky factorizations computed once in the constructor, so a
/// solver object can be reused for many right-hand sides (time stepping, one
/// column per forcing direction). solve() is const and safe to call from
/// several threads at once.
///
/// The pressure has zero mean over each connected fluid component and is zero
/// on solid cells.
class StokesSolver {
public:
    StokesSolver(const PeriodicGrid& grid, std::span<const std::uint8_t> fluid, double mu,
                 StokesMode mode = StokesMode::steady());
    ~StokesSolver();
    StokesSolver(StokesSolver&&) noexcept;
    StokesSolver& operator=(StokesSolver&&) noexcept;

    /// Converged when max|div v| <= tol * max(1, max|v|). Throws SolverError
    /// when the iteration cap is reached first. `v_prev` is required for a
    /// time step with c0 > 0 unless it is zero; `pressure_guess` warm-starts.
    [[nodiscard]] StokesSolution solve(const FaceField& force, const FaceField* v_prev = nullptr,
                                       const SolverOptions& opt = {}, const CellField* pressure_guess = nullptr) const;

    [[nodiscard]] const PeriodicGrid& grid() const noexcept;
    [[nodiscard]] double mu() const noexcept;
    [[nodiscard]] const StokesMode& mode() const noexcept;
    [[nodiscard]] bool active(int d, std::size_t c) const noexcept;
    [[nodiscard]] int fluid_components() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around StokesSolver.
[[nodiscard]] StokesSolution solve_stokes(const PeriodicGrid& grid, std::span<const std::uint8_t> fluid, double mu,
                                          const FaceField& force, StokesMode mode = StokesMode::steady(),
                                          const FaceField* v_prev = nullptr, const SolverOptions& opt = {});

/// max over cells of |div v|.
[[nodiscard]] double max_abs_divergence(const PeriodicGrid& grid, const FaceField& v);

}  // namespace thermoporo
