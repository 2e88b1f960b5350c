#pragma once

#include "thermoporo/geometry.hpp"
#include "thermoporo/linear_solvers.hpp"
#include "thermoporo/tensor.hpp"

#include <array>
#include <string>
#include <vector>

namespace thermoporo {

/// Steady Darcy permeability B₂(μ₁): column i is the integral over Y_f of the
/// cell velocity driven by the unit body force e_i (no-slip on the interface).
struct SteadyPermeability {
    Matrix B2;                          ///< symmetrized
    Matrix raw;
    double asymmetry = 0.0;
    double mu1 = 1.0;
    std::array<bool, 3> degenerate{false, false, false};  ///< column forced to zero (no percolation)
    std::vector<SolverReport> reports;
};

/// Solves once with unit viscosity and scales by 1/μ₁. Throws
/// DegenerateGeometry when the fluid percolates along no axis, ValidationError
/// when the raw asymmetry exceeds 1e-6.
[[nodiscard]] SteadyPermeability steady_permeability(const UnitCellGeometry& g, double mu1,
                                                     const SolverOptions& opt = {});

struct KernelOptions {
    /// Time step; 0 selects T/steps with T chosen automatically.
    double dt = 0.0;
    /// Initial horizon; 0 selects 10 τ₀ρ_f / (μ₁ λ_est).
    double T = 0.0;
    int steps = 200;
    /// Stepping continues past T until the extrapolated remaining gap
    /// ||A(∞) - A(t)|| / ||A(t)|| drops below this value (0 disables).
    double saturation_tol = 1e-4;
    /// Final-step increment ||A(T) - A(T-Δt)|| / ||A(T)|| above which a warning is recorded.
    double tail_tol = 1e-4;
    int max_steps = 20000;
    SolverOptions solver{};
};

/// Step response A(t) of the unsteady cell problem
///     τ₀ρ_f ∂V/∂t = μ₁ΔV - ∇R + e_i,  div V = 0,  V(0) = 0,
/// sampled on a uniform grid, and its derivative B₁ = dA/dt.
class PermeabilityKernel {
public:
    int dim = 0;
    double mu1 = 1.0;
    double tau0 = 1.0;
    double rho_f = 1.0;
    double lambda_est = 0.0;  ///< slowest-decay estimate from the probe steps
    double tail = 0.0;        ///< ||A(T) - A(T-Δt)|| / ||A(T)||
    double gap_estimate = 0.0;
    std::array<bool, 3> degenerate{false, false, false};
    std::vector<double> t;
    std::vector<Matrix> A;
    std::vector<Matrix> B1;
    std::vector<Matrix> C;  ///< running ∫₀^{t_k} A (trapezoidal, exact for linear A)
    std::vector<std::string> warnings;
    int solver_iterations = 0;

    [[nodiscard]] double horizon() const noexcept { return t.empty() ? 0.0 : t.back(); }
    [[nodiscard]] double step() const noexcept { return t.size() < 2 ? 0.0 : t[1] - t[0]; }
    /// Linear interpolation; A is held at A(T) and B₁ is zero beyond the horizon.
    [[nodiscard]] Matrix A_at(double s) const;
    [[nodiscard]] Matrix B1_at(double s) const;
    /// ∫₀^s A, exact for the piecewise linear interpolant.
    [[nodiscard]] Matrix C_at(double s) const;
    /// Trapezoidal ∫₀^T B₁.
    [[nodiscard]] Matrix integral_B1() const;
    /// Recomputes C from t and A.
    void rebuild_integrals();
    /// First time at which trace A reaches `fraction` of trace A(T) (linear interpolation).
    [[nodiscard]] double saturation_time(double fraction) const;
};

/// Requires μ₁ > 0 and τ₀ρ_f > 0. The dim columns advance in lockstep and in
/// parallel; every step is one implicit Euler Stokes solve per column.
[[nodiscard]] PermeabilityKernel kernel_permeability(const UnitCellGeometry& g, double mu1, double tau0, double rho_f,
                                                     const KernelOptions& opt = {});

/// Inertial (potential-flow) tensor. Column i of the mobility M = m𝕀 - B₃ is
/// the integral over Y_f of e_i + ∇Φ_i, where ΔΦ_i = 0 in Y_f and
/// ∂Φ_i/∂n = -e_i·n on the interface.
struct InertialTensor {
    Matrix M;      ///< symmetrized mobility m𝕀 - B₃
    Matrix B3;
    Matrix raw;
    double asymmetry = 0.0;
    double porosity = 0.0;
    std::vector<SolverReport> reports;
};

/// Throws DegenerateGeometry for cells without an interface (single phase).
[[nodiscard]] InertialTensor inertial_tensor(const UnitCellGeometry& g, const SolverOptions& opt = {});

}  // namespace thermoporo
