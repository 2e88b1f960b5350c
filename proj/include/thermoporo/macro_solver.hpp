#pragma once

#include "thermoporo/cell_flow.hpp"
#include "thermoporo/cell_thermal.hpp"
#include "thermoporo/geometry.hpp"
#include "thermoporo/grid.hpp"
#include "thermoporo/params.hpp"
#include "thermoporo/tensor.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thermoporo {

/// Effective coefficients of the homogenized system for one microstructure.
/// Exactly one of steady / kernel / inertial is set, matching `regime`.
struct EffectiveMedium {
    int dim = 2;
    double porosity = 0.0;
    double c_hat = 0.0;       ///< ĉ_p
    double kappa_hat = 0.0;   ///< <K>
    Matrix Btheta;
    Regime regime = Regime::SteadyDarcy;
    LimitParameters params;

    std::optional<SteadyPermeability> steady;
    std::optional<PermeabilityKernel> kernel;
    std::optional<InertialTensor> inertial;

    // Provenance.
    std::string geometry_hash;
    int cell_resolution = 0;
    double tolerance = 0.0;

    /// Throws ValidationError when the payload does not match the regime or
    /// dimensions disagree.
    void check() const;
};

struct AssembleOptions {
    SolverOptions solver{};
    KernelOptions kernel{};
};

/// Runs the thermal cell problems and the regime-specific flow cell problem.
[[nodiscard]] EffectiveMedium assemble(const UnitCellGeometry& g, const LimitParameters& p,
                                       const AssembleOptions& opt = {});

using Point = std::array<double, 3>;
using ScalarFunction = std::function<double(const Point& x, double t)>;
using VectorFunction = std::function<Point(const Point& x, double t)>;

/// How the memory convolution v = -∫ B₁(t-s) ∇q(s) ds is discretized.
enum class ConvolutionRule {
    /// Product integration against the step response A (exact for piecewise
    /// linear q; reproduces v = -A(t)∇q for constant q).
    StepResponse,
    /// Trapezoidal rule on B₁ sampled at the macro time levels.
    KernelTrapezoid,
};

struct MacroProblem {
    MacroDomain domain;
    EffectiveMedium medium;
    double dt = 1e-2;
    double T = 0.1;
    VectorFunction v0;               ///< boundary velocity; only v0·n is used (empty: zero)
    ScalarFunction theta0;           ///< boundary temperature (empty: zero)
    ScalarFunction heat_source;      ///< added to the heat equation (empty: zero)
    ScalarFunction pressure_source;  ///< added to the continuity equation; manufactured solutions only
    double picard_tol = 1e-8;
    int picard_max_iterations = 100;
    ConvolutionRule convolution = ConvolutionRule::StepResponse;
};

/// Macroscopic fields at one time level. p, q, θ (and Q = ∫q) are cell-centered;
/// v and w = ∫v live on the faces of the macro grid.
struct MacroState {
    double t = 0.0;
    int step = 0;
    CellField p;
    CellField q;
    CellField theta;
    FaceField v;
    FaceField w;
    CellField Q;                       ///< ∫₀^t q (InviscidDarcy: G = ∇Q)
    std::vector<CellField> q_history;  ///< q at every accepted level (MemoryDarcy)
    /// (1/p*)p + div w at t = 0 plus the accumulated pressure source; the
    /// integrated continuity equation keeps (1/p*)p + div w equal to it.
    CellField continuity_reference;
};

struct StepDiagnostics {
    double t = 0.0;
    int step = 0;
    int picard_iterations = 0;
    double mass_residual = 0.0;        ///< ||(1/p*)∂_t p + div v - S_p||_∞
    double continuity_residual = 0.0;  ///< ||(1/p*)p + div w - continuity_reference||_∞
    double energy = 0.0;               ///< (1/(2p*))||p||² + (τ₀ĉ/2)||θ||²
    double pressure_energy = 0.0;      ///< (1/(2p*))||p||²
    double max_p = 0.0;
    double max_theta = 0.0;
    double max_v = 0.0;
};

struct RunResult {
    std::vector<MacroState> states;  ///< initial state followed by every requested output
    std::vector<StepDiagnostics> diagnostics;
    std::vector<std::string> warnings;
};

/// Implicit Euler time stepping of the homogenized system. The pressure and
/// temperature equations are linear; they are coupled through q and β₀f and
/// resolved by Picard iteration. Linear systems are factorized once.
class MacroSolver {
public:
    explicit MacroSolver(MacroProblem problem);
    ~MacroSolver();
    MacroSolver(MacroSolver&&) noexcept;
    MacroSolver& operator=(MacroSolver&&) noexcept;

    [[nodiscard]] const MacroProblem& problem() const noexcept;
    [[nodiscard]] const MacroGrid& grid() const noexcept;

    /// Zero fields at t = 0 (consistent with w = 0 and θ(·,0) = 0).
    [[nodiscard]] MacroState initial_state() const;
    /// Sets p (and the derived q) of a state; the state must be at step 0.
    void set_initial_pressure(MacroState& s, const ScalarFunction& p0) const;

    /// Advances by one Δt. Throws SolverError on Picard non-convergence.
    StepDiagnostics step(MacroState& s) const;

    /// Warnings collected so far (tangential boundary data, slow Picard, ...).
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept;

    /// Number of steps for the problem's final time.
    [[nodiscard]] int step_count() const noexcept;

    /// Normal velocity prescribed on the boundary faces at time t (faces
    /// normal to axis d carry v_d; interior entries are zero).
    [[nodiscard]] FaceField boundary_velocity(double t) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

using StepObserver = std::function<void(const MacroState&, const StepDiagnostics&)>;

/// Runs to the problem's final time. Every `output_every` steps (and at the
/// end) a copy of the state is appended to the result; 0 keeps only the
/// initial and final states. T = 0 returns the initial state only.
[[nodiscard]] RunResult run(const MacroProblem& problem, const MacroState* initial = nullptr, int output_every = 0,
                            const StepObserver& observer = {});

}  // namespace thermoporo
