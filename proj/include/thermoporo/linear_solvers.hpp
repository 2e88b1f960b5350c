#pragma once

#include "thermoporo/grid.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace thermoporo {

/// Outcome of an iterative solve. `residual` is relative to the right-hand side.
struct SolverReport {
    int iterations = 0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool converged = false;
};

struct SolverOptions {
    double tol = 1e-9;
    /// 0 selects the default cap of 50 iterations per grid point along one axis.
    int max_iterations = 0;
};

using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;
using Projection = std::function<void(std::span<double> x)>;

/// Preconditioned conjugate gradients for a symmetric positive (semi-)definite
/// operator. `precond` may be empty (identity). `project`, when given, removes
/// the operator's null space from iterates and search directions; it is also
/// applied at every restart. x is used as the initial guess.
///
/// Converges when ||b - A x||_2 <= tol * ||b||_2 (checked on the true residual).
/// For b = 0 returns x = 0 without iterating.
SolverReport conjugate_gradient(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                                const LinearOperator& precond, const Projection& project, double tol,
                                int max_iterations);

struct ScalarSolution {
    CellField u;
    SolverReport report;
};

/// Face coefficient from cell values by harmonic averaging of the two
/// neighbours. Every cell value must be positive.
[[nodiscard]] FaceField harmonic_face_average(const PeriodicGrid& g, std::span<const double> K);

/// Solves div(K grad u) = rhs on the periodic grid with face coefficients K.
/// The right-hand side must have zero mean (within tol); the solution has zero
/// mean. Throws SolverError on incompatibility or non-convergence.
[[nodiscard]] ScalarSolution solve_diffusion(const PeriodicGrid& g, const FaceField& K, std::span<const double> rhs,
                                             const SolverOptions& opt = {});

/// Orientation of face (d,c) relative to the fluid mask: +1 if c is fluid and
/// its +e_d neighbour is solid (outward fluid normal is +e_d), -1 in the mirrored
/// case, 0 if the face is not on the interface.
[[nodiscard]] int interface_orientation(const PeriodicGrid& g, std::span<const std::uint8_t> fluid, int d,
                                        std::size_t c) noexcept;

/// Solves the Laplace equation on the fluid cells with prescribed outward
/// normal derivative `flux[d][c]` on interface faces and periodic wrap.
/// The flux must integrate to zero over the interface of each fluid component.
/// Gauge: zero mean over each fluid component. Solid cells are set to zero.
[[nodiscard]] ScalarSolution solve_neumann_laplace(const PeriodicGrid& g, std::span<const std::uint8_t> fluid,
                                                   const FaceField& flux, const SolverOptions& opt = {});

/// Subtracts the mean over each labelled component (label < 0 entries are zeroed).
void project_components(std::span<double> x, const ComponentLabels& labels);

/// Default iteration cap for a grid with n points per axis.
[[nodiscard]] inline int default_iteration_cap(int n) noexcept { return 50 * n; }

}  // namespace thermoporo
