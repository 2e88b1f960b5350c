#pragma once

#include "thermoporo/geometry.hpp"
#include "thermoporo/grid.hpp"
#include "thermoporo/linear_solvers.hpp"
#include "thermoporo/tensor.hpp"

#include <vector>

namespace thermoporo {

/// Periodic thermal correctors Θ_i on the unit cell, one per axis:
///     div(K (grad Θ_i + e_i)) = 0,   <Θ_i> = 0,
/// with K = κf on fluid voxels and κs on solid voxels.
struct ThermalCellSolution {
    PeriodicGrid grid;
    CellField K;
    FaceField K_faces;  ///< harmonic face average of K
    std::vector<CellField> theta;
    std::vector<SolverReport> reports;
};

struct ConductivityTensor {
    Matrix Btheta;            ///< symmetrized tensor
    Matrix raw;               ///< before symmetrization
    double asymmetry = 0.0;   ///< relative_asymmetry(raw)
    double kappa_hat = 0.0;   ///< <K>
};

/// Throws DegenerateGeometry for single-phase cells, std::invalid_argument for
/// non-positive conductivities and SolverError on non-convergence. The dim
/// corrector problems run in parallel.
[[nodiscard]] ThermalCellSolution solve_thermal_cell(const UnitCellGeometry& g, double kappa_f, double kappa_s,
                                                     const SolverOptions& opt = {});

/// Column i = <K (e_i + grad Θ_i)>, evaluated from face fluxes. Throws
/// ValidationError when the raw asymmetry exceeds 1e-6.
[[nodiscard]] ConductivityTensor effective_conductivity(const ThermalCellSolution& sol);

/// Convenience: solve and assemble.
[[nodiscard]] ConductivityTensor conductivity_tensor(const UnitCellGeometry& g, double kappa_f, double kappa_s,
                                                     const SolverOptions& opt = {});

/// Harmonic and arithmetic means of K over the cell (the Voigt-Reuss bounds).
[[nodiscard]] double harmonic_mean_conductivity(const UnitCellGeometry& g, double kappa_f, double kappa_s);
[[nodiscard]] double arithmetic_mean_conductivity(const UnitCellGeometry& g, double kappa_f, double kappa_s);

}  // namespace thermoporo
