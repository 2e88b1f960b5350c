#include "thermoporo/cell_thermal.hpp"

#include "thermoporo/error.hpp"
#include "thermoporo/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace thermoporo {

namespace {

constexpr double kAsymmetryLimit = 1e-6;

}  // namespace

ThermalCellSolution solve_thermal_cell(const UnitCellGeometry& g, double kappa_f, double kappa_s,
                                       const SolverOptions& opt) {
    if (!(kappa_f > 0.0) || !(kappa_s > 0.0) || !std::isfinite(kappa_f) || !std::isfinite(kappa_s))
        throw std::invalid_argument("solve_thermal_cell: conductivities must be positive and finite");
    g.require_both_phases("solve_thermal_cell");

    ThermalCellSolution sol{PeriodicGrid(g.dim(), g.n()), {}, {}, {}, {}};
    const PeriodicGrid& grid = sol.grid;
    sol.K.resize(grid.cells());
    for (std::size_t c = 0; c < grid.cells(); ++c) sol.K[c] = g[c] ? kappa_f : kappa_s;
    sol.K_faces = harmonic_face_average(grid, sol.K);

    const auto dim = static_cast<std::size_t>(g.dim());
    sol.theta.resize(dim);
    sol.reports.resize(dim);
    parallel_for(dim, [&](std::size_t i) {
        const int axis = static_cast<int>(i);
        CellField rhs(grid.cells());
        const double inv_h = 1.0 / grid.h();
        for (std::size_t c = 0; c < grid.cells(); ++c)
            rhs[c] = -(sol.K_faces[axis][c] - sol.K_faces[axis][grid.minus(axis, c)]) * inv_h;
        auto res = solve_diffusion(grid, sol.K_faces, rhs, opt);
        sol.theta[i] = std::move(res.u);
        sol.reports[i] = res.report;
    });
    return sol;
}

ConductivityTensor effective_conductivity(const ThermalCellSolution& sol) {
    const PeriodicGrid& grid = sol.grid;
    const int dim = grid.dim();
    ConductivityTensor out;
    out.raw = Matrix::Zero(dim, dim);
    const double inv_h = 1.0 / grid.h();
    for (int i = 0; i < dim; ++i) {
        const CellField& th = sol.theta[static_cast<std::size_t>(i)];
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < grid.cells(); ++c)
                s += sol.K_faces[j][c] * ((i == j ? 1.0 : 0.0) + (th[grid.plus(j, c)] - th[c]) * inv_h);
            out.raw(j, i) = s * grid.cell_volume();
        }
    }
    double k_sum = 0.0;
    for (double k : sol.K) k_sum += k;
    out.kappa_hat = k_sum / static_cast<double>(sol.K.size());
    out.asymmetry = relative_asymmetry(out.raw);
    out.Btheta = symmetric_part(out.raw);
    if (out.asymmetry > kAsymmetryLimit)
        throw ValidationError("effective_conductivity: raw tensor asymmetry " + std::to_string(out.asymmetry) +
                              " exceeds " + std::to_string(kAsymmetryLimit));
    return out;
}

ConductivityTensor conductivity_tensor(const UnitCellGeometry& g, double kappa_f, double kappa_s,
                                       const SolverOptions& opt) {
    return effective_conductivity(solve_thermal_cell(g, kappa_f, kappa_s, opt));
}

double harmonic_mean_conductivity(const UnitCellGeometry& g, double kappa_f, double kappa_s) {
    const double m = porosity(g);
    return 1.0 / (m / kappa_f + (1.0 - m) / kappa_s);
}

double arithmetic_mean_conductivity(const UnitCellGeometry& g, double kappa_f, double kappa_s) {
    const double m = porosity(g);
    return m * kappa_f + (1.0 - m) * kappa_s;
}

}  // namespace thermoporo
