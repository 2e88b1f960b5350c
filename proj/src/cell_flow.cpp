#include "thermoporo/cell_flow.hpp"

#include "thermoporo/error.hpp"
#include "thermoporo/parallel.hpp"
#include "thermoporo/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace thermoporo {

namespace {

constexpr double kAsymmetryLimit = 1e-6;

/// Integral over the cell of each velocity component (h^d Σ over faces).
Vector integrate_velocity(const PeriodicGrid& grid, const FaceField& v) {
    Vector out = Vector::Zero(grid.dim());
    for (int j = 0; j < grid.dim(); ++j) {
        double s = 0.0;
        for (double x : v[j]) s += x;
        out[j] = s * grid.cell_volume();
    }
    return out;
}

FaceField unit_force(const PeriodicGrid& grid, int axis) {
    FaceField f = grid.make_faces();
    std::fill(f[axis].begin(), f[axis].end(), 1.0);
    return f;
}

void check_asymmetry(const char* who, double asym) {
    if (asym > kAsymmetryLimit)
        throw ValidationError(std::string(who) + ": raw tensor asymmetry " + std::to_string(asym) + " exceeds " +
                              std::to_string(kAsymmetryLimit));
}

std::size_t interval_of(const std::vector<double>& t, double s) {
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const auto k = static_cast<std::size_t>(std::distance(t.begin(), it));
    return std::clamp<std::size_t>(k, 1, t.size() - 1) - 1;
}

}  // namespace

// ---- steady permeability ----------------------------------------------------------

SteadyPermeability steady_permeability(const UnitCellGeometry& g, double mu1, const SolverOptions& opt) {
    if (!(mu1 > 0.0) || !std::isfinite(mu1)) throw std::invalid_argument("steady_permeability: mu1 must be positive");
    g.require_both_phases("steady_permeability");
    const auto perc = percolating_axes(g, Phase::Fluid);
    if (std::none_of(perc.begin(), perc.begin() + g.dim(), [](bool b) { return b; }))
        throw DegenerateGeometry("steady_permeability: the fluid phase percolates along no axis");

    const PeriodicGrid grid(g.dim(), g.n());
    const StokesSolver solver(grid, g.chi(), 1.0);
    const int dim = g.dim();

    SteadyPermeability out;
    out.mu1 = mu1;
    out.raw = Matrix::Zero(dim, dim);
    out.reports.assign(static_cast<std::size_t>(dim), SolverReport{0, 0.0, opt.tol, true});
    parallel_for(static_cast<std::size_t>(dim), [&](std::size_t i) {
        const int axis = static_cast<int>(i);
        if (!perc[i]) {
            out.degenerate[i] = true;
            return;
        }
        const auto sol = solver.solve(unit_force(grid, axis), nullptr, opt);
        out.raw.col(axis) = integrate_velocity(grid, sol.velocity) / mu1;
        out.reports[i] = sol.report;
    });
    out.asymmetry = relative_asymmetry(out.raw);
    out.B2 = symmetric_part(out.raw);
    check_asymmetry("steady_permeability", out.asymmetry);
    return out;
}

// ---- kernel -------------------------------------------------------------------------

Matrix PermeabilityKernel::A_at(double s) const {
    if (t.empty()) throw std::logic_error("PermeabilityKernel: empty kernel");
    if (s <= t.front()) return A.front();
    if (s >= t.back()) return A.back();
    const auto k = interval_of(t, s);
    const double w = (s - t[k]) / (t[k + 1] - t[k]);
    return (1.0 - w) * A[k] + w * A[k + 1];
}

Matrix PermeabilityKernel::B1_at(double s) const {
    if (t.empty()) throw std::logic_error("PermeabilityKernel: empty kernel");
    if (s > t.back()) return Matrix::Zero(dim, dim);
    if (s <= t.front()) return B1.front();
    const auto k = interval_of(t, s);
    const double w = (s - t[k]) / (t[k + 1] - t[k]);
    return (1.0 - w) * B1[k] + w * B1[k + 1];
}

Matrix PermeabilityKernel::C_at(double s) const {
    if (t.empty() || C.size() != t.size()) throw std::logic_error("PermeabilityKernel: integrals not built");
    if (s <= t.front()) return Matrix::Zero(dim, dim);
    if (s >= t.back()) return C.back() + (s - t.back()) * A.back();
    const auto k = interval_of(t, s);
    return C[k] + 0.5 * (s - t[k]) * (A[k] + A_at(s));
}

Matrix PermeabilityKernel::integral_B1() const {
    Matrix s = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) s += 0.5 * (t[k + 1] - t[k]) * (B1[k] + B1[k + 1]);
    return s;
}

void PermeabilityKernel::rebuild_integrals() {
    C.assign(t.size(), Matrix::Zero(dim, dim));
    for (std::size_t k = 1; k < t.size(); ++k) C[k] = C[k - 1] + 0.5 * (t[k] - t[k - 1]) * (A[k - 1] + A[k]);
}

double PermeabilityKernel::saturation_time(double fraction) const {
    if (t.empty()) return 0.0;
    const double target = fraction * A.back().trace();
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double a0 = A[k - 1].trace();
        const double a1 = A[k].trace();
        if (a1 >= target) return a1 == a0 ? t[k] : t[k - 1] + (target - a0) / (a1 - a0) * (t[k] - t[k - 1]);
    }
    return t.back();
}

namespace {

/// Column-wise state of the lockstep time integration.
struct ColumnState {
    FaceField v;
    CellField p;
};

Matrix advance(const StokesSolver& solver, std::vector<ColumnState>& cols, const std::array<bool, 3>& skip,
               const SolverOptions& opt, int& iterations) {
    const PeriodicGrid& grid = solver.grid();
    const int dim = grid.dim();
    Matrix a = Matrix::Zero(dim, dim);
    std::vector<int> its(static_cast<std::size_t>(dim), 0);
    parallel_for(static_cast<std::size_t>(dim), [&](std::size_t i) {
        if (skip[i]) return;
        const int axis = static_cast<int>(i);
        auto sol = solver.solve(unit_force(grid, axis), &cols[i].v, opt, &cols[i].p);
        cols[i].v = std::move(sol.velocity);
        cols[i].p = std::move(sol.pressure);
        its[i] = sol.report.iterations;
        a.col(axis) = integrate_velocity(grid, cols[i].v);
    });
    for (int n : its) iterations += n;
    return a;
}

std::vector<ColumnState> fresh_columns(const PeriodicGrid& grid) {
    std::vector<ColumnState> cols(static_cast<std::size_t>(grid.dim()));
    for (auto& c : cols) {
        c.v = grid.make_faces();
        c.p = grid.make_cells();
    }
    return cols;
}

}  // namespace

PermeabilityKernel kernel_permeability(const UnitCellGeometry& g, double mu1, double tau0, double rho_f,
                                       const KernelOptions& opt) {
    if (!(mu1 > 0.0) || !std::isfinite(mu1)) throw std::invalid_argument("kernel_permeability: mu1 must be positive");
    if (!(tau0 > 0.0) || !(rho_f > 0.0)) throw std::invalid_argument("kernel_permeability: tau0 and rho_f must be positive");
    if (opt.dt < 0.0 || opt.T < 0.0 || opt.steps < 1 || opt.max_steps < 1)
        throw std::invalid_argument("kernel_permeability: invalid stepping options");
    g.require_both_phases("kernel_permeability");
    const auto perc = percolating_axes(g, Phase::Fluid);
    if (std::none_of(perc.begin(), perc.begin() + g.dim(), [](bool b) { return b; }))
        throw DegenerateGeometry("kernel_permeability: the fluid phase percolates along no axis");

    const PeriodicGrid grid(g.dim(), g.n());
    const int dim = g.dim();
    const double inertia = tau0 * rho_f;

    PermeabilityKernel K;
    K.dim = dim;
    K.mu1 = mu1;
    K.tau0 = tau0;
    K.rho_f = rho_f;
    std::array<bool, 3> skip{true, true, true};
    for (int i = 0; i < dim; ++i) {
        skip[static_cast<std::size_t>(i)] = !perc[static_cast<std::size_t>(i)];
        K.degenerate[static_cast<std::size_t>(i)] = skip[static_cast<std::size_t>(i)];
    }

    // Two probe steps of length inertia/(μ₁π²); the ratio of successive
    // increments estimates the slowest decay factor.
    {
        const double dt_probe = inertia / (mu1 * std::numbers::pi * std::numbers::pi);
        const StokesSolver probe(grid, g.chi(), mu1, StokesMode::implicit_step(inertia, dt_probe));
        auto cols = fresh_columns(grid);
        int its = 0;
        const Matrix a1 = advance(probe, cols, skip, opt.solver, its);
        const Matrix a2 = advance(probe, cols, skip, opt.solver, its);
        const Matrix d2 = a2 - a1;
        const double denom = (a1.array() * a1.array()).sum();
        const double r = denom > 0.0 ? (d2.array() * a1.array()).sum() / denom : 0.0;
        const double r_safe = std::clamp(r, 1e-6, 1.0 - 1e-9);
        K.lambda_est = (1.0 / r_safe - 1.0) * inertia / (mu1 * dt_probe);
        K.solver_iterations += its;
    }

    const double T0 = opt.T > 0.0 ? opt.T : 10.0 * inertia / (mu1 * K.lambda_est);
    const double dt = opt.dt > 0.0 ? opt.dt : T0 / opt.steps;
    const int target = std::max(1, static_cast<int>(std::ceil(T0 / dt - 1e-9)));

    const StokesSolver solver(grid, g.chi(), mu1, StokesMode::implicit_step(inertia, dt));
    auto cols = fresh_columns(grid);
    K.t.push_back(0.0);
    K.A.push_back(Matrix::Zero(dim, dim));
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= opt.max_steps; ++k) {
        K.A.push_back(advance(solver, cols, skip, opt.solver, K.solver_iterations));
        K.t.push_back(k * dt);
        const Matrix d_new = K.A[K.A.size() - 1] - K.A[K.A.size() - 2];
        if (k >= 2) {
            const Matrix d_old = K.A[K.A.size() - 2] - K.A[K.A.size() - 3];
            const double ratio = d_old.norm() > 0.0 ? d_new.norm() / d_old.norm() : 0.0;
            const double scale = K.A.back().norm();
            gap = ratio < 1.0 && scale > 0.0 ? d_new.norm() * ratio / (1.0 - ratio) / scale
                                             : std::numeric_limits<double>::infinity();
        }
        if (k >= target && (opt.saturation_tol <= 0.0 || gap <= opt.saturation_tol)) break;
    }
    K.gap_estimate = gap;
    if (opt.saturation_tol > 0.0 && !(gap <= opt.saturation_tol))
        K.warnings.push_back("kernel not saturated after " + std::to_string(K.t.size() - 1) +
                             " steps (estimated gap " + std::to_string(gap) + ")");

    const std::size_t M = K.t.size() - 1;
    K.B1.resize(M + 1);
    for (std::size_t k = 0; k <= M; ++k) {
        const std::size_t lo = k == 0 ? 0 : k - 1;
        const std::size_t hi = k == M ? M : k + 1;
        K.B1[k] = (K.A[hi] - K.A[lo]) / (K.t[hi] - K.t[lo]);
    }
    const double a_norm = K.A.back().norm();
    K.tail = a_norm > 0.0 ? (K.A[M] - K.A[M - 1]).norm() / a_norm : 0.0;
    if (K.tail > opt.tail_tol)
        K.warnings.push_back("kernel tail " + std::to_string(K.tail) + " exceeds " + std::to_string(opt.tail_tol));
    K.rebuild_integrals();
    return K;
}

// ---- inertial tensor ------------------------------------------------------------------

InertialTensor inertial_tensor(const UnitCellGeometry& g, const SolverOptions& opt) {
    if (!g.has_both_phases())
        throw DegenerateGeometry("inertial_tensor: the cell has no fluid/solid interface");
    const PeriodicGrid grid(g.dim(), g.n());
    const int dim = g.dim();
    const auto fluid = g.chi();

    InertialTensor out;
    out.porosity = porosity(g);
    out.raw = Matrix::Zero(dim, dim);
    out.reports.resize(static_cast<std::size_t>(dim));
    const double inv_h = 1.0 / grid.h();
    parallel_for(static_cast<std::size_t>(dim), [&](std::size_t idx) {
        const int i = static_cast<int>(idx);
        FaceField flux = grid.make_faces();
        for (std::size_t c = 0; c < grid.cells(); ++c)
            flux[i][c] = -static_cast<double>(interface_orientation(grid, fluid, i, c));
        const auto phi = solve_neumann_laplace(grid, fluid, flux, opt);
        out.reports[idx] = phi.report;
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < grid.cells(); ++c) {
                const auto p = grid.plus(j, c);
                if (!fluid[c] || !fluid[p]) continue;
                s += (i == j ? 1.0 : 0.0) + (phi.u[p] - phi.u[c]) * inv_h;
            }
            out.raw(j, i) = s * grid.cell_volume();
        }
    });
    out.asymmetry = relative_asymmetry(out.raw);
    out.M = symmetric_part(out.raw);
    out.B3 = out.porosity * Matrix::Identity(dim, dim) - out.M;
    check_asymmetry("inertial_tensor", out.asymmetry);
    return out;
}

}  // namespace thermoporo
