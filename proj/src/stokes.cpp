#include "thermoporo/stokes.hpp"

#include "thermoporo/error.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace thermoporo {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Factor = Eigen::SimplicialLDLT<SpMat>;

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

StokesMode StokesMode::implicit_step(double rho_tau, double dt) {
    if (!(rho_tau >= 0.0) || !std::isfinite(rho_tau)) throw std::invalid_argument("StokesMode: inertia must be >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("StokesMode: time step must be positive");
    return StokesMode{rho_tau, dt};
}

struct StokesSolver::Impl {
    PeriodicGrid grid;
    std::vector<std::uint8_t> fluid;
    double mu;
    StokesMode mode;
    double c0;
    ComponentLabels labels;

    // Velocity unknowns: local index of face (d,c) or -1 when held at zero.
    std::array<std::vector<int>, 3> local;
    std::array<std::vector<std::size_t>, 3> faces;
    std::array<Factor, 3> viscous;

    // Pressure Laplacian B B^T with one pinned cell per fluid component.
    std::vector<int> cell_local;
    std::vector<std::size_t> cell_list;
    std::vector<std::uint8_t> first_flags;  ///< per entry of cell_list
    std::vector<std::uint8_t> pinned;       ///< per cell: first cell of its component
    Factor pressure_laplacian;
    bool has_pressure_laplacian = false;

    Impl(const PeriodicGrid& g, std::span<const std::uint8_t> chi, double mu_, StokesMode mode_)
        : grid(g), fluid(chi.begin(), chi.end()), mu(mu_), mode(mode_), c0(mode_.c0()) {}

    [[nodiscard]] bool is_active(int d, std::size_t c) const noexcept { return local[d][c] >= 0; }

    void build() {
        const std::size_t n = grid.cells();
        const double inv_h2 = 1.0 / (grid.h() * grid.h());
        labels = label_components(grid, fluid);

        for (int d = 0; d < grid.dim(); ++d) {
            local[d].assign(n, -1);
            for (std::size_t c = 0; c < n; ++c) {
                if (fluid[c] && fluid[grid.plus(d, c)]) {
                    local[d][c] = static_cast<int>(faces[d].size());
                    faces[d].push_back(c);
                }
            }
        }

        for (int d = 0; d < grid.dim(); ++d) {
            const auto m = faces[d].size();
            if (m == 0) continue;
            std::vector<Triplet> trip;
            trip.reserve(m * (2 * static_cast<std::size_t>(grid.dim()) + 1));
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t c = faces[d][i];
                double diag = c0;
                for (int a = 0; a < grid.dim(); ++a) {
                    for (std::size_t nb : {grid.plus(a, c), grid.minus(a, c)}) {
                        if (is_active(d, nb)) {
                            diag += mu * inv_h2;
                            trip.emplace_back(static_cast<int>(i), local[d][nb], -mu * inv_h2);
                        } else {
                            diag += (a == d ? 1.0 : 2.0) * mu * inv_h2;
                        }
                    }
                }
                trip.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
            }
            SpMat A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            A.setFromTriplets(trip.begin(), trip.end());
            viscous[d].compute(A);
            if (viscous[d].info() != Eigen::Success)
                throw SolverError("stokes: factorization of the viscous operator failed");
        }

        cell_local.assign(n, -1);
        for (std::size_t c = 0; c < n; ++c) {
            if (!fluid[c]) continue;
            cell_local[c] = static_cast<int>(cell_list.size());
            cell_list.push_back(c);
        }
        first_flags.assign(cell_list.size(), 0);
        pinned.assign(n, 0);
        std::vector<bool> seen(static_cast<std::size_t>(labels.count), false);
        for (std::size_t i = 0; i < cell_list.size(); ++i) {
            const auto comp = static_cast<std::size_t>(labels.label[cell_list[i]]);
            if (seen[comp]) continue;
            seen[comp] = true;
            first_flags[i] = 1;
            pinned[cell_list[i]] = 1;
        }
        if (c0 > 0.0) build_pressure_laplacian();
    }

    void build_pressure_laplacian() {
        const double inv_h2 = 1.0 / (grid.h() * grid.h());
        std::vector<Triplet> trip;
        for (std::size_t i = 0; i < cell_list.size(); ++i) {
            const std::size_t c = cell_list[i];
            if (pinned[c]) {
                trip.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
                continue;
            }
            double diag = 0.0;
            for (int d = 0; d < grid.dim(); ++d) {
                const std::size_t p = grid.plus(d, c);
                const std::size_t m = grid.minus(d, c);
                for (auto [nb, act] : {std::pair{p, is_active(d, c)}, std::pair{m, is_active(d, m)}}) {
                    if (!act) continue;
                    diag += inv_h2;
                    if (pinned[nb]) continue;
                    trip.emplace_back(static_cast<int>(i), cell_local[nb], -inv_h2);
                }
            }
            trip.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
        }
        const auto m = static_cast<Eigen::Index>(cell_list.size());
        SpMat L(m, m);
        L.setFromTriplets(trip.begin(), trip.end());
        pressure_laplacian.compute(L);
        if (pressure_laplacian.info() != Eigen::Success)
            throw SolverError("stokes: factorization of the pressure Laplacian failed");
        has_pressure_laplacian = true;
    }

    /// u = A^-1 rhs, component by component (inactive faces set to zero).
    void apply_viscous_inverse(const FaceField& rhs, FaceField& u) const {
        for (int d = 0; d < grid.dim(); ++d) {
            std::fill(u[d].begin(), u[d].end(), 0.0);
            const auto m = faces[d].size();
            if (m == 0) continue;
            Eigen::VectorXd b(static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i) b[static_cast<Eigen::Index>(i)] = rhs[d][faces[d][i]];
            const Eigen::VectorXd x = viscous[d].solve(b);
            for (std::size_t i = 0; i < m; ++i) u[d][faces[d][i]] = x[static_cast<Eigen::Index>(i)];
        }
    }

    /// B^T p: pressure gradient on active faces.
    void apply_gradient(std::span<const double> p, FaceField& out) const {
        const double inv_h = 1.0 / grid.h();
        for (int d = 0; d < grid.dim(); ++d)
            for (std::size_t c = 0; c < grid.cells(); ++c)
                out[d][c] = is_active(d, c) ? (p[grid.plus(d, c)] - p[c]) * inv_h : 0.0;
    }

    /// B u = -div u on fluid cells, zero on solid cells.
    void apply_negative_divergence(const FaceField& u, std::span<double> out) const {
        const double inv_h = 1.0 / grid.h();
        for (std::size_t c = 0; c < grid.cells(); ++c) {
            if (!fluid[c]) {
                out[c] = 0.0;
                continue;
            }
            double s = 0.0;
            for (int d = 0; d < grid.dim(); ++d) s += u[d][c] - u[d][grid.minus(d, c)];
            out[c] = -s * inv_h;
        }
    }

    void precondition(std::span<const double> r, std::span<double> z) const {
        for (std::size_t c = 0; c < r.size(); ++c) z[c] = mu * r[c];
        if (!has_pressure_laplacian) return;
        Eigen::VectorXd b(static_cast<Eigen::Index>(cell_list.size()));
        for (std::size_t i = 0; i < cell_list.size(); ++i) b[static_cast<Eigen::Index>(i)] = r[cell_list[i]];
        // Pinned rows carry no equation; their value is fixed by the projection.
        for (std::size_t i = 0; i < cell_list.size(); ++i)
            if (is_first_of_component(i)) b[static_cast<Eigen::Index>(i)] = 0.0;
        const Eigen::VectorXd x = pressure_laplacian.solve(b);
        std::vector<double> y(r.size(), 0.0);
        for (std::size_t i = 0; i < cell_list.size(); ++i) y[cell_list[i]] = x[static_cast<Eigen::Index>(i)];
        project_components(y, labels);
        for (std::size_t c = 0; c < r.size(); ++c) z[c] += c0 * y[c];
    }

    [[nodiscard]] bool is_first_of_component(std::size_t i) const { return first_flags[i] != 0; }
};

StokesSolver::StokesSolver(const PeriodicGrid& grid, std::span<const std::uint8_t> fluid, double mu, StokesMode mode) {
    if (fluid.size() != grid.cells()) throw std::invalid_argument("stokes: mask does not match grid");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("stokes: viscous mode requires mu > 0");
    if (!(mode.inertia >= 0.0) || (mode.inertia > 0.0 && !(mode.dt > 0.0)))
        throw std::invalid_argument("stokes: invalid time-step mode");
    const auto fluid_cells = static_cast<std::size_t>(std::count_if(fluid.begin(), fluid.end(), [](auto v) { return v != 0; }));
    if (fluid_cells == 0) throw DegenerateGeometry("stokes: the cell has no fluid");
    if (fluid_cells == grid.cells() && mode.c0() == 0.0)
        throw DegenerateGeometry("stokes: steady flow in a cell without solid is unbounded");
    impl_ = std::make_unique<Impl>(grid, fluid, mu, mode);
    impl_->build();
}

StokesSolver::~StokesSolver() = default;
StokesSolver::StokesSolver(StokesSolver&&) noexcept = default;
StokesSolver& StokesSolver::operator=(StokesSolver&&) noexcept = default;

const PeriodicGrid& StokesSolver::grid() const noexcept { return impl_->grid; }
double StokesSolver::mu() const noexcept { return impl_->mu; }
const StokesMode& StokesSolver::mode() const noexcept { return impl_->mode; }
bool StokesSolver::active(int d, std::size_t c) const noexcept { return impl_->is_active(d, c); }
int StokesSolver::fluid_components() const noexcept { return impl_->labels.count; }

StokesSolution StokesSolver::solve(const FaceField& force, const FaceField* v_prev, const SolverOptions& opt,
                                   const CellField* pressure_guess) const {
    const Impl& s = *impl_;
    const PeriodicGrid& g = s.grid;
    const std::size_t n = g.cells();
    if (force.dim != g.dim()) throw std::invalid_argument("stokes: force layout mismatch");
    for (int d = 0; d < g.dim(); ++d)
        if (force[d].size() != n || (v_prev && (*v_prev)[d].size() != n))
            throw std::invalid_argument("stokes: face field layout mismatch");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("stokes: tolerance must be positive");

    FaceField rhs = g.make_faces();
    for (int d = 0; d < g.dim(); ++d)
        for (std::size_t c = 0; c < n; ++c) {
            if (!s.is_active(d, c)) continue;
            rhs[d][c] = force[d][c] + (v_prev ? s.c0 * (*v_prev)[d][c] : 0.0);
        }

    StokesSolution out;
    out.report.tolerance = opt.tol;
    out.pressure.assign(n, 0.0);
    if (pressure_guess) {
        if (pressure_guess->size() != n) throw std::invalid_argument("stokes: pressure guess layout mismatch");
        out.pressure = *pressure_guess;
        project_components(out.pressure, s.labels);
    }

    FaceField work = g.make_faces();
    s.apply_gradient(out.pressure, work);
    for (int d = 0; d < g.dim(); ++d)
        for (std::size_t c = 0; c < n; ++c) work[d][c] = rhs[d][c] - work[d][c];
    out.velocity = g.make_faces();
    s.apply_viscous_inverse(work, out.velocity);

    auto divergence_measure = [&](const FaceField& u) {
        double umax = 0.0;
        for (int d = 0; d < g.dim(); ++d) umax = std::max(umax, max_abs(u[d]));
        return max_abs_divergence(g, u) / std::max(1.0, umax);
    };

    std::vector<double> r(n), z(n), dir(n), Sd(n);
    s.apply_negative_divergence(out.velocity, r);
    double measure = divergence_measure(out.velocity);
    const int cap = opt.max_iterations > 0 ? opt.max_iterations : default_iteration_cap(g.n());

    if (measure > opt.tol) {
        s.precondition(r, z);
        project_components(z, s.labels);
        dir = z;
        double rz = dot(r, z);
        FaceField w = g.make_faces();
        while (out.report.iterations < cap) {
            s.apply_gradient(dir, work);
            s.apply_viscous_inverse(work, w);
            s.apply_negative_divergence(w, Sd);
            const double dSd = dot(dir, Sd);
            if (!(dSd > 0.0)) break;
            const double alpha = rz / dSd;
            for (std::size_t c = 0; c < n; ++c) {
                out.pressure[c] += alpha * dir[c];
                r[c] -= alpha * Sd[c];
            }
            for (int d = 0; d < g.dim(); ++d)
                for (std::size_t c = 0; c < n; ++c) out.velocity[d][c] -= alpha * w[d][c];
            ++out.report.iterations;
            measure = divergence_measure(out.velocity);
            if (measure <= opt.tol) break;
            s.precondition(r, z);
            project_components(z, s.labels);
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t c = 0; c < n; ++c) dir[c] = z[c] + beta * dir[c];
        }
    }
    project_components(out.pressure, s.labels);
    out.report.residual = measure;
    out.report.converged = measure <= opt.tol;
    if (!out.report.converged)
        throw SolverError("stokes: no convergence after " + std::to_string(out.report.iterations) +
                          " iterations (divergence " + std::to_string(measure) + ")");
    return out;
}

StokesSolution solve_stokes(const PeriodicGrid& grid, std::span<const std::uint8_t> fluid, double mu,
                            const FaceField& force, StokesMode mode, const FaceField* v_prev, const SolverOptions& opt) {
    const StokesSolver solver(grid, fluid, mu, mode);
    return solver.solve(force, v_prev, opt);
}

double max_abs_divergence(const PeriodicGrid& grid, const FaceField& v) { return max_abs(div(grid, v)); }

}  // namespace thermoporo
