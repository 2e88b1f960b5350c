#include "thermoporo/macro_solver.hpp"

#include "thermoporo/error.hpp"

#include <Eigen/SparseCore>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace thermoporo {

// ---- effective medium -----------------------------------------------------------

void EffectiveMedium::check() const {
    if (dim != 2 && dim != 3) throw ValidationError("medium: dim must be 2 or 3");
    if (Btheta.rows() != dim || Btheta.cols() != dim) throw ValidationError("medium: Btheta has the wrong shape");
    const bool ok_payload = (regime == Regime::SteadyDarcy && steady && !kernel && !inertial) ||
                            (regime == Regime::MemoryDarcy && kernel && !steady && !inertial) ||
                            (regime == Regime::InviscidDarcy && inertial && !steady && !kernel);
    if (!ok_payload) throw ValidationError("medium: payload does not match regime " + std::string(to_string(regime)));
    if (steady && steady->B2.rows() != dim) throw ValidationError("medium: B2 has the wrong shape");
    if (kernel && (kernel->dim != dim || kernel->t.size() < 2)) throw ValidationError("medium: kernel is malformed");
    if (inertial && inertial->M.rows() != dim) throw ValidationError("medium: inertial tensor has the wrong shape");
}

EffectiveMedium assemble(const UnitCellGeometry& g, const LimitParameters& p, const AssembleOptions& opt) {
    EffectiveMedium med;
    med.regime = classify(p);
    med.params = p;
    med.dim = g.dim();
    med.porosity = porosity(g);
    med.c_hat = effective_capacity(p, med.porosity);
    const auto thermal = conductivity_tensor(g, p.kappa0f, p.kappa0s, opt.solver);
    med.Btheta = thermal.Btheta;
    med.kappa_hat = thermal.kappa_hat;
    switch (med.regime) {
    case Regime::SteadyDarcy: med.steady = steady_permeability(g, p.mu1, opt.solver); break;
    case Regime::MemoryDarcy: {
        KernelOptions kopt = opt.kernel;
        kopt.solver = opt.solver;
        med.kernel = kernel_permeability(g, p.mu1, p.tau0, p.rho_f, kopt);
        break;
    }
    case Regime::InviscidDarcy: med.inertial = inertial_tensor(g, opt.solver); break;
    }
    med.geometry_hash = geometry_hash(g);
    med.cell_resolution = g.n();
    med.tolerance = opt.solver.tol;
    return med;
}

// ---- discrete operators -----------------------------------------------------------

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using EVec = Eigen::VectorXd;

EVec to_eigen(std::span<const double> x) { return Eigen::Map<const EVec>(x.data(), static_cast<Eigen::Index>(x.size())); }

CellField to_field(const EVec& x) { return CellField(x.data(), x.data() + x.size()); }

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

/// Face-gradient pieces on the macro grid. G[d][j] maps cell values to the
/// j-th derivative on faces normal to d; H[d][j] maps boundary data stored on
/// faces normal to d to the same quantity (Dirichlet variant only).
struct Gradients {
    std::array<std::array<SpMat, 3>, 3> G;
    std::array<std::array<SpMat, 3>, 3> H;
    std::array<SpMat, 3> Div;  ///< cells x faces_d
    bool dirichlet = false;
};

/// Centered difference along j of cell c, one-sided at the domain boundary.
void add_cell_difference(const MacroGrid& g, std::size_t c, int j, double weight, int row,
                         std::vector<Triplet>& out) {
    const auto x = g.coords(c);
    const double h = g.h();
    auto shifted = [&](int delta) {
        auto y = x;
        y[j] += delta;
        return static_cast<int>(g.index(y));
    };
    if (x[j] > 0 && x[j] < g.N() - 1) {
        out.emplace_back(row, shifted(1), weight / (2.0 * h));
        out.emplace_back(row, shifted(-1), -weight / (2.0 * h));
    } else if (x[j] == 0) {
        out.emplace_back(row, shifted(1), weight / h);
        out.emplace_back(row, static_cast<int>(c), -weight / h);
    } else {
        out.emplace_back(row, static_cast<int>(c), weight / h);
        out.emplace_back(row, shifted(-1), -weight / h);
    }
}

Gradients build_gradients(const MacroGrid& g, bool dirichlet) {
    Gradients out;
    out.dirichlet = dirichlet;
    const int dim = g.dim();
    const int N = g.N();
    const double h = g.h();
    const auto cells = static_cast<Eigen::Index>(g.cells());
    for (int d = 0; d < dim; ++d) {
        const auto nf = static_cast<Eigen::Index>(g.faces(d));
        std::array<std::vector<Triplet>, 3> gt, ht;
        for (std::size_t f = 0; f < g.faces(d); ++f) {
            const auto x = g.face_coords(d, f);
            const int row = static_cast<int>(f);
            const bool low = x[d] == 0;
            const bool high = x[d] == N;
            if (!low && !high) {
                auto xl = x;
                xl[d] -= 1;
                const auto hi = g.index(x);
                const auto lo = g.index(xl);
                gt[d].emplace_back(row, static_cast<int>(hi), 1.0 / h);
                gt[d].emplace_back(row, static_cast<int>(lo), -1.0 / h);
                for (int j = 0; j < dim; ++j) {
                    if (j == d) continue;
                    add_cell_difference(g, lo, j, 0.5, row, gt[j]);
                    add_cell_difference(g, hi, j, 0.5, row, gt[j]);
                }
                continue;
            }
            if (!dirichlet) continue;
            // Half-cell normal difference against the boundary value on this face.
            auto xc = x;
            if (high) xc[d] -= 1;
            const auto c = static_cast<int>(g.index(xc));
            const double sign = low ? 1.0 : -1.0;
            gt[d].emplace_back(row, c, sign * 2.0 / h);
            ht[d].emplace_back(row, row, -sign * 2.0 / h);
            // Tangential derivatives from the boundary data in the same plane.
            for (int j = 0; j < dim; ++j) {
                if (j == d) continue;
                auto nb = [&](int delta) {
                    auto y = x;
                    y[j] += delta;
                    return static_cast<int>(g.face_index(d, y));
                };
                if (x[j] > 0 && x[j] < N - 1) {
                    ht[j].emplace_back(row, nb(1), 1.0 / (2.0 * h));
                    ht[j].emplace_back(row, nb(-1), -1.0 / (2.0 * h));
                } else if (x[j] == 0) {
                    ht[j].emplace_back(row, nb(1), 1.0 / h);
                    ht[j].emplace_back(row, row, -1.0 / h);
                } else {
                    ht[j].emplace_back(row, row, 1.0 / h);
                    ht[j].emplace_back(row, nb(-1), -1.0 / h);
                }
            }
        }
        for (int j = 0; j < dim; ++j) {
            out.G[d][j].resize(nf, cells);
            out.G[d][j].setFromTriplets(gt[j].begin(), gt[j].end());
            out.H[d][j].resize(nf, nf);
            out.H[d][j].setFromTriplets(ht[j].begin(), ht[j].end());
        }
        std::vector<Triplet> dt;
        for (std::size_t c = 0; c < g.cells(); ++c) {
            dt.emplace_back(static_cast<int>(c), static_cast<int>(g.high_face(d, c)), 1.0 / h);
            dt.emplace_back(static_cast<int>(c), static_cast<int>(g.low_face(d, c)), -1.0 / h);
        }
        out.Div[d].resize(cells, nf);
        out.Div[d].setFromTriplets(dt.begin(), dt.end());
    }
    return out;
}

/// Face flux matrix F_d(D) = Σ_j D(d,j) G[d][j].
SpMat flux_matrix(const Gradients& gr, const Matrix& D, int d, int dim) {
    SpMat F(gr.G[d][0].rows(), gr.G[d][0].cols());
    for (int j = 0; j < dim; ++j)
        if (D(d, j) != 0.0) F += D(d, j) * gr.G[d][j];
    return F;
}

/// Cell operator L(D) = -Σ_d Div_d F_d(D), i.e. the discretization of -div(D∇u).
SpMat cell_operator(const Gradients& gr, const Matrix& D, int dim) {
    SpMat L(gr.Div[0].rows(), gr.G[0][0].cols());
    for (int d = 0; d < dim; ++d) L -= gr.Div[d] * flux_matrix(gr, D, d, dim);
    return L;
}

/// Affine boundary part of -div(D∇u) for Dirichlet data b (faces).
EVec boundary_part(const Gradients& gr, const Matrix& D, const FaceField& b, int dim) {
    EVec out = EVec::Zero(gr.Div[0].rows());
    for (int d = 0; d < dim; ++d) {
        EVec flux = EVec::Zero(gr.Div[d].cols());
        for (int j = 0; j < dim; ++j) {
            if (D(d, j) == 0.0) continue;
            flux += D(d, j) * (gr.H[d][j] * to_eigen(b[d]));
        }
        out -= gr.Div[d] * flux;
    }
    return out;
}

/// Sparse LU for 2D and small 3D grids, ILUT-preconditioned BiCGSTAB otherwise.
class SparseSolver {
public:
    void compute(SpMat A, bool direct, const std::string& what) {
        what_ = what;
        direct_ = direct;
        matrix_ = std::move(A);
        matrix_.makeCompressed();
        if (direct_) {
            lu_.compute(matrix_);
            if (lu_.info() != Eigen::Success) throw SolverError("macro: " + what + " factorization failed");
        } else {
            iterative_.preconditioner().setFillfactor(4);
            iterative_.setTolerance(1e-13);
            iterative_.setMaxIterations(5000);
            iterative_.compute(matrix_);
            if (iterative_.info() != Eigen::Success) throw SolverError("macro: " + what + " preconditioner setup failed");
        }
    }

    [[nodiscard]] EVec solve(const EVec& b, const EVec& guess) const {
        if (direct_) return lu_.solve(b);
        EVec x = iterative_.solveWithGuess(b, guess);
        if (iterative_.info() != Eigen::Success && iterative_.error() > 1e-9)
            throw SolverError("macro: " + what_ + " solve did not converge (residual " +
                              std::to_string(iterative_.error()) + ")");
        return x;
    }

private:
    bool direct_ = true;
    std::string what_;
    SpMat matrix_;
    Eigen::SparseLU<SpMat> lu_;
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> iterative_;
};

SpMat identity(Eigen::Index n, double s) {
    SpMat I(n, n);
    I.setIdentity();
    return s * I;
}

}  // namespace

// ---- solver ---------------------------------------------------------------------------

struct MacroSolver::Impl {
    MacroProblem prob;
    MacroGrid grid;
    int dim;
    double dt;
    int steps;
    Gradients neumann;
    Gradients dirichlet;

    double a_coef = 1.0;   ///< ∂q/∂p^{n+1}
    double b_coef = 0.0;   ///< ν₀/(p*Δt)
    double inv_pdt = 0.0;  ///< 1/(p*Δt)
    double m_beta = 0.0;
    double heat_mass = 0.0;  ///< τ₀ĉ/Δt
    Matrix D0;               ///< weight of ∇q^{n+1} in the Darcy law

    SpMat L0;
    std::array<SpMat, 3> F0;
    SparseSolver pressure_solver;
    SparseSolver heat_solver;

    std::vector<Matrix> abar;  ///< StepResponse averages Ā(j), grown on demand
    mutable std::vector<std::string> warnings;
    mutable bool warned_tangential = false;

    explicit Impl(MacroProblem p)
        : prob(std::move(p)), grid(prob.domain.dim, prob.domain.N), dim(prob.domain.dim), dt(prob.dt) {}

    void setup() {
        prob.domain.validate();
        prob.medium.check();
        if (prob.medium.dim != dim) throw std::invalid_argument("macro: medium and domain dimensions differ");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("macro: time step must be positive");
        if (!(prob.T >= 0.0)) throw std::invalid_argument("macro: final time must be >= 0");
        if (!(prob.picard_tol > 0.0) || prob.picard_max_iterations < 1)
            throw std::invalid_argument("macro: invalid Picard settings");
        const auto violations = validate(prob.medium.params);
        if (!violations.empty()) throw InadmissibleParameters("macro: inadmissible parameters: " + violations.front());
        steps = static_cast<int>(std::ceil(prob.T / dt - 1e-9));

        const LimitParameters& par = prob.medium.params;
        inv_pdt = 1.0 / (par.pstar * dt);
        b_coef = par.nu0 * inv_pdt;
        a_coef = 1.0 + b_coef;
        m_beta = prob.medium.porosity * par.beta0f;
        heat_mass = par.tau0 * prob.medium.c_hat / dt;

        switch (prob.medium.regime) {
        case Regime::SteadyDarcy: D0 = prob.medium.steady->B2; break;
        case Regime::InviscidDarcy: D0 = dt / (par.tau0 * par.rho_f) * prob.medium.inertial->M; break;
        case Regime::MemoryDarcy:
            D0 = prob.convolution == ConvolutionRule::StepResponse ? step_average(0)
                                                                   : 0.5 * dt * prob.medium.kernel->B1_at(0.0);
            break;
        }

        neumann = build_gradients(grid, false);
        dirichlet = build_gradients(grid, true);
        for (int d = 0; d < dim; ++d) F0[d] = flux_matrix(neumann, D0, d, dim);
        L0 = cell_operator(neumann, D0, dim);
        const auto n = static_cast<Eigen::Index>(grid.cells());
        const bool direct = dim == 2 || grid.cells() <= 4096;
        pressure_solver.compute(identity(n, inv_pdt) + a_coef * L0, direct, "pressure matrix");
        heat_solver.compute(identity(n, heat_mass) + cell_operator(dirichlet, prob.medium.Btheta, dim), direct,
                            "heat matrix");

        check_boundary_compatibility();
    }

    /// Ā(j) = (C((j+1)Δt) - C(jΔt))/Δt, held at A(T) once jΔt reaches the kernel horizon.
    Matrix step_average(std::size_t j) {
        const auto& K = *prob.medium.kernel;
        while (abar.size() <= j) {
            const double s = static_cast<double>(abar.size()) * dt;
            if (s >= K.horizon())
                abar.push_back(K.A.back());
            else
                abar.push_back((K.C_at(s + dt) - K.C_at(s)) / dt);
        }
        return abar[j];
    }

    void check_boundary_compatibility() {
        if (!prob.v0) return;
        const FaceField vb = boundary_velocity(0.0);
        double net = 0.0;
        for (int d = 0; d < dim; ++d)
            for (std::size_t c = 0; c < grid.cells(); ++c) net += (vb[d][grid.high_face(d, c)] - vb[d][grid.low_face(d, c)]);
        net *= grid.cell_volume() / grid.h();
        if (std::abs(net) > 1e-12 && prob.medium.params.pstar >= 1e6)
            warnings.push_back("net boundary inflow " + std::to_string(-net) +
                               " with nearly incompressible fluid (large p*): pressure grows like p* t");
    }

    [[nodiscard]] FaceField boundary_velocity(double t) const {
        FaceField out = grid.make_faces();
        if (!prob.v0) return out;
        for (int d = 0; d < dim; ++d) {
            for (std::size_t f = 0; f < grid.faces(d); ++f) {
                const auto x = grid.face_coords(d, f);
                if (x[d] != 0 && x[d] != grid.N()) continue;
                const Point v = prob.v0(grid.face_center(d, f), t);
                // (v - v0)·n = 0 with n = ±e_d fixes v_d = v0_d on both sides.
                out[d][f] = v[static_cast<std::size_t>(d)];
                if (!warned_tangential) {
                    for (int j = 0; j < dim; ++j) {
                        if (j != d && std::abs(v[static_cast<std::size_t>(j)]) > 0.0) {
                            warnings.emplace_back("tangential components of the boundary velocity are ignored");
                            warned_tangential = true;
                            break;
                        }
                    }
                }
            }
        }
        return out;
    }

    [[nodiscard]] CellField sample(const ScalarFunction& fn, double t) const {
        CellField out(grid.cells(), 0.0);
        if (!fn) return out;
        for (std::size_t c = 0; c < grid.cells(); ++c) out[c] = fn(grid.center(c), t);
        return out;
    }

    [[nodiscard]] FaceField boundary_temperature(double t) const {
        FaceField out = grid.make_faces();
        if (!prob.theta0) return out;
        for (int d = 0; d < dim; ++d)
            for (std::size_t f = 0; f < grid.faces(d); ++f) {
                const auto x = grid.face_coords(d, f);
                if (x[d] == 0 || x[d] == grid.N()) out[d][f] = prob.theta0(grid.face_center(d, f), t);
            }
        return out;
    }

    /// Adds -Σ_j W(d,j) G[d][j] u to the interior face fluxes.
    void add_flux(const Matrix& W, const CellField& u, double scale, FaceField& out) const {
        const EVec x = to_eigen(u);
        for (int d = 0; d < dim; ++d) {
            EVec f = EVec::Zero(static_cast<Eigen::Index>(grid.faces(d)));
            for (int j = 0; j < dim; ++j)
                if (W(d, j) != 0.0) f += W(d, j) * (neumann.G[d][j] * x);
            for (std::size_t k = 0; k < grid.faces(d); ++k) out[d][k] -= scale * f[static_cast<Eigen::Index>(k)];
        }
    }

    /// Darcy flux contributions that do not depend on q^{n+1}.
    FaceField history_flux(const MacroState& s) {
        FaceField h = grid.make_faces();
        const LimitParameters& par = prob.medium.params;
        switch (prob.medium.regime) {
        case Regime::SteadyDarcy: break;
        case Regime::InviscidDarcy:
            add_flux(prob.medium.inertial->M, s.Q, 1.0 / (par.tau0 * par.rho_f), h);
            break;
        case Regime::MemoryDarcy: {
            const auto n = s.q_history.size() - 1;  // levels 0..n stored
            const double t1 = s.t + dt;
            const auto& K = *prob.medium.kernel;
            // Accumulate Σ_lag W_lag(d,j) q_lag per tensor entry, then differentiate once.
            std::array<std::array<EVec, 3>, 3> acc;
            for (int d = 0; d < dim; ++d)
                for (int j = 0; j < dim; ++j) acc[d][j] = EVec::Zero(static_cast<Eigen::Index>(grid.cells()));
            for (std::size_t lag = 1; lag <= n + 1; ++lag) {
                Matrix W;
                if (prob.convolution == ConvolutionRule::StepResponse)
                    W = lag == n + 1 ? Matrix(K.A_at(t1) - step_average(n)) : Matrix(step_average(lag) - step_average(lag - 1));
                else
                    W = lag == n + 1 ? Matrix(0.5 * dt * K.B1_at(t1)) : Matrix(dt * K.B1_at(static_cast<double>(lag) * dt));
                if (W.isZero(0.0)) continue;
                const EVec q = to_eigen(s.q_history[n + 1 - lag]);
                for (int d = 0; d < dim; ++d)
                    for (int j = 0; j < dim; ++j)
                        if (W(d, j) != 0.0) acc[d][j] += W(d, j) * q;
            }
            for (int d = 0; d < dim; ++d) {
                EVec f = EVec::Zero(static_cast<Eigen::Index>(grid.faces(d)));
                for (int j = 0; j < dim; ++j) f += neumann.G[d][j] * acc[d][j];
                for (std::size_t k = 0; k < grid.faces(d); ++k) h[d][k] -= f[static_cast<Eigen::Index>(k)];
            }
            break;
        }
        }
        return h;
    }

    StepDiagnostics step(MacroState& s) {
        const double t1 = s.t + dt;
        const LimitParameters& par = prob.medium.params;
        const auto n = static_cast<Eigen::Index>(grid.cells());

        const FaceField vb = boundary_velocity(t1);
        FaceField known = history_flux(s);
        for (int d = 0; d < dim; ++d)
            for (std::size_t f = 0; f < grid.faces(d); ++f) known[d][f] += vb[d][f];
        const CellField div_known = div(grid, known);
        const CellField Sp = sample(prob.pressure_source, t1);
        const CellField St = sample(prob.heat_source, t1);
        const EVec theta_bc = boundary_part(dirichlet, prob.medium.Btheta, boundary_temperature(t1), dim);

        const EVec p_old = to_eigen(s.p);
        const EVec th_old = to_eigen(s.theta);
        EVec theta_it = th_old;
        EVec p_new, th_new, q_new;
        FaceField v = grid.make_faces();
        double mass = 0.0;
        int it = 0;
        bool converged = false;
        for (it = 1; it <= prob.picard_max_iterations; ++it) {
            const EVec q_rest = -b_coef * p_old + m_beta * theta_it;
            const EVec rhs_p = inv_pdt * p_old + to_eigen(Sp) - to_eigen(div_known) - L0 * q_rest;
            p_new = pressure_solver.solve(rhs_p, p_new.size() == n ? p_new : p_old);
            const EVec rhs_t = heat_mass * th_old + (par.beta0f / par.pstar) * (p_new - p_old) / dt + to_eigen(St) - theta_bc;
            th_new = heat_solver.solve(rhs_t, theta_it);
            q_new = a_coef * p_new - b_coef * p_old + m_beta * th_new;

            for (int d = 0; d < dim; ++d) {
                const EVec f = F0[d] * q_new;
                for (std::size_t k = 0; k < grid.faces(d); ++k) v[d][k] = known[d][k] - f[static_cast<Eigen::Index>(k)];
            }
            const CellField dv = div(grid, v);
            mass = 0.0;
            for (Eigen::Index c = 0; c < n; ++c) {
                const auto cc = static_cast<std::size_t>(c);
                mass = std::max(mass, std::abs(inv_pdt * (p_new[c] - p_old[c]) + dv[cc] - Sp[cc]));
            }
            const double dtheta = (th_new - theta_it).lpNorm<Eigen::Infinity>();
            const double theta_scale = std::max(1.0, th_new.lpNorm<Eigen::Infinity>());
            theta_it = th_new;
            if (mass <= prob.picard_tol && (m_beta == 0.0 || dtheta <= prob.picard_tol * theta_scale)) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw SolverError("macro: Picard iteration did not converge at t = " + std::to_string(t1) +
                              " (mass residual " + std::to_string(mass) + ")");
        if (it > 10)
            warnings.push_back("slow Picard contraction at t = " + std::to_string(t1) + " (" + std::to_string(it) +
                               " iterations); consider a smaller time step");

        s.p = to_field(p_new);
        s.theta = to_field(th_new);
        s.q = to_field(q_new);
        s.v = v;
        for (int d = 0; d < dim; ++d)
            for (std::size_t f = 0; f < grid.faces(d); ++f) s.w[d][f] += dt * v[d][f];
        if (prob.medium.regime == Regime::InviscidDarcy)
            for (std::size_t c = 0; c < grid.cells(); ++c) s.Q[c] += dt * s.q[c];
        if (prob.medium.regime == Regime::MemoryDarcy) s.q_history.push_back(s.q);
        for (std::size_t c = 0; c < grid.cells(); ++c) s.continuity_reference[c] += dt * Sp[c];
        s.t = t1;
        s.step += 1;

        StepDiagnostics dg;
        dg.t = s.t;
        dg.step = s.step;
        dg.picard_iterations = it;
        dg.mass_residual = mass;
        const CellField dw = div(grid, s.w);
        for (std::size_t c = 0; c < grid.cells(); ++c)
            dg.continuity_residual = std::max(dg.continuity_residual,
                                              std::abs(s.p[c] / par.pstar + dw[c] - s.continuity_reference[c]));
        dg.pressure_energy = 0.5 / par.pstar * inner(grid, s.p, s.p);
        dg.energy = dg.pressure_energy + 0.5 * par.tau0 * prob.medium.c_hat * inner(grid, s.theta, s.theta);
        dg.max_p = max_abs(s.p);
        dg.max_theta = max_abs(s.theta);
        for (int d = 0; d < dim; ++d) dg.max_v = std::max(dg.max_v, max_abs(s.v[d]));
        return dg;
    }
};

MacroSolver::MacroSolver(MacroProblem problem) : impl_(std::make_unique<Impl>(std::move(problem))) { impl_->setup(); }
MacroSolver::~MacroSolver() = default;
MacroSolver::MacroSolver(MacroSolver&&) noexcept = default;
MacroSolver& MacroSolver::operator=(MacroSolver&&) noexcept = default;

const MacroProblem& MacroSolver::problem() const noexcept { return impl_->prob; }
const MacroGrid& MacroSolver::grid() const noexcept { return impl_->grid; }
const std::vector<std::string>& MacroSolver::warnings() const noexcept { return impl_->warnings; }
int MacroSolver::step_count() const noexcept { return impl_->steps; }
FaceField MacroSolver::boundary_velocity(double t) const { return impl_->boundary_velocity(t); }

MacroState MacroSolver::initial_state() const {
    const MacroGrid& g = impl_->grid;
    MacroState s;
    s.p = g.make_cells();
    s.q = g.make_cells();
    s.theta = g.make_cells();
    s.v = g.make_faces();
    s.w = g.make_faces();
    s.Q = g.make_cells();
    s.continuity_reference = g.make_cells();
    if (impl_->prob.medium.regime == Regime::MemoryDarcy) s.q_history.push_back(s.q);
    return s;
}

void MacroSolver::set_initial_pressure(MacroState& s, const ScalarFunction& p0) const {
    if (s.step != 0) throw std::logic_error("set_initial_pressure: state has already been advanced");
    const MacroGrid& g = impl_->grid;
    const double pstar = impl_->prob.medium.params.pstar;
    for (std::size_t c = 0; c < g.cells(); ++c) {
        s.p[c] = p0(g.center(c), s.t);
        s.q[c] = s.p[c] + impl_->m_beta * s.theta[c];
    }
    if (!s.q_history.empty()) s.q_history.assign(1, s.q);
    const CellField dw = div(g, s.w);
    for (std::size_t c = 0; c < g.cells(); ++c) s.continuity_reference[c] = s.p[c] / pstar + dw[c];
}

StepDiagnostics MacroSolver::step(MacroState& s) const { return impl_->step(s); }

RunResult run(const MacroProblem& problem, const MacroState* initial, int output_every, const StepObserver& observer) {
    MacroSolver solver(problem);
    RunResult out;
    MacroState state = initial ? *initial : solver.initial_state();
    out.states.push_back(state);
    const int steps = solver.step_count();
    for (int k = 1; k <= steps; ++k) {
        out.diagnostics.push_back(solver.step(state));
        if (observer) observer(state, out.diagnostics.back());
        if (k == steps || (output_every > 0 && k % output_every == 0)) out.states.push_back(state);
    }
    out.warnings = solver.warnings();
    return out;
}

}  // namespace thermoporo
