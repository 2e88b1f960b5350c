#include "thermoporo/linear_solvers.hpp"

#include "thermoporo/error.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermoporo {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void subtract_mean(std::span<double> x) {
    if (x.empty()) return;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (auto& v : x) v -= mean;
}

}  // namespace

SolverReport conjugate_gradient(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                                const LinearOperator& precond, const Projection& project, double tol,
                                int max_iterations) {
    if (!(tol > 0.0)) throw std::invalid_argument("conjugate_gradient: tolerance must be positive");
    const std::size_t n = b.size();
    SolverReport rep;
    rep.tolerance = tol;

    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        rep.converged = true;
        return rep;
    }

    std::vector<double> r(n), z(n), p(n), Ap(n);
    auto true_residual = [&] {
        A(x, Ap);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
        if (project) project(r);
        return norm2(r) / bnorm;
    };

    if (project) project(x);
    double rel = true_residual();
    while (rep.iterations < max_iterations && rel > tol) {
        // One Krylov cycle; restarts from the true residual when the recursive
        // estimate claims convergence but the true residual disagrees.
        if (precond)
            precond(r, z);
        else
            std::copy(r.begin(), r.end(), z.begin());
        if (project) project(z);
        p = z;
        double rz = dot(r, z);
        bool stalled = false;
        while (rep.iterations < max_iterations) {
            A(p, Ap);
            const double pAp = dot(p, Ap);
            if (!(pAp > 0.0)) {
                stalled = true;
                break;
            }
            const double alpha = rz / pAp;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
            }
            ++rep.iterations;
            if (norm2(r) / bnorm <= 0.5 * tol) break;
            if (precond)
                precond(r, z);
            else
                std::copy(r.begin(), r.end(), z.begin());
            if (project) project(z);
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        if (project) project(x);
        const double previous = rel;
        rel = true_residual();
        if (stalled && rel >= previous) break;
    }
    rep.residual = rel;
    rep.converged = rel <= tol;
    return rep;
}

FaceField harmonic_face_average(const PeriodicGrid& g, std::span<const double> K) {
    if (K.size() != g.cells()) throw std::invalid_argument("harmonic_face_average: field does not match grid");
    FaceField out = g.make_faces();
    for (int d = 0; d < g.dim(); ++d) {
        for (std::size_t c = 0; c < g.cells(); ++c) {
            const double a = K[c];
            const double b = K[g.plus(d, c)];
            if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("harmonic_face_average: coefficient must be positive");
            out[d][c] = 2.0 * a * b / (a + b);
        }
    }
    return out;
}

ScalarSolution solve_diffusion(const PeriodicGrid& g, const FaceField& K, std::span<const double> rhs,
                               const SolverOptions& opt) {
    if (rhs.size() != g.cells()) throw std::invalid_argument("solve_diffusion: rhs does not match grid");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_diffusion: tolerance must be positive");
    for (int d = 0; d < g.dim(); ++d)
        for (double k : K[d])
            if (!(k > 0.0)) throw std::invalid_argument("solve_diffusion: face coefficient must be positive");

    double sum = 0.0, abs_sum = 0.0;
    for (double v : rhs) {
        sum += v;
        abs_sum += std::abs(v);
    }
    if (std::abs(sum) > std::max(opt.tol, 1e-12) * abs_sum)
        throw SolverError("solve_diffusion: incompatible right-hand side (mean " +
                          std::to_string(sum / static_cast<double>(rhs.size())) + ")");

    const double inv_h2 = 1.0 / (g.h() * g.h());
    const std::size_t n = g.cells();
    std::vector<double> inv_diag(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (int d = 0; d < g.dim(); ++d) s += K[d][c] + K[d][g.minus(d, c)];
        inv_diag[c] = 1.0 / (s * inv_h2);
    }

    // Negated operator so that CG sees a positive semi-definite matrix.
    const LinearOperator A = [&](std::span<const double> u, std::span<double> y) {
        for (std::size_t c = 0; c < n; ++c) {
            double s = 0.0;
            for (int d = 0; d < g.dim(); ++d) {
                const auto p = g.plus(d, c);
                const auto m = g.minus(d, c);
                s += K[d][c] * (u[c] - u[p]) + K[d][m] * (u[c] - u[m]);
            }
            y[c] = s * inv_h2;
        }
    };
    const LinearOperator M = [&](std::span<const double> r, std::span<double> z) {
        for (std::size_t c = 0; c < n; ++c) z[c] = inv_diag[c] * r[c];
    };

    std::vector<double> b(rhs.begin(), rhs.end());
    subtract_mean(b);
    for (auto& v : b) v = -v;

    ScalarSolution out;
    out.u.assign(n, 0.0);
    const int cap = opt.max_iterations > 0 ? opt.max_iterations : default_iteration_cap(g.n());
    out.report = conjugate_gradient(A, b, out.u, M, subtract_mean, opt.tol, cap);
    if (!out.report.converged)
        throw SolverError("solve_diffusion: no convergence after " + std::to_string(out.report.iterations) +
                          " iterations (residual " + std::to_string(out.report.residual) + ")");
    return out;
}

int interface_orientation(const PeriodicGrid& g, std::span<const std::uint8_t> fluid, int d, std::size_t c) noexcept {
    const bool here = fluid[c] != 0;
    const bool there = fluid[g.plus(d, c)] != 0;
    if (here && !there) return 1;
    if (!here && there) return -1;
    return 0;
}

void project_components(std::span<double> x, const ComponentLabels& labels) {
    std::vector<double> sum(static_cast<std::size_t>(labels.count), 0.0);
    std::vector<std::size_t> count(static_cast<std::size_t>(labels.count), 0);
    for (std::size_t c = 0; c < x.size(); ++c) {
        const int l = labels.label[c];
        if (l < 0) continue;
        sum[static_cast<std::size_t>(l)] += x[c];
        ++count[static_cast<std::size_t>(l)];
    }
    for (std::size_t c = 0; c < x.size(); ++c) {
        const int l = labels.label[c];
        x[c] = l < 0 ? 0.0 : x[c] - sum[static_cast<std::size_t>(l)] / static_cast<double>(count[static_cast<std::size_t>(l)]);
    }
}

ScalarSolution solve_neumann_laplace(const PeriodicGrid& g, std::span<const std::uint8_t> fluid, const FaceField& flux,
                                     const SolverOptions& opt) {
    if (fluid.size() != g.cells()) throw std::invalid_argument("solve_neumann_laplace: mask does not match grid");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_neumann_laplace: tolerance must be positive");
    const std::size_t n = g.cells();
    const double h = g.h();
    const double inv_h2 = 1.0 / (h * h);
    const auto labels = label_components(g, fluid);

    // Source from the boundary flux: Σ_wall g/h per fluid cell, in the positive
    // form (-Δ_h) φ = s.
    std::vector<double> s(n, 0.0);
    std::vector<double> comp_sum(static_cast<std::size_t>(labels.count), 0.0);
    std::vector<double> comp_abs(static_cast<std::size_t>(labels.count), 0.0);
    for (int d = 0; d < g.dim(); ++d) {
        for (std::size_t c = 0; c < n; ++c) {
            const int o = interface_orientation(g, fluid, d, c);
            if (o == 0) continue;
            const std::size_t cell = o > 0 ? c : g.plus(d, c);
            const double val = flux[d][c] / h;
            s[cell] += val;
            comp_sum[static_cast<std::size_t>(labels.label[cell])] += val;
            comp_abs[static_cast<std::size_t>(labels.label[cell])] += std::abs(val);
        }
    }
    for (int l = 0; l < labels.count; ++l) {
        const auto k = static_cast<std::size_t>(l);
        if (std::abs(comp_sum[k]) > std::max(opt.tol, 1e-12) * comp_abs[k])
            throw SolverError("solve_neumann_laplace: incompatible flux on fluid component " + std::to_string(l));
    }
    project_components(s, labels);

    std::vector<double> inv_diag(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        if (!fluid[c]) continue;
        int nb = 0;
        for (int d = 0; d < g.dim(); ++d) nb += (fluid[g.plus(d, c)] ? 1 : 0) + (fluid[g.minus(d, c)] ? 1 : 0);
        inv_diag[c] = nb > 0 ? 1.0 / (nb * inv_h2) : 0.0;
    }

    const LinearOperator A = [&](std::span<const double> u, std::span<double> y) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!fluid[c]) {
                y[c] = 0.0;
                continue;
            }
            double acc = 0.0;
            for (int d = 0; d < g.dim(); ++d) {
                const auto p = g.plus(d, c);
                const auto m = g.minus(d, c);
                if (fluid[p]) acc += u[c] - u[p];
                if (fluid[m]) acc += u[c] - u[m];
            }
            y[c] = acc * inv_h2;
        }
    };
    const LinearOperator M = [&](std::span<const double> r, std::span<double> z) {
        for (std::size_t c = 0; c < n; ++c) z[c] = inv_diag[c] * r[c];
    };
    const Projection P = [&labels](std::span<double> x) { project_components(x, labels); };

    ScalarSolution out;
    out.u.assign(n, 0.0);
    const int cap = opt.max_iterations > 0 ? opt.max_iterations : default_iteration_cap(g.n());
    out.report = conjugate_gradient(A, s, out.u, M, P, opt.tol, cap);
    if (!out.report.converged)
        throw SolverError("solve_neumann_laplace: no convergence after " + std::to_string(out.report.iterations) +
                          " iterations (residual " + std::to_string(out.report.residual) + ")");
    return out;
}

}  // namespace thermoporo
