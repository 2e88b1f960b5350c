#include "thermoporo/verify.hpp"

#include "thermoporo/cell_thermal.hpp"
#include "thermoporo/error.hpp"
#include "thermoporo/stokes.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace thermoporo {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Composite 8-point Gauss-Legendre rule on [0,1] with `panels` equal panels.
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

Rule composite_gauss(int panels) {
    using gauss = boost::math::quadrature::gauss<double, 8>;
    const auto& a = gauss::abscissa();
    const auto& wt = gauss::weights();
    Rule r;
    const double half = 0.5 / panels;
    for (int p = 0; p < panels; ++p) {
        const double center = (p + 0.5) / panels;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0.0) {
                r.x.push_back(center);
                r.w.push_back(wt[i] * half);
                continue;
            }
            r.x.push_back(center - a[i] * half);
            r.w.push_back(wt[i] * half);
            r.x.push_back(center + a[i] * half);
            r.w.push_back(wt[i] * half);
        }
    }
    return r;
}

int inverse_integer(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("two_scale_check: eps must be positive");
    const double k = std::round(1.0 / eps);
    if (k < 1.0 || std::abs(k * eps - 1.0) > 1e-9)
        throw std::invalid_argument("two_scale_check: eps = " + std::to_string(eps) + " is not of the form 1/k");
    return static_cast<int>(k);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

// ---- two-scale pairing ----------------------------------------------------------

const std::vector<TwoScalePreset>& two_scale_presets() {
    using std::cos;
    using std::sin;
    static const std::vector<TwoScalePreset> presets = {
        {"constant", "psi = 1 and sigma independent of y: the pairing equals its limit for every eps", false,
         [](double x1, double, double t) { return 1.0 + x1 + t; }, [](double, double) { return 1.0; },
         [](double, double x2, double, double, double) { return 1.0 + x2; }},
        {"trig-product", "phi = (1+t) cos(x1 + x2/2), psi = sin(2 pi y1), sigma = (1+x2) sin(2 pi y1)", true,
         [](double x1, double x2, double t) { return (1.0 + t) * cos(x1 + 0.5 * x2); },
         [](double y1, double) { return sin(two_pi * y1); },
         [](double, double x2, double, double y1, double) { return (1.0 + x2) * sin(two_pi * y1); }},
        {"trig-checker", "phi = (1+t^2) sin(1 + x1 + x2), psi = cos(2 pi y1) cos(2 pi y2), sigma = 1 + psi", true,
         [](double x1, double x2, double t) { return (1.0 + t * t) * sin(1.0 + x1 + x2); },
         [](double y1, double y2) { return cos(two_pi * y1) * cos(two_pi * y2); },
         [](double, double, double, double y1, double y2) { return 1.0 + cos(two_pi * y1) * cos(two_pi * y2); }},
        {"trig-diagonal",
         "phi = 1 + x1^2 + t x2, psi = sin(2 pi (y1+y2)), sigma = (1+x1) sin(2 pi (y1+y2)) + cos(2 pi y2)", true,
         [](double x1, double x2, double t) { return 1.0 + x1 * x1 + t * x2; },
         [](double y1, double y2) { return sin(two_pi * (y1 + y2)); },
         [](double x1, double, double, double y1, double y2) {
             return (1.0 + x1) * sin(two_pi * (y1 + y2)) + cos(two_pi * y2);
         }},
    };
    return presets;
}

const TwoScalePreset& two_scale_preset(std::string_view name) {
    for (const auto& p : two_scale_presets())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown two-scale preset '" + std::string(name) + "'");
}

TwoScaleReport two_scale_check(const TwoScalePreset& preset, const std::vector<double>& eps,
                               const TwoScaleOptions& opt) {
    if (eps.empty()) throw std::invalid_argument("two_scale_check: empty eps list");
    if (opt.subintervals_per_period < 1 || opt.time_panels < 1 || opt.limit_panels < 1 || opt.cell_points < 1)
        throw std::invalid_argument("two_scale_check: quadrature sizes must be positive");
    std::vector<int> ks;
    for (double e : eps) ks.push_back(inverse_integer(e));
    for (std::size_t i = 1; i < eps.size(); ++i)
        if (!(eps[i] < eps[i - 1])) throw std::invalid_argument("two_scale_check: eps must be strictly decreasing");

    TwoScaleReport rep;
    rep.preset = preset.name;
    const Rule time = composite_gauss(opt.time_panels);

    // Limit: Gauss in (x,t), midpoint rule in y (exact for trigonometric polynomials
    // of degree below cell_points).
    {
        const Rule x = composite_gauss(opt.limit_panels);
        const int M = opt.cell_points;
        std::vector<double> psi(static_cast<std::size_t>(M * M));
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b)
                psi[static_cast<std::size_t>(a * M + b)] = preset.psi((a + 0.5) / M, (b + 0.5) / M);
        double total = 0.0;
        for (std::size_t i = 0; i < x.x.size(); ++i)
            for (std::size_t j = 0; j < x.x.size(); ++j)
                for (std::size_t l = 0; l < time.x.size(); ++l) {
                    const double x1 = x.x[i], x2 = x.x[j], t = time.x[l];
                    double cell = 0.0;
                    for (int a = 0; a < M; ++a)
                        for (int b = 0; b < M; ++b)
                            cell += psi[static_cast<std::size_t>(a * M + b)] *
                                    preset.sigma(x1, x2, t, (a + 0.5) / M, (b + 0.5) / M);
                    total += x.w[i] * x.w[j] * time.w[l] * preset.phi(x1, x2, t) * cell / (M * M);
                }
        rep.limit = total;
    }

    for (std::size_t e = 0; e < eps.size(); ++e) {
        const int k = ks[e];
        const Rule x = composite_gauss(k * opt.subintervals_per_period);
        double total = 0.0;
        for (std::size_t i = 0; i < x.x.size(); ++i)
            for (std::size_t j = 0; j < x.x.size(); ++j) {
                const double x1 = x.x[i], x2 = x.x[j];
                const double y1 = k * x1, y2 = k * x2;
                const double psi = preset.psi(y1, y2);
                double inner = 0.0;
                for (std::size_t l = 0; l < time.x.size(); ++l)
                    inner += time.w[l] * preset.phi(x1, x2, time.x[l]) * preset.sigma(x1, x2, time.x[l], y1, y2);
                total += x.w[i] * x.w[j] * psi * inner;
            }
        rep.rows.push_back({eps[e], total, std::abs(total - rep.limit)});
    }

    // Fitted decay order.
    bool exact = false;
    for (const auto& r : rep.rows) exact = exact || r.error <= 1e-12 * std::max(1.0, std::abs(rep.limit));
    if (exact || rep.rows.size() < 2) {
        rep.order = std::numeric_limits<double>::quiet_NaN();
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(rep.rows.size());
        for (const auto& r : rep.rows) {
            const double lx = std::log(r.eps), ly = std::log(r.error);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        rep.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
}

std::string format_two_scale(const TwoScaleReport& r) {
    std::ostringstream out;
    out << "# two-scale preset " << r.preset << "\n";
    out << "eps pairing limit error\n";
    for (const auto& row : r.rows)
        out << num(row.eps) << ' ' << num(row.pairing) << ' ' << num(r.limit) << ' ' << num(row.error) << '\n';
    out << "order " << num(r.order) << '\n';
    return out.str();
}

// ---- conduction oracle --------------------------------------------------------------

DnsResult dns_conduction(const UnitCellGeometry& g, double kappa_f, double kappa_s, int k, const Vector& G,
                         const Matrix* Btheta, const SolverOptions& opt) {
    if (k < 1) throw std::invalid_argument("dns_conduction: k must be >= 1");
    if (!(kappa_f > 0.0) || !(kappa_s > 0.0)) throw std::invalid_argument("dns_conduction: conductivities must be positive");
    const int dim = g.dim();
    if (G.size() != dim) throw std::invalid_argument("dns_conduction: drive has the wrong dimension");

    const int N = k * g.n();
    const VoxelField chi = inflate(g, k, N);
    const MacroGrid grid(dim, N);
    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);
    const std::size_t n = grid.cells();

    CellField K(n);
    for (std::size_t c = 0; c < n; ++c) K[c] = chi.values[c] ? kappa_f : kappa_s;
    auto harmonic = [](double a, double b) { return 2.0 * a * b / (a + b); };
    auto neighbor = [&](std::size_t c, int d) {
        auto x = grid.coords(c);
        x[static_cast<std::size_t>(d)] += 1;
        return grid.index(x);
    };
    auto boundary_value = [&](std::size_t c, int d, bool high) {
        auto x = grid.center(c);
        x[static_cast<std::size_t>(d)] += high ? 0.5 * h : -0.5 * h;
        double v = 0.0;
        for (int j = 0; j < dim; ++j) v += G[j] * x[static_cast<std::size_t>(j)];
        return v;
    };

    std::vector<double> diag(n, 0.0), b(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const auto x = grid.coords(c);
        for (int d = 0; d < dim; ++d) {
            const int xd = x[static_cast<std::size_t>(d)];
            if (xd + 1 < N) {
                const auto nb = neighbor(c, d);
                const double w = harmonic(K[c], K[nb]) * inv_h2;
                diag[c] += w;
                diag[nb] += w;
            }
            if (xd == 0) {
                diag[c] += 2.0 * K[c] * inv_h2;
                b[c] += 2.0 * K[c] * inv_h2 * boundary_value(c, d, false);
            }
            if (xd == N - 1) {
                diag[c] += 2.0 * K[c] * inv_h2;
                b[c] += 2.0 * K[c] * inv_h2 * boundary_value(c, d, true);
            }
        }
    }
    const LinearOperator A = [&](std::span<const double> u, std::span<double> y) {
        for (std::size_t c = 0; c < n; ++c) y[c] = diag[c] * u[c];
        for (std::size_t c = 0; c < n; ++c) {
            const auto x = grid.coords(c);
            for (int d = 0; d < dim; ++d) {
                if (x[static_cast<std::size_t>(d)] + 1 >= N) continue;
                const auto nb = neighbor(c, d);
                const double w = harmonic(K[c], K[nb]) * inv_h2;
                y[c] -= w * u[nb];
                y[nb] -= w * u[c];
            }
        }
    };
    const LinearOperator M = [&](std::span<const double> r, std::span<double> z) {
        for (std::size_t c = 0; c < n; ++c) z[c] = r[c] / diag[c];
    };

    DnsResult out;
    out.eps = 1.0 / k;
    out.N = N;
    out.field.assign(n, 0.0);
    const int cap = opt.max_iterations > 0 ? opt.max_iterations : default_iteration_cap(N);
    out.report = conjugate_gradient(A, b, out.field, M, {}, opt.tol, cap);
    if (!out.report.converged)
        throw SolverError("dns_conduction: no convergence after " + std::to_string(out.report.iterations) + " iterations");

    const std::vector<double>& u = out.field;
    out.observable = Vector::Zero(dim);
    for (std::size_t c = 0; c < n; ++c) {
        const auto x = grid.coords(c);
        for (int d = 0; d < dim; ++d) {
            const int xd = x[static_cast<std::size_t>(d)];
            if (xd + 1 < N) {
                const auto nb = neighbor(c, d);
                out.observable[d] += harmonic(K[c], K[nb]) * (u[nb] - u[c]) / h;
            }
            if (xd == 0) out.observable[d] += 0.5 * 2.0 * K[c] * (u[c] - boundary_value(c, d, false)) / h;
            if (xd == N - 1) out.observable[d] += 0.5 * 2.0 * K[c] * (boundary_value(c, d, true) - u[c]) / h;
        }
    }
    out.observable *= grid.cell_volume();

    Matrix B;
    if (Btheta) {
        B = *Btheta;
    } else if (!g.has_both_phases() || kappa_f == kappa_s) {
        const double kappa = g.fluid_count() > 0 ? kappa_f : kappa_s;
        B = kappa * Matrix::Identity(dim, dim);
    } else {
        B = conductivity_tensor(g, kappa_f, kappa_s, opt).Btheta;
    }
    if (B.rows() != dim || B.cols() != dim) throw std::invalid_argument("dns_conduction: reference tensor has the wrong shape");
    out.reference = B * G;
    const double scale = out.reference.norm();
    out.relative_error = (out.observable - out.reference).norm() / (scale > 0.0 ? scale : 1.0);
    return out;
}

// ---- Stokes oracle -------------------------------------------------------------------

DnsResult dns_stokes(const UnitCellGeometry& g, double mu1, int k, int axis, const Matrix* B2,
                     const SolverOptions& opt) {
    if (!(mu1 > 0.0) || !std::isfinite(mu1)) throw std::invalid_argument("dns_stokes: mu1 must be positive");
    if (k < 1) throw std::invalid_argument("dns_stokes: k must be >= 1");
    const int dim = g.dim();
    if (axis < 0 || axis >= dim) throw std::invalid_argument("dns_stokes: axis out of range");
    if (!percolating_axes(g, Phase::Fluid)[static_cast<std::size_t>(axis)])
        throw DegenerateGeometry("dns_stokes: the inflated pore space does not connect along axis " +
                                 std::to_string(axis));

    const int N = k * g.n();
    const double eps = 1.0 / k;
    const VoxelField chi = inflate(g, k, N);
    const PeriodicGrid grid(dim, N, 1.0 / N);
    const StokesSolver solver(grid, chi.values, mu1 * eps * eps);
    FaceField force = grid.make_faces();
    std::fill(force[axis].begin(), force[axis].end(), 1.0);
    const auto sol = solver.solve(force, nullptr, opt);

    DnsResult out;
    out.eps = eps;
    out.N = N;
    out.report = sol.report;
    out.observable = Vector::Zero(dim);
    for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (double v : sol.velocity[j]) s += v;
        out.observable[j] = s * grid.cell_volume();
    }
    out.field.assign(grid.cells(), 0.0);
    for (std::size_t c = 0; c < grid.cells(); ++c)
        out.field[c] = 0.5 * (sol.velocity[axis][c] + sol.velocity[axis][grid.minus(axis, c)]);

    const Matrix B = B2 ? *B2 : steady_permeability(g, mu1, opt).B2;
    if (B.rows() != dim || B.cols() != dim) throw std::invalid_argument("dns_stokes: reference tensor has the wrong shape");
    out.reference = B.col(axis);
    const double scale = out.reference.norm();
    out.relative_error = (out.observable - out.reference).norm() / (scale > 0.0 ? scale : 1.0);
    return out;
}

// ---- suites -------------------------------------------------------------------------

bool SuiteReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"laminate", "checkerboard", "two-scale", "stokes-tiling", "all"};
    return names;
}

namespace {

void add_at_most(SuiteReport& r, std::string name, double value, double threshold) {
    r.checks.push_back({std::move(name), value, threshold, std::isfinite(value) && value <= threshold});
}

void add_at_least(SuiteReport& r, std::string name, double value, double threshold) {
    r.checks.push_back({std::move(name), value, threshold, std::isfinite(value) && value >= threshold});
}

/// Largest relative increase along a sequence that should not grow; at most 0
/// (up to round-off) when it is non-increasing.
double worst_increase(const std::vector<double>& e) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < e.size(); ++i) worst = std::max(worst, (e[i] - e[i - 1]) / std::max(e[i - 1], 1e-300));
    return worst;
}

std::string dns_table(const std::string& title, const std::vector<DnsResult>& rows) {
    std::ostringstream out;
    out << "# " << title << "\neps N relative_error\n";
    for (const auto& r : rows) out << num(r.eps) << ' ' << r.N << ' ' << num(r.relative_error) << '\n';
    return out.str();
}

void conduction_sequence(SuiteReport& rep, const std::string& prefix, const UnitCellGeometry& g, double kf,
                         double ks, const Vector& G, const SolverOptions& opt) {
    const Matrix B = conductivity_tensor(g, kf, ks, opt).Btheta;
    std::vector<DnsResult> rows;
    std::vector<double> errors;
    for (int k : {2, 4, 8}) {
        rows.push_back(dns_conduction(g, kf, ks, k, G, &B, opt));
        errors.push_back(rows.back().relative_error);
    }
    add_at_most(rep, prefix + ".dns_error_increase", worst_increase(errors), 1e-9);
    add_at_most(rep, prefix + ".dns_final_error", errors.back(), 0.05);
    rep.tables.push_back(dns_table(prefix + " conduction oracle", rows));
}

void laminate_suite(SuiteReport& rep, const SolverOptions& opt) {
    const auto g = make_laminate(2, 32, 0.5);
    const auto B = conductivity_tensor(g, 1.0, 4.0, opt).Btheta;
    add_at_most(rep, "laminate.across_layers", std::abs(B(0, 0) - 1.6) / 1.6, 1e-6);
    add_at_most(rep, "laminate.in_plane", std::abs(B(1, 1) - 2.5) / 2.5, 1e-6);
    Vector G = Vector::Zero(2);
    G[0] = 1.0;
    conduction_sequence(rep, "laminate", make_laminate(2, 16, 0.5), 1.0, 4.0, G, opt);
}

void checkerboard_suite(SuiteReport& rep, const SolverOptions& opt) {
    std::vector<double> errors;
    std::ostringstream table;
    table << "# checkerboard refinement\nn relative_error\n";
    for (int n : {32, 64, 128}) {
        const auto B = conductivity_tensor(make_checkerboard(2, n), 1.0, 4.0, opt).Btheta;
        errors.push_back((B - 2.0 * Matrix::Identity(2, 2)).norm() / 2.0);
        table << n << ' ' << num(errors.back()) << '\n';
    }
    rep.tables.push_back(table.str());
    add_at_most(rep, "checkerboard.refinement_increase", worst_increase(errors), 0.0);
    add_at_most(rep, "checkerboard.error_128", errors.back(), 0.02);
    Vector G = Vector::Zero(2);
    G[0] = 1.0;
    conduction_sequence(rep, "checkerboard", make_checkerboard(2, 32), 1.0, 4.0, G, opt);
}

void two_scale_suite(SuiteReport& rep) {
    for (const auto& p : two_scale_presets()) {
        if (!p.trigonometric) continue;
        const auto r = two_scale_check(p, {0.25, 0.125, 0.0625});
        std::vector<double> errors;
        for (const auto& row : r.rows) errors.push_back(row.error);
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < errors.size(); ++i) worst = std::max(worst, errors[i] - errors[i - 1]);
        rep.checks.push_back({p.name + ".error_step", worst, 0.0, worst < 0.0});
        add_at_least(rep, p.name + ".order", r.order, 0.5);
        rep.tables.push_back(format_two_scale(r));
    }
}

void stokes_suite(SuiteReport& rep, const SolverOptions& opt) {
    const auto g = make_centered_cube(2, 16, 0.5);
    const Matrix B2 = steady_permeability(g, 1.0, opt).B2;
    std::vector<DnsResult> rows;
    for (int k : {1, 2, 4}) rows.push_back(dns_stokes(g, 1.0, k, 0, &B2, opt));
    double spread = 0.0;
    for (const auto& r : rows)
        spread = std::max(spread, (r.observable - rows.front().observable).norm() / rows.front().observable.norm());
    add_at_most(rep, "stokes.tiling_spread", spread, 1e-6);
    add_at_most(rep, "stokes.single_cell_vs_B2", rows.front().relative_error, 1e-6);
    rep.tables.push_back(dns_table("Stokes tiling oracle", rows));
}

}  // namespace

SuiteReport run_suite(std::string_view name, const SolverOptions& opt) {
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
        throw std::invalid_argument("unknown verification suite '" + std::string(name) + "'");
    SuiteReport rep;
    rep.suite = std::string(name);
    const bool all = name == "all";
    if (all || name == "laminate") laminate_suite(rep, opt);
    if (all || name == "checkerboard") checkerboard_suite(rep, opt);
    if (all || name == "two-scale") two_scale_suite(rep);
    if (all || name == "stokes-tiling") stokes_suite(rep, opt);
    return rep;
}

std::string format_suite(const SuiteReport& r) {
    std::ostringstream out;
    out << "# suite " << r.suite << "\n";
    for (const auto& c : r.checks)
        out << "check " << c.name << " value " << num(c.value) << " threshold " << num(c.threshold) << ' '
            << (c.passed ? "PASS" : "FAIL") << '\n';
    for (const auto& t : r.tables) out << t;
    out << "result " << (r.passed() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

}  // namespace thermoporo
