// Acceptance suite: one test per criterion, each checked against an oracle
// computed here (closed forms, independent residual evaluation, refinement).

#include "thermoporo/cell_flow.hpp"
#include "thermoporo/cell_thermal.hpp"
#include "thermoporo/geometry.hpp"
#include "thermoporo/macro_solver.hpp"
#include "thermoporo/params.hpp"
#include "thermoporo/verify.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

using namespace thermoporo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Fluid fraction counted voxel by voxel.
double voxel_fraction(const UnitCellGeometry& g) {
    std::size_t fluid = 0;
    for (std::size_t i = 0; i < g.size(); ++i) fluid += g[i] == 1 ? 1 : 0;
    return static_cast<double>(fluid) / static_cast<double>(g.size());
}

/// True when xᵀ S x > 0 for `count` random unit directions.
bool positive_on_random_directions(const Matrix& S, int count, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    for (int k = 0; k < count; ++k) {
        Vector x(S.rows());
        for (int i = 0; i < x.size(); ++i) x[i] = normal(rng);
        x.normalize();
        if (!(x.dot(S * x) > 0.0)) return false;
    }
    return true;
}

double asymmetry(const Matrix& a) { return (a - a.transpose()).norm() / a.norm(); }

LimitParameters base_parameters() {
    LimitParameters p;
    p.mu1 = 1.0;
    p.tau0 = 1.0;
    p.pstar = 1.0;
    p.nu0 = 0.0;
    p.beta0f = 0.0;
    p.kappa0f = 1.0;
    p.kappa0s = 2.0;
    p.rho_f = 1.0;
    p.c_pf = 1.0;
    p.c_ps = 2.0;
    return p;
}

LimitParameters regime_parameters(Regime r) {
    LimitParameters p = base_parameters();
    if (r == Regime::SteadyDarcy) p.tau0 = 0.0;
    if (r == Regime::InviscidDarcy) p.mu1 = 0.0;
    return p;
}

/// Cell-centered discrete L2 norm on the unit square/cube.
double l2(const std::vector<double>& v, double cell_volume) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * cell_volume);
}

/// Prints "PASS <name>" / "FAIL <name>" for every acceptance criterion.
class CriterionPrinter : public ::testing::EmptyTestEventListener {
    void OnTestEnd(const ::testing::TestInfo& info) override {
        std::printf("%s %s\n", info.result()->Passed() ? "PASS" : "FAIL", info.name());
        std::fflush(stdout);
    }
};

}  // namespace

// 1 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion01_HomogeneousCell) {
    const double kappa = 2.5;
    const auto g = make_random_connected(3, 16, 7);
    const auto t0 = Clock::now();
    const auto B = conductivity_tensor(g, kappa, kappa).Btheta;
    const double elapsed = seconds_since(t0);
    const double err = (B - kappa * Matrix::Identity(3, 3)).norm() / kappa;
    std::printf("  homogeneous: |B - kI|/k = %.3e, %.2f s\n", err, elapsed);
    EXPECT_LE(err, 1e-8);
    EXPECT_LT(elapsed, 5.0);
}

// 2 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion02_LaminateClosedForm) {
    const double k1 = 1.0, k2 = 4.0;
    const auto g = make_laminate(3, 32, 0.5);
    const double f = voxel_fraction(g);
    const double harmonic = 1.0 / (f / k1 + (1.0 - f) / k2);
    const double arithmetic = f * k1 + (1.0 - f) * k2;
    ASSERT_NEAR(harmonic, 1.6, 1e-15);
    ASSERT_NEAR(arithmetic, 2.5, 1e-15);

    const auto B = conductivity_tensor(g, k1, k2).Btheta;
    const Vector ev = symmetric_eigenvalues(B);
    std::printf("  laminate: across %.12f, in-plane %.12f %.12f\n", B(0, 0), B(1, 1), B(2, 2));
    EXPECT_LE(std::abs(B(0, 0) - harmonic) / harmonic, 1e-6);
    EXPECT_LE(std::abs(B(1, 1) - arithmetic) / arithmetic, 1e-6);
    EXPECT_LE(std::abs(B(2, 2) - arithmetic) / arithmetic, 1e-6);
    EXPECT_LE(std::abs(ev[0] - harmonic) / harmonic, 1e-6);
    EXPECT_LE(std::abs(ev[2] - arithmetic) / arithmetic, 1e-6);
}

// 3 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion03_CheckerboardRefinement) {
    const double k1 = 1.0, k2 = 4.0;
    const double duality = std::sqrt(k1 * k2);
    std::vector<double> errors;
    for (int n : {32, 64, 128}) {
        const auto B = conductivity_tensor(make_checkerboard(2, n), k1, k2).Btheta;
        errors.push_back((B - duality * Matrix::Identity(2, 2)).norm() / duality);
        std::printf("  checkerboard n=%d: error %.4e\n", n, errors.back());
    }
    EXPECT_LT(errors[1], errors[0]);
    EXPECT_LT(errors[2], errors[1]);
    EXPECT_LE(errors[2], 0.02);
}

// 4 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion04_SymmetryAndDefiniteness) {
    std::mt19937_64 rng(2024);
    const double k1 = 1.0, k2 = 5.0;
    KernelOptions kopt;
    kopt.steps = 50;
    kopt.saturation_tol = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = make_random_connected(3, 16, seed);
        ASSERT_TRUE(connectivity(g, Phase::Solid));

        const auto thermal = conductivity_tensor(g, k1, k2);
        const auto steady = steady_permeability(g, 1.0);
        const auto kernel = kernel_permeability(g, 1.0, 1.0, 1.0, kopt);
        const auto inertial = inertial_tensor(g);

        EXPECT_LE(thermal.asymmetry, 1e-6) << "seed " << seed;
        EXPECT_LE(steady.asymmetry, 1e-6) << "seed " << seed;
        EXPECT_LE(asymmetry(kernel.A.back()), 1e-6) << "seed " << seed;
        EXPECT_LE(inertial.asymmetry, 1e-6) << "seed " << seed;

        EXPECT_TRUE(positive_on_random_directions(thermal.Btheta, 20, rng)) << "seed " << seed;
        EXPECT_TRUE(positive_on_random_directions(steady.B2, 20, rng)) << "seed " << seed;
        EXPECT_TRUE(positive_on_random_directions(0.5 * (kernel.A.back() + kernel.A.back().transpose()), 20, rng))
            << "seed " << seed;
        EXPECT_TRUE(positive_on_random_directions(inertial.M, 20, rng)) << "seed " << seed;

        const double f = voxel_fraction(g);
        const double lower = 1.0 / (f / k1 + (1.0 - f) / k2);
        const double upper = f * k1 + (1.0 - f) * k2;
        const Vector ev = symmetric_eigenvalues(thermal.Btheta);
        EXPECT_GE(ev[0], lower * (1.0 - 1e-9)) << "seed " << seed;
        EXPECT_LE(ev[2], upper * (1.0 + 1e-9)) << "seed " << seed;
    }
}

// 5 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion05_KernelConsistency) {
    const auto g = make_centered_cube(3, 16, 0.5);
    const auto t0 = Clock::now();
    const auto steady = steady_permeability(g, 1.0);
    const auto kernel = kernel_permeability(g, 1.0, 1.0, 1.0);
    const double elapsed = seconds_since(t0);

    // Trapezoid integral of the sampled kernel, accumulated here.
    Matrix integral = Matrix::Zero(3, 3);
    for (std::size_t k = 1; k < kernel.t.size(); ++k)
        integral += 0.5 * (kernel.t[k] - kernel.t[k - 1]) * (kernel.B1[k - 1] + kernel.B1[k]);
    const double gap = (integral - steady.B2).norm() / steady.B2.norm();
    std::printf("  kernel: gap %.3e, tail %.3e, horizon %.4f, %zu samples, %.1f s\n", gap, kernel.tail,
                kernel.horizon(), kernel.t.size(), elapsed);
    EXPECT_LE(gap, 1e-3);
    EXPECT_TRUE(std::isfinite(kernel.tail));
    EXPECT_LT(elapsed, 120.0);
}

// 6 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion06_InertialBounds) {
    for (const auto& g : {make_centered_cube(3, 16, 0.5), make_random_connected(3, 16, 3), make_centered_cube(2, 32, 0.4)}) {
        const auto it = inertial_tensor(g);
        const double m = voxel_fraction(g);
        const Vector ev = symmetric_eigenvalues(it.M);
        EXPECT_GT(ev[0], 0.0);
        EXPECT_LE(ev[ev.size() - 1], m * (1.0 + 1e-9));
    }
    const auto channel = make_channel(3, 16, 0.5);
    const double m = voxel_fraction(channel);
    const auto it = inertial_tensor(channel);
    std::printf("  channel: M11 = %.12f, m = %.12f\n", it.M(0, 0), m);
    EXPECT_LE(std::abs(it.M(0, 0) - m), 1e-6);
}

// 7 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion07_ZeroDataFixedPoint) {
    const auto cell = make_centered_cube(3, 8, 0.5);
    for (Regime r : {Regime::SteadyDarcy, Regime::MemoryDarcy, Regime::InviscidDarcy}) {
        MacroProblem prob;
        prob.domain.dim = 3;
        prob.domain.N = 32;
        prob.medium = assemble(cell, regime_parameters(r));
        ASSERT_EQ(prob.medium.regime, r);
        prob.dt = 1e-2;
        prob.T = 1.0;
        MacroSolver solver(prob);
        ASSERT_EQ(solver.step_count(), 100);
        MacroState s = solver.initial_state();
        double largest = 0.0;
        for (int k = 0; k < 100; ++k) {
            (void)solver.step(s);
            for (const auto* f : {&s.p, &s.q, &s.theta})
                for (double x : *f) largest = std::max(largest, std::abs(x));
            for (int d = 0; d < 3; ++d) {
                for (double x : s.v[d]) largest = std::max(largest, std::abs(x));
                for (double x : s.w[d]) largest = std::max(largest, std::abs(x));
            }
        }
        std::printf("  %s: max |field| = %.3e\n", std::string(to_string(r)).c_str(), largest);
        EXPECT_LE(largest, 1e-14);
    }
}

// 8 -------------------------------------------------------------------------------------
TEST(Acceptance, Criterion08_MassBalance) {
    const auto cell = make_centered_cube(2, 16, 0.5);
    for (Regime r : {Regime::SteadyDarcy, Regime::MemoryDarcy, Regime::InviscidDarcy}) {
        LimitParameters p = regime_parameters(r);
        p.nu0 = 0.3;
        p.beta0f = 0.5;
        MacroProblem prob;
        prob.domain.dim = 2;
        prob.domain.N = 24;
        prob.medium = assemble(cell, p);
        prob.dt = 5e-3;
        prob.T = 0.25;
        prob.v0 = [](const Point& x, double t) { return Point{std::sin(3.0 * t) * (1.0 + x[1]), 0.0, 0.0}; };
        prob.theta0 = [](const Point& x, double t) { return t * x[0]; };
        prob.heat_source = [](const Point& x, double) { return x[1]; };
        MacroSolver solver(prob);
        const MacroGrid& g = solver.grid();
        const double h = g.h();
        MacroState s = solver.initial_state();
        double worst = 0.0;
        for (int k = 0; k < solver.step_count(); ++k) {
            const std::vector<double> p_old = s.p;
            (void)solver.step(s);
            for (std::size_t c = 0; c < g.cells(); ++c) {
                double div_v = 0.0;
                for (int d = 0; d < 2; ++d) div_v += (s.v[d][g.high_face(d, c)] - s.v[d][g.low_face(d, c)]) / h;
                worst = std::max(worst, std::abs((s.p[c] - p_old[c]) / (p.pstar * prob.dt) + div_v));
            }
        }
        std::printf("  %s: worst mass residual %.3e\n", std::string(to_string(r)).c_str(), worst);
        EXPECT_LE(worst, prob.picard_tol);
    }
}

// 9 -------------------------------------------------------------------------------------
namespace {

EffectiveMedium identity_medium() {
    EffectiveMedium m;
    m.dim = 2;
    m.porosity = 0.5;
    m.c_hat = 1.0;
    m.kappa_hat = 1.0;
    m.Btheta = Matrix::Identity(2, 2);
    m.regime = Regime::SteadyDarcy;
    m.params = base_parameters();
    m.params.tau0 = 0.0;
    SteadyPermeability s;
    s.B2 = Matrix::Identity(2, 2);
    s.raw = s.B2;
    m.steady = s;
    return m;
}

/// L2 error at T of p = e^{-λt} cos(2πx₁) driven by the source for symbol σ:
/// (1/p*)∂_t p - Δp = (σ - λ) e^{-λt} cos(2πx₁).
double manufactured_error(int N, double dt, double T, double lambda, double symbol) {
    const double k = 2.0 * std::numbers::pi;
    MacroProblem prob;
    prob.domain.dim = 2;
    prob.domain.N = N;
    prob.medium = identity_medium();
    prob.dt = dt;
    prob.T = T;
    prob.pressure_source = [=](const Point& x, double t) {
        return (symbol - lambda) * std::exp(-lambda * t) * std::cos(k * x[0]);
    };
    MacroSolver solver(prob);
    MacroState s = solver.initial_state();
    solver.set_initial_pressure(s, [=](const Point& x, double) { return std::cos(k * x[0]); });
    for (int i = 0; i < solver.step_count(); ++i) (void)solver.step(s);
    std::vector<double> e(s.p.size());
    for (std::size_t c = 0; c < e.size(); ++c)
        e[c] = s.p[c] - std::exp(-lambda * s.t) * std::cos(k * solver.grid().center(c)[0]);
    return l2(e, solver.grid().cell_volume());
}

}  // namespace

TEST(Acceptance, Criterion09_ManufacturedSolution) {
    const auto t0 = Clock::now();
    const double k = 2.0 * std::numbers::pi;
    std::vector<double> space;
    for (int N : {16, 32, 64}) space.push_back(manufactured_error(N, 1e-4, 0.05, 1.0, k * k));
    const double p1 = std::log2(space[0] / space[1]);
    const double p2 = std::log2(space[1] / space[2]);
    std::printf("  space: %.3e %.3e %.3e orders %.3f %.3f\n", space[0], space[1], space[2], p1, p2);

    // With the discrete symbol of the 5-point Laplacian the spatial error
    // vanishes for this mode and only the time error remains.
    const int N = 32;
    const double h = 1.0 / N;
    const double symbol = (2.0 - 2.0 * std::cos(k * h)) / (h * h);
    std::vector<double> time;
    for (double dt : {0.02, 0.01, 0.005, 0.0025}) time.push_back(manufactured_error(N, dt, 0.2, 10.0, symbol));
    std::vector<double> orders;
    for (std::size_t i = 1; i < time.size(); ++i) orders.push_back(std::log2(time[i - 1] / time[i]));
    std::printf("  time: orders %.3f %.3f %.3f, %.1f s\n", orders[0], orders[1], orders[2], seconds_since(t0));

    for (double p : {p1, p2}) {
        EXPECT_GE(p, 1.7);
        EXPECT_LE(p, 2.3);
    }
    for (double p : orders) {
        EXPECT_GE(p, 0.8);
        EXPECT_LE(p, 1.2);
    }
    EXPECT_LT(seconds_since(t0), 120.0);
}

// 10 ------------------------------------------------------------------------------------
TEST(Acceptance, Criterion10_RegimeContinuity) {
    const auto cell = make_centered_cube(2, 16, 0.5);
    auto trajectory = [&](double tau0) {
        LimitParameters p = base_parameters();
        p.tau0 = tau0;
        MacroProblem prob;
        prob.domain.dim = 2;
        prob.domain.N = 32;
        prob.medium = assemble(cell, p);
        prob.dt = 1e-2;
        prob.T = 0.5;
        prob.v0 = [](const Point&, double t) { return Point{std::sin(2.0 * std::numbers::pi * t), 0.0, 0.0}; };
        std::vector<std::vector<double>> out;
        const auto result = run(prob, nullptr, 1);
        for (const auto& s : result.states) out.push_back(s.p);
        return out;
    };
    const auto reference = trajectory(0.0);
    double ref_norm = 0.0;
    for (const auto& p : reference)
        for (double x : p) ref_norm += x * x;
    ASSERT_GT(ref_norm, 0.0);

    std::vector<double> gaps;
    for (double tau0 : {1.0, 0.1, 0.01}) {
        const auto traj = trajectory(tau0);
        ASSERT_EQ(traj.size(), reference.size());
        double diff = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k)
            for (std::size_t c = 0; c < traj[k].size(); ++c) diff += std::pow(traj[k][c] - reference[k][c], 2);
        gaps.push_back(std::sqrt(diff / ref_norm));
        std::printf("  tau0 rho_f = %g: relative gap %.4e\n", tau0, gaps.back());
    }
    EXPECT_LT(gaps[1], gaps[0]);
    EXPECT_LT(gaps[2], gaps[1]);
}

// 11 ------------------------------------------------------------------------------------
TEST(Acceptance, Criterion11_FineScaleOracles) {
    const auto t0 = Clock::now();
    const double k1 = 1.0, k2 = 4.0;
    Vector G(2);
    G << 1.0, 0.0;

    // Laminate reference from the closed form.
    const auto laminate = make_laminate(2, 16, 0.5);
    const double f = voxel_fraction(laminate);
    Matrix B_lam = Matrix::Zero(2, 2);
    B_lam(0, 0) = 1.0 / (f / k1 + (1.0 - f) / k2);
    B_lam(1, 1) = f * k1 + (1.0 - f) * k2;
    const auto checker = make_checkerboard(2, 32);
    const Matrix B_chk = conductivity_tensor(checker, k1, k2).Btheta;

    for (const auto& [name, geom, B] : {std::tuple{"laminate", laminate, B_lam}, std::tuple{"checkerboard", checker, B_chk}}) {
        std::vector<double> errors;
        for (int k : {2, 4, 8}) errors.push_back(dns_conduction(geom, k1, k2, k, G, &B).relative_error);
        std::printf("  %s conduction: %.4e %.4e %.4e\n", name, errors[0], errors[1], errors[2]);
        EXPECT_LE(errors[1], errors[0]);
        EXPECT_LE(errors[2], errors[1]);
        EXPECT_LE(errors[2], 0.05);
    }

    const auto pore = make_centered_cube(2, 16, 0.5);
    const auto half = dns_stokes(pore, 1.0, 2, 0);
    const auto quarter = dns_stokes(pore, 1.0, 4, 0);
    const double spread = (half.observable - quarter.observable).norm() / half.observable.norm();
    std::printf("  Stokes tiling spread %.3e, %.1f s\n", spread, seconds_since(t0));
    EXPECT_LE(spread, 1e-8);
    EXPECT_LE(half.relative_error, 1e-8);
    EXPECT_LT(seconds_since(t0), 300.0);
}

// 12 ------------------------------------------------------------------------------------
TEST(Acceptance, Criterion12_TwoScalePairing) {
    // Independent limit of the trig-product preset: <sin²> = 1/2, ∫(1+t) = 3/2,
    // and the x-integral by composite Simpson.
    const int M = 2000;
    double ix = 0.0;
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j) {
            const double x1 = static_cast<double>(i) / M, x2 = static_cast<double>(j) / M;
            const double wi = (i == 0 || i == M) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const double wj = (j == 0 || j == M) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            ix += wi * wj * std::cos(x1 + 0.5 * x2) * (1.0 + x2);
        }
    ix /= 9.0 * M * M;
    const double product_limit = 0.5 * 1.5 * ix;

    int presets = 0;
    for (const auto& p : two_scale_presets()) {
        if (!p.trigonometric) continue;
        ++presets;
        const auto rep = two_scale_check(p, {0.25, 0.125, 0.0625});
        std::printf("  %s: errors %.3e %.3e %.3e order %.3f\n", p.name.c_str(), rep.rows[0].error, rep.rows[1].error,
                    rep.rows[2].error, rep.order);
        EXPECT_LT(rep.rows[1].error, rep.rows[0].error) << p.name;
        EXPECT_LT(rep.rows[2].error, rep.rows[1].error) << p.name;
        EXPECT_GT(rep.order, 0.5) << p.name;
        if (p.name == "trig-product") {
            EXPECT_NEAR(rep.limit, product_limit, 1e-10);
        }
    }
    EXPECT_GE(presets, 2);
}

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::UnitTest::GetInstance()->listeners().Append(new CriterionPrinter);
    return RUN_ALL_TESTS();
}
