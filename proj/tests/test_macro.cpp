#include "thermoporo/error.hpp"
#include "thermoporo/macro_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

using namespace thermoporo;

namespace {

EffectiveMedium cached_medium(Regime r) {
    static std::map<Regime, EffectiveMedium> cache;
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    LimitParameters p;
    p.kappa0s = 3.0;
    if (r == Regime::SteadyDarcy) p.tau0 = 0.0;
    if (r == Regime::InviscidDarcy) p.mu1 = 0.0;
    return cache[r] = assemble(make_centered_cube(2, 8, 0.5), p);
}

MacroProblem problem(Regime r) {
    MacroProblem prob;
    prob.domain.dim = 2;
    prob.domain.N = 16;
    prob.medium = cached_medium(r);
    prob.dt = 0.01;
    prob.T = 0.1;
    return prob;
}

}  // namespace

TEST(Assemble, PayloadMatchesRegime) {
    for (Regime r : {Regime::SteadyDarcy, Regime::MemoryDarcy, Regime::InviscidDarcy}) {
        const auto m = cached_medium(r);
        EXPECT_EQ(m.regime, r);
        EXPECT_EQ(m.steady.has_value(), r == Regime::SteadyDarcy);
        EXPECT_EQ(m.kernel.has_value(), r == Regime::MemoryDarcy);
        EXPECT_EQ(m.inertial.has_value(), r == Regime::InviscidDarcy);
        EXPECT_NEAR(m.porosity, 0.75, 1e-15);
        EXPECT_NEAR(m.c_hat, 1.0, 1e-15);
        EXPECT_NO_THROW(m.check());
    }
    auto broken = cached_medium(Regime::SteadyDarcy);
    broken.steady.reset();
    EXPECT_THROW(broken.check(), ValidationError);
}

TEST(MacroSolver, StepCountAndRunOutputs) {
    auto prob = problem(Regime::SteadyDarcy);
    MacroSolver s(prob);
    EXPECT_EQ(s.step_count(), 10);
    const auto res = run(prob, nullptr, 3);
    ASSERT_EQ(res.diagnostics.size(), 10u);
    ASSERT_EQ(res.states.size(), 5u);
    EXPECT_EQ(res.states[1].step, 3);
    EXPECT_EQ(res.states.back().step, 10);
    EXPECT_NEAR(res.states.back().t, 0.1, 1e-12);
    prob.T = 0.0;
    EXPECT_EQ(run(prob).states.size(), 1u);
}

TEST(MacroSolver, UniformThroughFlowReachesSteadyState) {
    auto prob = problem(Regime::SteadyDarcy);
    prob.medium.params.pstar = 1e4;
    prob.T = 2.0;
    prob.dt = 0.05;
    prob.v0 = [](const Point&, double) { return Point{1.0, 0.0, 0.0}; };
    const auto res = run(prob);
    const auto& v = res.states.back().v;
    for (double x : v[0]) EXPECT_NEAR(x, 1.0, 1e-6);
    for (double x : v[1]) EXPECT_NEAR(x, 0.0, 1e-6);
    const double B = prob.medium.steady->B2(0, 0);
    const auto& p = res.states.back().p;
    MacroSolver solver(prob);
    const auto& g = solver.grid();
    const auto a = g.index({3, 5, 0}), b = g.index({4, 5, 0});
    EXPECT_NEAR((p[b] - p[a]) / g.h(), -1.0 / B, 1e-6 / B);
}

TEST(MacroSolver, ZeroBoundaryDataDissipatesPressure) {
    for (Regime r : {Regime::SteadyDarcy, Regime::MemoryDarcy, Regime::InviscidDarcy}) {
        auto prob = problem(r);
        prob.T = 0.5;
        MacroSolver solver(prob);
        MacroState s = solver.initial_state();
        solver.set_initial_pressure(s, [](const Point& x, double) { return std::cos(2.0 * std::numbers::pi * x[0]); });
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 0; k < solver.step_count(); ++k) {
            const auto d = solver.step(s);
            if (r == Regime::SteadyDarcy) {
                EXPECT_LE(d.pressure_energy, previous + 1e-14);
            }
            previous = d.pressure_energy;
            EXPECT_LE(d.mass_residual, prob.picard_tol);
            EXPECT_LE(d.continuity_residual, 1e-8);
        }
        EXPECT_THROW(solver.set_initial_pressure(s, [](const Point&, double) { return 0.0; }), std::logic_error);
    }
}

TEST(MacroSolver, ThermalCouplingConverges) {
    auto prob = problem(Regime::MemoryDarcy);
    prob.medium.params.beta0f = 0.5;
    prob.medium.params.nu0 = 0.2;
    prob.theta0 = [](const Point& x, double t) { return t * (1.0 + x[0]); };
    prob.heat_source = [](const Point&, double) { return 1.0; };
    MacroSolver solver(prob);
    MacroState s = solver.initial_state();
    for (int k = 0; k < solver.step_count(); ++k) {
        const auto d = solver.step(s);
        EXPECT_GE(d.picard_iterations, 1);
        EXPECT_LE(d.mass_residual, prob.picard_tol);
    }
    EXPECT_GT(*std::max_element(s.theta.begin(), s.theta.end()), 0.0);
    EXPECT_GT(std::abs(*std::max_element(s.p.begin(), s.p.end())), 0.0);
}

TEST(MacroSolver, ConvolutionRulesAgree) {
    auto a = problem(Regime::MemoryDarcy);
    a.T = 0.5;
    a.v0 = [](const Point&, double t) { return Point{std::sin(4.0 * t), 0.0, 0.0}; };
    auto b = a;
    b.convolution = ConvolutionRule::KernelTrapezoid;
    const auto pa = run(a).states.back().p;
    const auto pb = run(b).states.back().p;
    double diff = 0.0, norm = 0.0;
    for (std::size_t c = 0; c < pa.size(); ++c) {
        diff += (pa[c] - pb[c]) * (pa[c] - pb[c]);
        norm += pa[c] * pa[c];
    }
    EXPECT_LT(std::sqrt(diff / norm), 0.1);
}

TEST(MacroSolver, RejectsInconsistentProblems) {
    auto prob = problem(Regime::SteadyDarcy);
    prob.domain.dim = 3;
    EXPECT_ANY_THROW(MacroSolver{prob});
    prob = problem(Regime::SteadyDarcy);
    prob.dt = 0.0;
    EXPECT_THROW(MacroSolver{prob}, std::invalid_argument);
}
