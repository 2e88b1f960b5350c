#include "thermoporo/cell_flow.hpp"
#include "thermoporo/cell_thermal.hpp"
#include "thermoporo/error.hpp"
#include "thermoporo/geometry.hpp"
#include "thermoporo/tensor.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermoporo;

namespace {

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(CellThermal, LaminateHarmonicAndArithmetic) {
    const auto g = make_laminate(2, 16, 0.25);
    const auto t = conductivity_tensor(g, 1.0, 3.0);
    const double harmonic = 1.0 / (0.25 / 1.0 + 0.75 / 3.0);
    EXPECT_NEAR(t.Btheta(0, 0), harmonic, 1e-8);
    EXPECT_NEAR(t.Btheta(1, 1), 0.25 + 0.75 * 3.0, 1e-8);
    EXPECT_NEAR(t.Btheta(0, 1), 0.0, 1e-10);
    EXPECT_NEAR(t.kappa_hat, 0.25 + 0.75 * 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(harmonic_mean_conductivity(g, 1.0, 3.0), harmonic);
    EXPECT_DOUBLE_EQ(arithmetic_mean_conductivity(g, 1.0, 3.0), 2.5);
}

TEST(CellThermal, RotationCovariance) {
    const auto g = make_random_connected(2, 12, 9);
    const Matrix B = conductivity_tensor(g, 1.0, 6.0).Btheta;
    const Matrix Br = conductivity_tensor(rotate90(g, 0, 1), 1.0, 6.0).Btheta;
    const Matrix R = rotation_matrix(2, 0, 1);
    EXPECT_LT(rel(Br, R * B * R.transpose()), 1e-8);
}

TEST(CellThermal, ShiftInvarianceAndPhaseSwapDuality) {
    const auto g = make_checkerboard(2, 16);
    const Matrix B = conductivity_tensor(g, 1.0, 9.0).Btheta;
    EXPECT_LT(rel(conductivity_tensor(cyclic_shift(g, {5, 3, 0}), 1.0, 9.0).Btheta, B), 1e-8);
    EXPECT_LT(rel(conductivity_tensor(swap_phases(g), 9.0, 1.0).Btheta, B), 1e-8);
}

TEST(CellThermal, Errors) {
    const UnitCellGeometry fluid(2, 4, std::vector<std::uint8_t>(16, 1));
    EXPECT_THROW((void)conductivity_tensor(fluid, 1.0, 2.0), DegenerateGeometry);
    EXPECT_THROW((void)conductivity_tensor(make_laminate(2, 4, 0.5), 0.0, 2.0), std::invalid_argument);
}

TEST(CellFlow, ChannelPermeability) {
    const int n = 32;
    const auto g = make_channel(2, n, 0.5);
    const auto s = steady_permeability(g, 2.0);
    const double w = 0.5;
    EXPECT_NEAR(s.B2(0, 0), w * w * w / 24.0, 0.02 * w * w * w / 24.0);
    EXPECT_NEAR(s.B2(1, 1), 0.0, 1e-12);
    EXPECT_TRUE(s.degenerate[1]);
    EXPECT_FALSE(s.degenerate[0]);
}

TEST(CellFlow, PermeabilityScalesWithViscosity) {
    const auto g = make_centered_cube(2, 16, 0.5);
    const Matrix a = steady_permeability(g, 1.0).B2;
    const Matrix b = steady_permeability(g, 4.0).B2;
    EXPECT_LT(rel(4.0 * b, a), 1e-8);
    EXPECT_NEAR(a(0, 0), a(1, 1), 1e-8 * a(0, 0));
}

TEST(CellFlow, KernelIsMonotoneAndSaturates) {
    const auto g = make_centered_cube(2, 16, 0.5);
    const auto B2 = steady_permeability(g, 1.0).B2;
    const auto k = kernel_permeability(g, 1.0, 1.0, 1.0);
    ASSERT_GE(k.t.size(), 2u);
    EXPECT_NEAR(k.A.front().norm(), 0.0, 1e-14);
    for (std::size_t i = 1; i < k.A.size(); ++i) EXPECT_GE(k.A[i].trace(), k.A[i - 1].trace() - 1e-14);
    EXPECT_LT(rel(k.A.back(), B2), 1e-3);
    EXPECT_LT(rel(k.integral_B1(), B2), 1e-3);
    EXPECT_LT(rel(k.A_at(2.0 * k.horizon()), k.A.back()), 1e-15);
    EXPECT_NEAR(k.B1_at(2.0 * k.horizon()).norm(), 0.0, 0.0);
    EXPECT_GT(k.saturation_time(0.5), 0.0);
    EXPECT_LT(k.saturation_time(0.5), k.horizon());
}

TEST(CellFlow, KernelTimeScalesWithInertia) {
    const auto g = make_centered_cube(2, 8, 0.5);
    const auto a = kernel_permeability(g, 1.0, 1.0, 1.0);
    const auto b = kernel_permeability(g, 1.0, 2.0, 1.0);
    EXPECT_NEAR(b.saturation_time(0.5), 2.0 * a.saturation_time(0.5), 0.02 * a.saturation_time(0.5));
    EXPECT_THROW((void)kernel_permeability(g, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST(CellFlow, InertialTensorOfLaminate) {
    const auto g = make_laminate(2, 16, 0.5);
    const auto it = inertial_tensor(g);
    EXPECT_NEAR(it.porosity, 0.5, 1e-15);
    EXPECT_NEAR(it.M(1, 1), 0.5, 1e-8);
    EXPECT_NEAR(it.M(0, 0), 0.0, 1e-8);
}

TEST(CellFlow, InertialTensorBoundedByPorosity) {
    const auto g = make_centered_cube(2, 16, 0.5);
    const auto it = inertial_tensor(g);
    const Vector ev = symmetric_eigenvalues(it.M);
    EXPECT_GT(ev[0], 0.0);
    EXPECT_LT(ev[1], it.porosity);
    EXPECT_LT(rel(it.M + it.B3, it.porosity * Matrix::Identity(2, 2)), 1e-12);
}
