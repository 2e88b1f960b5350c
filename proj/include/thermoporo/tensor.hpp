#pragma once

#include <Eigen/Dense>

#include <string>

namespace thermoporo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// (A + Aᵀ)/2.
[[nodiscard]] Matrix symmetric_part(const Matrix& a);

/// ||A - Aᵀ||_F / ||A||_F, or 0 for the zero matrix.
[[nodiscard]] double relative_asymmetry(const Matrix& a);

/// Eigenvalues of the symmetric part, ascending.
[[nodiscard]] Vector symmetric_eigenvalues(const Matrix& a);

/// True when every eigenvalue of the symmetric part exceeds `floor`.
[[nodiscard]] bool positive_definite(const Matrix& a, double floor = 0.0);

/// Lattice rotation by 90° in the (a,b) plane: R e_a = e_b, R e_b = -e_a.
[[nodiscard]] Matrix rotation_matrix(int dim, int a, int b);

/// Row-wise text rendering, entries separated by single spaces.
[[nodiscard]] std::string format_row(const Matrix& a, int row);

}  // namespace thermoporo
