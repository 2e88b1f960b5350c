#include "thermoporo/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <stdexcept>

namespace thermoporo {

Matrix symmetric_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double relative_asymmetry(const Matrix& a) {
    const double norm = a.norm();
    if (norm == 0.0) return 0.0;
    return (a - a.transpose()).norm() / norm;
}

Vector symmetric_eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("symmetric_eigenvalues: matrix is not square");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

bool positive_definite(const Matrix& a, double floor) {
    if (a.size() == 0) return false;
    return symmetric_eigenvalues(a).minCoeff() > floor;
}

Matrix rotation_matrix(int dim, int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= dim || b >= dim) throw std::invalid_argument("rotation_matrix: bad axes");
    Matrix r = Matrix::Identity(dim, dim);
    r(a, a) = 0.0;
    r(b, b) = 0.0;
    r(b, a) = 1.0;
    r(a, b) = -1.0;
    return r;
}

std::string format_row(const Matrix& a, int row) {
    std::string out;
    char buf[40];
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", a(row, j));
        if (j) out += ' ';
        out += buf;
    }
    return out;
}

}  // namespace thermoporo
