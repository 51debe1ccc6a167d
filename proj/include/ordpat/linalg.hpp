#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ordpat {

// Dense row-major matrix. Everything in this project is (m!-1) x (m!-1)
// with m capped at 6, so the routines below favor clarity and determinism
// over blocked performance.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[std::size_t(r) * cols + c]; }
  double operator()(int r, int c) const {
    return data[std::size_t(r) * cols + c];
  }

  static Matrix identity(int d);
};

Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
double trace(const Matrix& a);
double max_abs_entry(const Matrix& a);
// max_{i,j} |a_ij - a_ji|
double max_asymmetry(const Matrix& a);

// In-place Cholesky A = L L^T on the lower triangle; false when a pivot is
// not strictly positive (A not positive definite).
bool cholesky_factor(Matrix& a);
// Solves A x = b using a factor produced by cholesky_factor.
std::vector<double> cholesky_solve(const Matrix& chol,
                                   std::span<const double> b);

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues come
// back ascending, eigenvectors as the corresponding columns of `vectors`.
// Deterministic sweep order, converges to machine precision.
void symmetric_eigen(const Matrix& a, Matrix& vectors,
                     std::vector<double>& values);

}  // namespace ordpat
