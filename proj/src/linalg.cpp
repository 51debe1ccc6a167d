#include "ordpat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordpat/errors.hpp"

namespace ordpat {

Matrix Matrix::identity(int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw_numerical_error("matmul: dimension mismatch");
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols != static_cast<int>(x.size())) {
    throw_numerical_error("matvec: dimension mismatch");
  }
  std::vector<double> y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double trace(const Matrix& a) {
  double t = 0.0;
  const int d = std::min(a.rows, a.cols);
  for (int i = 0; i < d; ++i) t += a(i, i);
  return t;
}

double max_abs_entry(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

double max_asymmetry(const Matrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    for (int j = i + 1; j < a.cols; ++j) {
      m = std::max(m, std::fabs(a(i, j) - a(j, i)));
    }
  }
  return m;
}

bool cholesky_factor(Matrix& a) {
  const int n = a.rows;
  if (n != a.cols) throw_numerical_error("cholesky: matrix not square");
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  return true;
}

std::vector<double> cholesky_solve(const Matrix& chol,
                                   std::span<const double> b) {
  const int n = chol.rows;
  if (static_cast<int>(b.size()) != n) {
    throw_numerical_error("cholesky_solve: dimension mismatch");
  }
  std::vector<double> y(b.begin(), b.end());
  // L y = b
  for (int i = 0; i < n; ++i) {
    double s = y[i];
    for (int k = 0; k < i; ++k) s -= chol(i, k) * y[k];
    y[i] = s / chol(i, i);
  }
  // L^T x = y
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= chol(k, i) * y[k];
    y[i] = s / chol(i, i);
  }
  return y;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    for (int j = i + 1; j < a.cols; ++j) {
      s += 2.0 * a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

}  // namespace

void symmetric_eigen(const Matrix& a, Matrix& vectors,
                     std::vector<double>& values) {
  const int n = a.rows;
  if (n != a.cols) throw_numerical_error("symmetric_eigen: matrix not square");
  Matrix w = a;
  // Work on the symmetrized copy; inputs are symmetric up to roundoff.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (w(i, j) + w(j, i));
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  vectors = Matrix::identity(n);

  const double scale = std::max(max_abs_entry(w), 1e-300);
  const double tol = 1e-15 * scale * n;
  const int max_sweeps = 64;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(w) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double wkp = w(k, p);
          const double wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          const double wpk = w(p, k);
          const double wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = vectors(k, p);
          const double vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    values[i] = w(i, i);
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (values[i] != values[j]) return values[i] < values[j];
    return i < j;
  });
  std::vector<double> sorted_values(n);
  Matrix sorted_vectors(n, n);
  for (int j = 0; j < n; ++j) {
    sorted_values[j] = values[order[j]];
    for (int i = 0; i < n; ++i) sorted_vectors(i, j) = vectors(i, order[j]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

}  // namespace ordpat
