#include "ordpat/kernels.hpp"

#include <cmath>

namespace ordpat {
namespace {

void squared_distances_scalar(double cx, double cy, const double* xs,
                              const double* ys, std::size_t count,
                              double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    out[i] = dx * dx + dy * dy;
  }
}

void scale_add_scalar(std::size_t count, double a, const double* x,
                      const double* b, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = b[i] + a * x[i];
  }
}

double max_abs_diff_scalar(const double* a, const double* b,
                           std::size_t count) {
  double m = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    m = std::fmax(m, std::fabs(a[i] - b[i]));
  }
  return m;
}

double sum_scalar(const double* x, std::size_t count) {
  // Same 4-lane schedule as the vector variant.
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < count; ++i) {
    acc[i & 3] += x[i];
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", squared_distances_scalar,
                                 scale_add_scalar, max_abs_diff_scalar,
                                 sum_scalar};
  return table;
}

}  // namespace ordpat
