// AVX2 kernel variants. This translation unit is compiled with -mavx2 and
// only linked on x86-64; a runtime CPU check still gates the dispatch.
//
// Mul/add only (no FMA), so each lane reproduces the scalar reference
// bit-for-bit; reductions use the fixed 4-lane schedule from kernels.hpp.
#include "ordpat/kernels.hpp"

#if defined(ORDPAT_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace ordpat {
namespace {

void squared_distances_avx2(double cx, double cy, const double* xs,
                            const double* ys, std::size_t count, double* out) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
    const __m256d d2 =
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    _mm256_storeu_pd(out + i, d2);
  }
  for (; i < count; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    out[i] = dx * dx + dy * dy;
  }
}

void scale_add_avx2(std::size_t count, double a, const double* x,
                    const double* b, double* out) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(b + i), prod));
  }
  for (; i < count; ++i) {
    out[i] = b[i] + a * x[i];
  }
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t count) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vmax = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(sign_mask, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double m = std::fmax(std::fmax(lanes[0], lanes[1]),
                       std::fmax(lanes[2], lanes[3]));
  for (; i < count; ++i) {
    m = std::fmax(m, std::fabs(a[i] - b[i]));
  }
  return m;
}

double sum_avx2(const double* x, std::size_t count) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (; i < count; ++i) {
    acc[i & 3] += x[i];  // tail index % 4 matches its lane
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

const KernelTable* avx2_kernels() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const KernelTable table{"avx2", squared_distances_avx2,
                                 scale_add_avx2, max_abs_diff_avx2, sum_avx2};
  return &table;
}

}  // namespace ordpat

#else

namespace ordpat {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace ordpat

#endif
