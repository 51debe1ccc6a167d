#pragma once

#include <cstddef>

namespace ordpat {

// Data-parallel primitives used by the hot loops (kNN candidate scans,
// Neumann sweeps, reduction passes). Every entry has a scalar reference
// implementation and, on x86-64, an AVX2 variant selected at runtime.
//
// The two variants must agree bit-for-bit, not just to a tolerance:
//  - no FMA contraction anywhere (the build disables it globally),
//  - reductions follow a fixed 4-lane schedule: lane j accumulates the
//    elements with index % 4 == j, and the lanes combine as
//    (l0 + l1) + (l2 + l3). The scalar versions implement the identical
//    schedule, so dispatch never changes a result.
struct KernelTable {
  const char* name;

  // out[i] = (xs[i] - cx)^2 + (ys[i] - cy)^2
  void (*squared_distances)(double cx, double cy, const double* xs,
                            const double* ys, std::size_t count, double* out);

  // out[i] = b[i] + a * x[i]   (out may alias b or x)
  void (*scale_add)(std::size_t count, double a, const double* x,
                    const double* b, double* out);

  // max_i |a[i] - b[i]|; 0 for empty input
  double (*max_abs_diff)(const double* a, const double* b, std::size_t count);

  // 4-lane strided sum per the schedule above
  double (*sum)(const double* x, std::size_t count);
};

const KernelTable& scalar_kernels();

// nullptr when AVX2 is unavailable (not compiled in, or CPU lacks it).
const KernelTable* avx2_kernels();

// Best available table, chosen once at first use.
const KernelTable& active_kernels();

}  // namespace ordpat
