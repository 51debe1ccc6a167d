#include "ordpat/kernels.hpp"

namespace ordpat {

const KernelTable& active_kernels() {
  static const KernelTable* selected = [] {
    if (const KernelTable* simd = avx2_kernels()) return simd;
    return &scalar_kernels();
  }();
  return *selected;
}

}  // namespace ordpat
