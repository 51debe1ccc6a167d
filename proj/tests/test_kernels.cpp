#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "ordpat/kernels.hpp"
#include "ordpat/rng.hpp"

using namespace ordpat;

namespace {

std::vector<double> random_vector(std::size_t count, std::uint64_t seed,
                                  double scale = 1.0) {
  SplitMix64 rng(seed);
  std::vector<double> v(count);
  for (double& x : v) x = scale * (rng.next_double() - 0.5);
  return v;
}

}  // namespace

TEST_CASE("scalar squared distances match a plain loop") {
  const auto xs = random_vector(37, 11);
  const auto ys = random_vector(37, 12);
  std::vector<double> out(37);
  scalar_kernels().squared_distances(0.25, -0.5, xs.data(), ys.data(), 37,
                                     out.data());
  for (std::size_t i = 0; i < 37; ++i) {
    const double dx = xs[i] - 0.25;
    const double dy = ys[i] + 0.5;
    CHECK(out[i] == dx * dx + dy * dy);
  }
}

TEST_CASE("scalar sum follows the documented 4-lane schedule") {
  const std::vector<double> v{1e16, 1.0, -1e16, 2.0, 3.0};
  // lanes: l0 = 1e16 + 3, l1 = 1, l2 = -1e16, l3 = 2
  const double expected = ((1e16 + 3.0) + 1.0) + (-1e16 + 2.0);
  CHECK(scalar_kernels().sum(v.data(), v.size()) == expected);
}

TEST_CASE("dispatched kernels agree with scalar bit-for-bit") {
  const KernelTable& simd = active_kernels();
  const KernelTable& ref = scalar_kernels();
  INFO("active table: ", simd.name);

  for (std::size_t count : {std::size_t(0), std::size_t(1), std::size_t(3),
                            std::size_t(4), std::size_t(7), std::size_t(8),
                            std::size_t(1023), std::size_t(4096)}) {
    const auto xs = random_vector(count, 100 + count, 1e3);
    const auto ys = random_vector(count, 200 + count, 1e-3);

    std::vector<double> a(count), b(count);
    ref.squared_distances(0.125, 7.5, xs.data(), ys.data(), count, a.data());
    simd.squared_distances(0.125, 7.5, xs.data(), ys.data(), count, b.data());
    CHECK(std::memcmp(a.data(), b.data(), count * sizeof(double)) == 0);

    ref.scale_add(count, -0.8125, xs.data(), ys.data(), a.data());
    simd.scale_add(count, -0.8125, xs.data(), ys.data(), b.data());
    CHECK(std::memcmp(a.data(), b.data(), count * sizeof(double)) == 0);

    const double m1 = ref.max_abs_diff(xs.data(), ys.data(), count);
    const double m2 = simd.max_abs_diff(xs.data(), ys.data(), count);
    CHECK(m1 == m2);

    const double s1 = ref.sum(xs.data(), count);
    const double s2 = simd.sum(xs.data(), count);
    CHECK(s1 == s2);
  }
}

TEST_CASE("avx2 variant, when present, is exercised directly") {
  const KernelTable* simd = avx2_kernels();
  if (simd == nullptr) {
    MESSAGE("AVX2 unavailable on this host; dispatch falls back to scalar");
    CHECK(std::strcmp(active_kernels().name, "scalar") == 0);
    return;
  }
  CHECK(std::strcmp(simd->name, "avx2") == 0);
  const auto xs = random_vector(513, 5, 10.0);
  const auto ys = random_vector(513, 6, 10.0);
  std::vector<double> a(513), b(513);
  scalar_kernels().squared_distances(1.5, -2.5, xs.data(), ys.data(), 513,
                                     a.data());
  simd->squared_distances(1.5, -2.5, xs.data(), ys.data(), 513, b.data());
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * 513) == 0);
  CHECK(scalar_kernels().sum(xs.data(), 513) == simd->sum(xs.data(), 513));
  CHECK(scalar_kernels().max_abs_diff(xs.data(), ys.data(), 513) ==
        simd->max_abs_diff(xs.data(), ys.data(), 513));
}

TEST_CASE("scale_add supports aliased output") {
  const KernelTable& kern = active_kernels();
  auto x = random_vector(129, 7);
  const auto b = random_vector(129, 8);
  std::vector<double> expected(129);
  for (std::size_t i = 0; i < x.size(); ++i) expected[i] = b[i] + 0.5 * x[i];
  kern.scale_add(x.size(), 0.5, x.data(), b.data(), x.data());
  CHECK(std::memcmp(x.data(), expected.data(), sizeof(double) * 129) == 0);
}

TEST_CASE("inverse normal CDF round-trips against erfc") {
  // Phi(x) = erfc(-x / sqrt(2)) / 2 serves as an independent oracle.
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.975, 1 - 1e-6,
                   1 - 1e-12}) {
    const double x = inverse_normal_cdf(p);
    const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
    CHECK(std::fabs(back - p) < 1e-12 * std::max(1.0, std::fabs(p)) + 1e-15);
  }
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(std::fabs(inverse_normal_cdf(0.975) - 1.959963984540054) < 1e-12);
  // 0.25 and 0.75 are exactly representable, so the two central-branch
  // evaluations see exactly opposite arguments.
  CHECK(inverse_normal_cdf(0.25) == -inverse_normal_cdf(0.75));
}

TEST_CASE("splitmix streams are deterministic and distinct") {
  SplitMix64 a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next();
    CHECK(va == b.next());
  }
  CHECK(a.next() != c.next());
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));

  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    const double d = u.next_double();
    CHECK(d > 0.0);
    CHECK(d < 1.0);
  }
}
