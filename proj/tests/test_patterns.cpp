#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/independence.hpp"
#include "ordpat/patterns.hpp"
#include "ordpat/rng.hpp"

using namespace ordpat;

TEST_CASE("rank/word codecs invert each other for all m <= 5") {
  CHECK(word_to_rank(std::vector<int>{0, 1, 2}) == 0);
  CHECK(rank_to_word(0, 3) == std::vector<int>{0, 1, 2});
  CHECK(word_to_rank(std::vector<int>{2, 1, 0}) == 5);
  CHECK(rank_to_word(5, 3) == std::vector<int>{2, 1, 0});
  for (int m = 2; m <= 5; ++m) {
    const std::uint32_t mf = factorial(m);
    std::vector<int> prev;
    for (std::uint32_t r = 0; r < mf; ++r) {
      const auto word = rank_to_word(r, m);
      CHECK(word_to_rank(word) == r);
      if (r > 0) CHECK(std::lexicographical_compare(prev.begin(), prev.end(),
                                                    word.begin(), word.end()));
      prev = word;
    }
  }
  CHECK_THROWS_AS(rank_to_word(6, 3), Error);
  CHECK_THROWS_AS(word_to_rank(std::vector<int>{0, 0, 2}), Error);
  CHECK_THROWS_AS(word_to_rank(std::vector<int>{0, 3, 1}), Error);
}

TEST_CASE("ordinal pattern basics") {
  CHECK(ordinal_pattern_rank(std::vector<double>{1.0, 2.0, 3.0}) == 0);
  CHECK(ordinal_pattern_rank(std::vector<double>{0.2, 0.7, 0.5}) == 1);
  CHECK(ordinal_pattern_rank(std::vector<double>{3.0, 2.0, 1.0}) == 5);

  bool tied = false;
  CHECK(ordinal_pattern_rank(std::vector<double>{1.0, 1.0, 2.0}, &tied) == 0);
  CHECK(tied);
  ordinal_pattern_rank(std::vector<double>{1.0, 1.5, 2.0}, &tied);
  CHECK_FALSE(tied);

  CHECK_THROWS_AS(
      ordinal_pattern_rank(std::vector<double>{1.0, std::nan("")}), Error);
  CHECK_THROWS_AS(ordinal_pattern_rank(std::vector<double>{1.0}), Error);
}

TEST_CASE("pattern rank matches the permutation-enumeration oracle") {
  SplitMix64 rng(101);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> vals(4);
    for (double& v : vals) v = rng.next_double();
    CHECK(ordinal_pattern_rank(vals) == oracle::brute_pattern_rank(vals));
  }
  // With ties: quantized values.
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> vals(4);
    for (double& v : vals) v = std::floor(rng.next_double() * 3.0);
    CHECK(ordinal_pattern_rank(vals) == oracle::brute_pattern_rank(vals));
  }
}

TEST_CASE("monotone invariance and anti-monotone reversal") {
  SplitMix64 rng(55);
  for (int rep = 0; rep < 300; ++rep) {
    const int m = 2 + static_cast<int>(rng.next() % 4);
    std::vector<double> vals(m);
    for (double& v : vals) v = 4.0 * (rng.next_double() - 0.5);
    const std::uint32_t base = ordinal_pattern_rank(vals);

    std::vector<double> affine(m), expv(m), cubed(m), negated(m);
    for (int i = 0; i < m; ++i) {
      affine[i] = 5.0 * vals[i] + 2.0;
      expv[i] = std::exp(vals[i]);
      cubed[i] = vals[i] * vals[i] * vals[i];
      negated[i] = -vals[i];
    }
    CHECK(ordinal_pattern_rank(affine) == base);
    CHECK(ordinal_pattern_rank(expv) == base);
    CHECK(ordinal_pattern_rank(cubed) == base);

    // x -> -x reverses the word (continuous values, ties a.s. absent).
    auto word = rank_to_word(base, m);
    std::reverse(word.begin(), word.end());
    CHECK(ordinal_pattern_rank(negated) == word_to_rank(word));
  }
}

TEST_CASE("hand-built right-neighbour blocks on an increasing line") {
  // All mass lands on the identity pattern when every block looks right.
  const int n = 50;
  PointCloud cloud;
  cloud.xs.resize(n);
  cloud.ys.assign(n, 0.0);
  cloud.values.resize(n);
  for (int i = 0; i < n; ++i) {
    cloud.xs[i] = i;
    cloud.values[i] = std::tanh(0.2 * i);  // strictly increasing
  }
  BlockSet blocks;
  blocks.m = 2;
  for (int i = 0; i < n; ++i) {
    blocks.members.push_back(i);
    blocks.members.push_back((i + 1) % n);  // wrap keeps it well-formed
  }
  const PatternCounts counts = pattern_frequencies(cloud, blocks);
  CHECK(counts.counts[0] == static_cast<std::uint64_t>(n - 1));
  CHECK(counts.counts[1] == 1);  // the wrapped block sees a decrease
  CHECK(counts.total == static_cast<std::uint64_t>(n));
}

TEST_CASE("frequencies are invariant under exp of the values") {
  SplitMix64 rng(77);
  PointCloud cloud;
  const int n = 200;
  cloud.xs.resize(n);
  cloud.ys.resize(n);
  cloud.values.resize(n);
  for (int i = 0; i < n; ++i) {
    cloud.xs[i] = rng.next_double();
    cloud.ys[i] = rng.next_double();
    cloud.values[i] = rng.next_gaussian();
  }
  const BlockSet blocks = build_blocks(cloud, 3);
  const PatternCounts before = pattern_frequencies(cloud, blocks);
  PointCloud warped = cloud;
  for (double& v : warped.values) v = std::exp(v);
  const PatternCounts after = pattern_frequencies(warped, blocks);
  CHECK(before.counts == after.counts);
}

TEST_CASE("iid uniform values give near-uniform pattern frequencies") {
  SplitMix64 rng(123);
  const int n = 5000;
  PointCloud cloud;
  cloud.xs.resize(n);
  cloud.ys.resize(n);
  cloud.values.resize(n);
  for (int i = 0; i < n; ++i) {
    cloud.xs[i] = rng.next_double();
    cloud.ys[i] = rng.next_double();
    cloud.values[i] = rng.next_double();
  }
  const BlockSet blocks = build_blocks(cloud, 3);
  const PatternCounts counts = pattern_frequencies(cloud, blocks);
  CHECK(counts.total == static_cast<std::uint64_t>(n));
  for (int j = 0; j < 6; ++j) {
    CHECK(std::fabs(counts.frequency(j) - 1.0 / 6.0) < 0.03);
  }
}

TEST_CASE("uniformity under the null: chi-square GOF on 1e5 blocks") {
  // Independent blocks of 3 i.i.d. values; the empirical pattern law must
  // not reject uniformity at the 1e-4 level.
  SplitMix64 rng(2024);
  std::vector<std::uint64_t> counts(6, 0);
  const int reps = 100000;
  for (int rep = 0; rep < reps; ++rep) {
    double vals[3] = {rng.next_double(), rng.next_double(),
                      rng.next_double()};
    ++counts[ordinal_pattern_rank({vals, 3})];
  }
  const double expected = reps / 6.0;
  double chi2 = 0.0;
  for (std::uint64_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < chi2_quantile(1.0 - 1e-4, 5));
}

TEST_CASE("indicator matrix: one-hot rows, zero reference row, column means") {
  SplitMix64 rng(31);
  PointCloud cloud;
  const int n = 120;
  cloud.xs.resize(n);
  cloud.ys.resize(n);
  cloud.values.resize(n);
  for (int i = 0; i < n; ++i) {
    cloud.xs[i] = rng.next_double();
    cloud.ys[i] = rng.next_double();
    cloud.values[i] = rng.next_gaussian();
  }
  const BlockSet blocks = build_blocks(cloud, 3);
  const SymbolizedField field = symbolize_blocks(cloud, blocks);
  const PatternCounts counts = tally_ranks(field.ranks, 3);
  const Matrix ind = indicator_matrix(cloud, blocks);
  REQUIRE(ind.rows == n);
  REQUIRE(ind.cols == 5);
  for (int s = 0; s < n; ++s) {
    double row_sum = 0.0;
    for (int j = 0; j < 5; ++j) {
      CHECK((ind(s, j) == 0.0 || ind(s, j) == 1.0));
      row_sum += ind(s, j);
    }
    if (field.ranks[s] == 5) {
      CHECK(row_sum == 0.0);
    } else {
      CHECK(row_sum == 1.0);
      CHECK(ind(s, static_cast<int>(field.ranks[s])) == 1.0);
    }
  }
  for (int j = 0; j < 5; ++j) {
    double mean = 0.0;
    for (int s = 0; s < n; ++s) mean += ind(s, j);
    mean /= n;
    CHECK(mean == doctest::Approx(counts.frequency(j)).epsilon(1e-15));
  }
}

TEST_CASE("tie counting is reported") {
  PointCloud cloud;
  cloud.xs = {0.0, 1.0, 2.0, 3.0};
  cloud.ys = {0.0, 0.0, 0.0, 0.0};
  cloud.values = {1.0, 1.0, 2.0, 3.0};
  const BlockSet blocks = build_blocks(cloud, 2);
  const SymbolizedField field = symbolize_blocks(cloud, blocks);
  // Only block (0,1) holds the tied pair: the angle rule points center 1
  // at its right-hand neighbour 2, whose value differs.
  CHECK(field.tied_blocks == 1);
}
