#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ordpat/geometry.hpp"
#include "ordpat/linalg.hpp"

namespace ordpat {

// m! for small m; errors out beyond m = 12 (rank no longer fits 32 bits).
std::uint32_t factorial(int m);

// Lexicographic rank of a permutation word over {0..m-1} (Lehmer code).
std::uint32_t word_to_rank(std::span<const int> word);
std::vector<int> rank_to_word(std::uint32_t rank, int m);

// Ordinal pattern of a block: the word w with values[w[0]] <= ... <=
// values[w[m-1]], stable on ties (earlier block position first), returned
// as its lexicographic rank. Sets *tied when any two values are equal.
std::uint32_t ordinal_pattern_rank(std::span<const double> values,
                                   bool* tied = nullptr);

// Per-vertex pattern ranks for a whole block set.
struct SymbolizedField {
  int m = 0;
  std::vector<std::uint32_t> ranks;
  std::uint64_t tied_blocks = 0;
};

SymbolizedField symbolize_blocks(const PointCloud& cloud,
                                 const BlockSet& blocks);

// Empirical pattern distribution over all m! patterns.
struct PatternCounts {
  int m = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> counts;  // length m!

  double frequency(std::uint32_t rank) const {
    return static_cast<double>(counts[rank]) / static_cast<double>(total);
  }
};

PatternCounts tally_ranks(std::span<const std::uint32_t> ranks, int m);
PatternCounts pattern_frequencies(const PointCloud& cloud,
                                  const BlockSet& blocks);

// n x (m!-1) one-hot rows over the first m!-1 patterns; the reference
// pattern (lexicographically last word) maps to an all-zero row.
Matrix indicator_matrix(const PointCloud& cloud, const BlockSet& blocks);

}  // namespace ordpat
