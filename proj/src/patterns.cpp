#include "ordpat/patterns.hpp"

#include <cmath>
#include <string>

#include "ordpat/errors.hpp"

namespace ordpat {

std::uint32_t factorial(int m) {
  if (m < 0 || m > 12) {
    throw_data_error("factorial: m out of range (0..12)");
  }
  std::uint32_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint32_t>(i);
  return f;
}

std::uint32_t word_to_rank(std::span<const int> word) {
  const int m = static_cast<int>(word.size());
  std::uint32_t seen = 0;  // bitmask of used symbols
  for (int i = 0; i < m; ++i) {
    const int w = word[i];
    if (w < 0 || w >= m || (seen >> w) & 1u) {
      throw_data_error("word_to_rank: not a permutation of 0..m-1");
    }
    seen |= 1u << w;
  }
  std::uint32_t rank = 0;
  for (int i = 0; i < m; ++i) {
    std::uint32_t smaller_after = 0;
    for (int j = i + 1; j < m; ++j) {
      if (word[j] < word[i]) ++smaller_after;
    }
    rank = rank * static_cast<std::uint32_t>(m - i) + smaller_after;
  }
  return rank;
}

std::vector<int> rank_to_word(std::uint32_t rank, int m) {
  const std::uint32_t mf = factorial(m);
  if (rank >= mf) throw_data_error("rank_to_word: rank out of range");
  std::vector<int> pool(m);
  for (int i = 0; i < m; ++i) pool[i] = i;
  std::vector<int> word(m);
  std::uint32_t radix = mf;
  for (int i = 0; i < m; ++i) {
    radix /= static_cast<std::uint32_t>(m - i);
    const std::uint32_t digit = rank / radix;
    rank %= radix;
    word[i] = pool[digit];
    pool.erase(pool.begin() + digit);
  }
  return word;
}

std::uint32_t ordinal_pattern_rank(std::span<const double> values,
                                   bool* tied) {
  const int m = static_cast<int>(values.size());
  if (m < 2) throw_data_error("ordinal_pattern_rank: need at least 2 values");
  if (m > 12) throw_data_error("ordinal_pattern_rank: m out of range");
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw_data_error("ordinal_pattern_rank: non-finite value");
    }
  }

  // Stable insertion argsort by (value, position); m is tiny.
  int word[12];
  for (int i = 0; i < m; ++i) {
    int pos = i;
    while (pos > 0 && values[word[pos - 1]] > values[i]) {
      word[pos] = word[pos - 1];
      --pos;
    }
    word[pos] = i;
  }

  if (tied != nullptr) {
    *tied = false;
    for (int i = 1; i < m; ++i) {
      if (values[word[i]] == values[word[i - 1]]) {
        *tied = true;
        break;
      }
    }
  }

  // Lehmer rank; word[] is a permutation by construction.
  std::uint32_t rank = 0;
  for (int i = 0; i < m; ++i) {
    std::uint32_t smaller_after = 0;
    for (int j = i + 1; j < m; ++j) {
      if (word[j] < word[i]) ++smaller_after;
    }
    rank = rank * static_cast<std::uint32_t>(m - i) + smaller_after;
  }
  return rank;
}

SymbolizedField symbolize_blocks(const PointCloud& cloud,
                                 const BlockSet& blocks) {
  const int n = blocks.count();
  const int m = blocks.m;
  SymbolizedField field;
  field.m = m;
  field.ranks.resize(n);
  double vals[12];
  for (int s = 0; s < n; ++s) {
    const auto block = blocks.block(s);
    for (int j = 0; j < m; ++j) vals[j] = cloud.values[block[j]];
    bool tied = false;
    field.ranks[s] = ordinal_pattern_rank({vals, std::size_t(m)}, &tied);
    if (tied) ++field.tied_blocks;
  }
  return field;
}

PatternCounts tally_ranks(std::span<const std::uint32_t> ranks, int m) {
  PatternCounts pc;
  pc.m = m;
  pc.total = ranks.size();
  pc.counts.assign(factorial(m), 0);
  for (std::uint32_t r : ranks) {
    if (r >= pc.counts.size()) throw_data_error("tally_ranks: rank out of range");
    ++pc.counts[r];
  }
  return pc;
}

PatternCounts pattern_frequencies(const PointCloud& cloud,
                                  const BlockSet& blocks) {
  const SymbolizedField field = symbolize_blocks(cloud, blocks);
  return tally_ranks(field.ranks, blocks.m);
}

Matrix indicator_matrix(const PointCloud& cloud, const BlockSet& blocks) {
  const SymbolizedField field = symbolize_blocks(cloud, blocks);
  const int n = blocks.count();
  const int d = static_cast<int>(factorial(blocks.m)) - 1;
  Matrix ind(n, d);
  for (int s = 0; s < n; ++s) {
    const std::uint32_t r = field.ranks[s];
    if (r < static_cast<std::uint32_t>(d)) ind(s, static_cast<int>(r)) = 1.0;
  }
  return ind;
}

}  // namespace ordpat
