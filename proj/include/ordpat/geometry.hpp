#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace ordpat {

// Planar locations plus one scalar observation per location.
struct PointCloud {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;

  std::size_t size() const { return xs.size(); }
};

// Throws a data error on length mismatch, non-finite coordinates/values,
// or n < m.
void validate_cloud(const PointCloud& cloud, int m);

// Points sharing exact coordinates with an earlier point. Duplicates are
// allowed (the index tie-break keeps blocks deterministic) but reported.
std::size_t duplicate_coordinate_count(const PointCloud& cloud);

// One m-tuple per vertex: members[i*m] == i, the rest are the m-1 nearest
// others ordered by (squared distance, polar angle in [0,2pi), index).
struct BlockSet {
  int m = 0;
  std::vector<std::int32_t> members;

  int count() const { return m == 0 ? 0 : static_cast<int>(members.size()) / m; }
  std::span<const std::int32_t> block(int i) const {
    return {members.data() + std::size_t(i) * m, std::size_t(m)};
  }
};

// Exact nearest-neighbour blocks. Uses a uniform grid to prune candidates;
// the result is identical to a full scan under the same ordering.
BlockSet build_blocks(const PointCloud& cloud, int m);

// Undirected graph in CSR form with per-vertex sorted adjacency.
struct SpatialGraph {
  std::vector<std::int32_t> offsets;    // size n+1
  std::vector<std::int32_t> neighbors;  // sorted within each vertex

  int count() const { return static_cast<int>(offsets.size()) - 1; }
  std::span<const std::int32_t> adjacent(int v) const {
    return {neighbors.data() + offsets[v],
            std::size_t(offsets[v + 1] - offsets[v])};
  }
  int degree(int v) const { return offsets[v + 1] - offsets[v]; }
};

// Edge {s,u} iff u is in s's block or s is in u's block.
SpatialGraph build_graph(const BlockSet& blocks, int n);

inline constexpr std::int32_t kUnreachable = -1;

// Hop distances from one source; kUnreachable marks vertices beyond h_max
// or in another component.
struct ShellIndex {
  std::int32_t source = 0;
  std::vector<std::int32_t> distance;
};

ShellIndex bfs_distances(const SpatialGraph& graph, std::int32_t source,
                         std::int32_t h_max =
                             std::numeric_limits<std::int32_t>::max());

// U(h) over ordered vertex pairs, h = 0..h_max. U(0) = n.
std::vector<std::uint64_t> distance_pair_counts(const SpatialGraph& graph,
                                                int h_max, int threads = 1);

// (1/n) sum_i |shell(i,h)|^k
double shell_size_moment(const SpatialGraph& graph, int h, double k);

// (1/n) sum_i max_{j in shell(i,h)} |ball(i,f) \ ball(j,h-1)|^k,
// empty shells contributing 0.
double shell_overlap_moment(const SpatialGraph& graph, int h, int f, double k);

// min over the beta grid of overlap(h,f;k*beta)^(1/beta) *
// size(h; beta/(beta-1))^(1-1/beta). Grid entries must exceed 1.
double holder_sparsity_index(const SpatialGraph& graph, int h, int f, double k,
                             std::span<const double> beta_grid);

inline std::span<const double> default_beta_grid() {
  static const double grid[] = {1.1, 1.25, 1.5, 2.0, 3.0, 5.0};
  return grid;
}

// Debug export: "u v" per line, ascending (u,v).
void write_edge_list(const SpatialGraph& graph, std::ostream& os);

}  // namespace ordpat
