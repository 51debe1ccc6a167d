#include "ordpat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>
#include <utility>

#include "ordpat/errors.hpp"
#include "ordpat/kernels.hpp"

namespace ordpat {

void validate_cloud(const PointCloud& cloud, int m) {
  const std::size_t n = cloud.xs.size();
  if (cloud.ys.size() != n || cloud.values.size() != n) {
    throw_data_error("point cloud: coordinate/value lengths differ");
  }
  if (m < 2) throw_data_error("embedding dimension must be at least 2");
  if (n < static_cast<std::size_t>(m)) {
    throw_data_error("need at least m points (n=" + std::to_string(n) +
                     ", m=" + std::to_string(m) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(cloud.xs[i]) || !std::isfinite(cloud.ys[i])) {
      throw_data_error("non-finite coordinate at index " + std::to_string(i));
    }
    if (!std::isfinite(cloud.values[i])) {
      throw_data_error("non-finite value at index " + std::to_string(i));
    }
  }
}

std::size_t duplicate_coordinate_count(const PointCloud& cloud) {
  std::vector<std::pair<double, double>> pts(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    pts[i] = {cloud.xs[i], cloud.ys[i]};
  }
  std::sort(pts.begin(), pts.end());
  std::size_t dup = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i] == pts[i - 1]) ++dup;
  }
  return dup;
}

namespace {

// Polar angle of (neighbor - center) in [0, 2pi), measured from +x.
double polar_angle(double dx, double dy) {
  double a = std::atan2(dy, dx);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

// Candidate ordering for nearest-neighbour selection: squared distance,
// then polar angle, then index. Angles are only computed on distance ties.
struct CandidateLess {
  const PointCloud& cloud;
  double cx, cy;

  bool operator()(std::int32_t ia, double d2a, std::int32_t ib,
                  double d2b) const {
    if (d2a != d2b) return d2a < d2b;
    const double aa = polar_angle(cloud.xs[ia] - cx, cloud.ys[ia] - cy);
    const double ab = polar_angle(cloud.xs[ib] - cx, cloud.ys[ib] - cy);
    if (aa != ab) return aa < ab;
    return ia < ib;
  }
};

// Uniform bucket grid over the bounding box; roughly one point per cell.
struct BucketGrid {
  double min_x = 0, min_y = 0;
  double cell_w = 1, cell_h = 1;
  int gx = 1, gy = 1;
  std::vector<std::int32_t> cell_offsets;
  std::vector<std::int32_t> ids;  // point ids grouped by cell, ascending

  explicit BucketGrid(const PointCloud& cloud) {
    const int n = static_cast<int>(cloud.size());
    double max_x = cloud.xs[0], max_y = cloud.ys[0];
    min_x = cloud.xs[0];
    min_y = cloud.ys[0];
    for (int i = 1; i < n; ++i) {
      min_x = std::min(min_x, cloud.xs[i]);
      max_x = std::max(max_x, cloud.xs[i]);
      min_y = std::min(min_y, cloud.ys[i]);
      max_y = std::max(max_y, cloud.ys[i]);
    }
    const int g = std::max(1, static_cast<int>(std::sqrt(double(n))));
    gx = (max_x > min_x) ? g : 1;
    gy = (max_y > min_y) ? g : 1;
    cell_w = (max_x > min_x) ? (max_x - min_x) / gx : 1.0;
    cell_h = (max_y > min_y) ? (max_y - min_y) / gy : 1.0;

    std::vector<std::int32_t> cell_of(n);
    std::vector<std::int32_t> counts(std::size_t(gx) * gy + 1, 0);
    for (int i = 0; i < n; ++i) {
      cell_of[i] = cell_index(cloud.xs[i], cloud.ys[i]);
      ++counts[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
    cell_offsets = counts;
    ids.resize(n);
    std::vector<std::int32_t> cursor(cell_offsets.begin(),
                                     cell_offsets.end() - 1);
    for (int i = 0; i < n; ++i) {
      ids[cursor[cell_of[i]]++] = i;
    }
  }

  int cell_index(double x, double y) const {
    int cx = static_cast<int>((x - min_x) / cell_w);
    int cy = static_cast<int>((y - min_y) / cell_h);
    cx = std::clamp(cx, 0, gx - 1);
    cy = std::clamp(cy, 0, gy - 1);
    return cy * gx + cx;
  }

  std::span<const std::int32_t> cell_ids(int cx, int cy) const {
    const int c = cy * gx + cx;
    return {ids.data() + cell_offsets[c],
            std::size_t(cell_offsets[c + 1] - cell_offsets[c])};
  }
};

// Sorted fixed-size best list under CandidateLess.
struct BestList {
  std::vector<std::int32_t> id;
  std::vector<double> d2;
  int k;
  int size = 0;

  explicit BestList(int k_) : id(k_), d2(k_), k(k_) {}

  double worst_d2() const { return d2[size - 1]; }
  bool full() const { return size == k; }

  void insert(std::int32_t cand, double cand_d2, const CandidateLess& less) {
    if (full() && !less(cand, cand_d2, id[size - 1], d2[size - 1])) return;
    int pos = full() ? size - 1 : size;
    while (pos > 0 && less(cand, cand_d2, id[pos - 1], d2[pos - 1])) {
      id[pos] = id[pos - 1];
      d2[pos] = d2[pos - 1];
      --pos;
    }
    id[pos] = cand;
    d2[pos] = cand_d2;
    if (!full()) ++size;
  }
};

}  // namespace

BlockSet build_blocks(const PointCloud& cloud, int m) {
  validate_cloud(cloud, m);
  const int n = static_cast<int>(cloud.size());
  const int k = m - 1;

  BlockSet blocks;
  blocks.m = m;
  blocks.members.resize(std::size_t(n) * m);

  const BucketGrid grid(cloud);
  const double min_side = std::min(grid.cell_w, grid.cell_h);
  const int max_ring = std::max(grid.gx, grid.gy);
  const KernelTable& kern = active_kernels();

  std::vector<std::int32_t> cand_ids;
  std::vector<double> cand_xs, cand_ys, cand_d2;

  for (int i = 0; i < n; ++i) {
    const double cx = cloud.xs[i];
    const double cy = cloud.ys[i];
    const CandidateLess less{cloud, cx, cy};
    BestList best(k);

    const int home = grid.cell_index(cx, cy);
    const int home_cx = home % grid.gx;
    const int home_cy = home / grid.gx;

    for (int ring = 0; ring <= max_ring; ++ring) {
      // Gather candidates on the Chebyshev ring of cells.
      cand_ids.clear();
      const auto visit_cell = [&](int xcell, int ycell) {
        if (xcell < 0 || xcell >= grid.gx || ycell < 0 || ycell >= grid.gy) {
          return;
        }
        for (std::int32_t cand : grid.cell_ids(xcell, ycell)) {
          if (cand != i) cand_ids.push_back(cand);
        }
      };
      if (ring == 0) {
        visit_cell(home_cx, home_cy);
      } else {
        const int lo_x = home_cx - ring, hi_x = home_cx + ring;
        const int lo_y = home_cy - ring, hi_y = home_cy + ring;
        for (int xcell = lo_x; xcell <= hi_x; ++xcell) {
          visit_cell(xcell, lo_y);
          visit_cell(xcell, hi_y);
        }
        for (int ycell = lo_y + 1; ycell <= hi_y - 1; ++ycell) {
          visit_cell(lo_x, ycell);
          visit_cell(hi_x, ycell);
        }
      }

      if (!cand_ids.empty()) {
        cand_xs.resize(cand_ids.size());
        cand_ys.resize(cand_ids.size());
        cand_d2.resize(cand_ids.size());
        for (std::size_t c = 0; c < cand_ids.size(); ++c) {
          cand_xs[c] = cloud.xs[cand_ids[c]];
          cand_ys[c] = cloud.ys[cand_ids[c]];
        }
        kern.squared_distances(cx, cy, cand_xs.data(), cand_ys.data(),
                               cand_ids.size(), cand_d2.data());
        for (std::size_t c = 0; c < cand_ids.size(); ++c) {
          best.insert(cand_ids[c], cand_d2[c], less);
        }
      }

      // A point in ring r+1 is at least r * min_side away. Stop only when
      // no farther point can displace or tie the current k-th candidate.
      if (best.full()) {
        const double bound = double(ring) * min_side;
        if (best.worst_d2() < bound * bound) break;
      }
    }

    std::int32_t* out = blocks.members.data() + std::size_t(i) * m;
    out[0] = i;
    for (int j = 0; j < k; ++j) out[1 + j] = best.id[j];
  }
  return blocks;
}

SpatialGraph build_graph(const BlockSet& blocks, int n) {
  if (blocks.count() != n) {
    throw_data_error("build_graph: blocks do not cover all vertices");
  }
  const int m = blocks.m;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(std::size_t(n) * (m - 1));
  for (int s = 0; s < n; ++s) {
    for (int j = 1; j < m; ++j) {
      const std::int32_t u = blocks.members[std::size_t(s) * m + j];
      if (u < 0 || u >= n) throw_data_error("build_graph: member out of range");
      if (u == s) throw_data_error("build_graph: self-loop member");
      edges.emplace_back(std::min<std::int32_t>(s, u),
                         std::max<std::int32_t>(s, u));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  SpatialGraph g;
  g.offsets.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++g.offsets[u + 1];
    ++g.offsets[v + 1];
  }
  for (int i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.neighbors.resize(edges.size() * 2);
  std::vector<std::int32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    g.neighbors[cursor[u]++] = v;
    g.neighbors[cursor[v]++] = u;
  }
  for (int v = 0; v < n; ++v) {
    std::sort(g.neighbors.begin() + g.offsets[v],
              g.neighbors.begin() + g.offsets[v + 1]);
  }
  return g;
}

ShellIndex bfs_distances(const SpatialGraph& graph, std::int32_t source,
                         std::int32_t h_max) {
  const int n = graph.count();
  if (source < 0 || source >= n) {
    throw_data_error("bfs_distances: source out of range");
  }
  ShellIndex shell;
  shell.source = source;
  shell.distance.assign(n, kUnreachable);
  shell.distance[source] = 0;
  std::vector<std::int32_t> queue;
  queue.reserve(n);
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::int32_t v = queue[head];
    const std::int32_t dv = shell.distance[v];
    if (dv >= h_max) continue;
    for (std::int32_t u : graph.adjacent(v)) {
      if (shell.distance[u] == kUnreachable) {
        shell.distance[u] = dv + 1;
        queue.push_back(u);
      }
    }
  }
  return shell;
}

namespace {

// Reusable truncated-BFS state; stamping avoids clearing per source.
struct BfsScratch {
  std::vector<std::int32_t> queue;
  std::vector<std::int32_t> dist;
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;

  explicit BfsScratch(int n) : queue(n), dist(n), stamp(n, 0) {}

  // Visits every vertex within h_max hops of source (source included) and
  // calls visit(vertex, hop).
  template <class Visit>
  void run(const SpatialGraph& graph, std::int32_t source, std::int32_t h_max,
           Visit&& visit) {
    ++epoch;
    std::size_t head = 0, tail = 0;
    stamp[source] = epoch;
    dist[source] = 0;
    queue[tail++] = source;
    visit(source, 0);
    while (head < tail) {
      const std::int32_t v = queue[head++];
      const std::int32_t dv = dist[v];
      if (dv >= h_max) continue;
      for (std::int32_t u : graph.adjacent(v)) {
        if (stamp[u] != epoch) {
          stamp[u] = epoch;
          dist[u] = dv + 1;
          queue[tail++] = u;
          visit(u, dv + 1);
        }
      }
    }
  }
};

template <class Body>
void run_source_chunks(int n, int threads, Body&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    body(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const int lo = static_cast<int>(std::int64_t(n) * t / threads);
    const int hi = static_cast<int>(std::int64_t(n) * (t + 1) / threads);
    pool.emplace_back([&body, t, lo, hi] { body(t, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<std::uint64_t> distance_pair_counts(const SpatialGraph& graph,
                                                int h_max, int threads) {
  if (h_max < 0) throw_data_error("distance_pair_counts: h_max must be >= 0");
  const int n = graph.count();
  threads = std::max(1, std::min(threads, n));
  std::vector<std::vector<std::uint64_t>> partial(
      threads, std::vector<std::uint64_t>(h_max + 1, 0));

  run_source_chunks(n, threads, [&](int t, int lo, int hi) {
    BfsScratch scratch(n);
    auto& counts = partial[t];
    for (int s = lo; s < hi; ++s) {
      scratch.run(graph, s, h_max,
                  [&](std::int32_t, std::int32_t h) { ++counts[h]; });
    }
  });

  std::vector<std::uint64_t> total(h_max + 1, 0);
  for (const auto& counts : partial) {
    for (int h = 0; h <= h_max; ++h) total[h] += counts[h];
  }
  return total;
}

double shell_size_moment(const SpatialGraph& graph, int h, double k) {
  if (h < 0) throw_data_error("shell_size_moment: h must be >= 0");
  if (!(k > 0)) throw_data_error("shell_size_moment: k must be > 0");
  const int n = graph.count();
  BfsScratch scratch(n);
  double acc = 0.0;
  for (int s = 0; s < n; ++s) {
    std::int64_t size = 0;
    scratch.run(graph, s, h, [&](std::int32_t, std::int32_t hv) {
      if (hv == h) ++size;
    });
    acc += std::pow(static_cast<double>(size), k);
  }
  return acc / n;
}

double shell_overlap_moment(const SpatialGraph& graph, int h, int f,
                            double k) {
  if (h < 1) throw_data_error("shell_overlap_moment: h must be >= 1");
  if (f < 0) throw_data_error("shell_overlap_moment: f must be >= 0");
  if (!(k > 0)) throw_data_error("shell_overlap_moment: k must be > 0");
  const int n = graph.count();

  // Cache ball(j, h-1) for every vertex once; shells reuse them heavily.
  std::vector<std::int64_t> ball_offsets(n + 1, 0);
  std::vector<std::int32_t> ball_members;
  {
    BfsScratch scratch(n);
    std::vector<std::int32_t> tmp;
    for (int j = 0; j < n; ++j) {
      tmp.clear();
      scratch.run(graph, j, h - 1,
                  [&](std::int32_t v, std::int32_t) { tmp.push_back(v); });
      ball_offsets[j + 1] =
          ball_offsets[j] + static_cast<std::int64_t>(tmp.size());
      ball_members.insert(ball_members.end(), tmp.begin(), tmp.end());
    }
  }

  BfsScratch scratch(n);
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t mark_epoch = 0;
  std::vector<std::int32_t> shell_h;
  double acc = 0.0;

  const int reach = std::max(h, f);
  for (int i = 0; i < n; ++i) {
    ++mark_epoch;
    shell_h.clear();
    std::int64_t ball_f_size = 0;
    scratch.run(graph, i, reach, [&](std::int32_t v, std::int32_t hv) {
      if (hv <= f) {
        mark[v] = mark_epoch;
        ++ball_f_size;
      }
      if (hv == h) shell_h.push_back(v);
    });
    if (shell_h.empty()) continue;  // empty max convention: contributes 0
    std::int64_t best = 0;
    for (std::int32_t j : shell_h) {
      std::int64_t overlap = 0;
      for (std::int64_t b = ball_offsets[j]; b < ball_offsets[j + 1]; ++b) {
        if (mark[ball_members[b]] == mark_epoch) ++overlap;
      }
      best = std::max(best, ball_f_size - overlap);
    }
    acc += std::pow(static_cast<double>(best), k);
  }
  return acc / n;
}

double holder_sparsity_index(const SpatialGraph& graph, int h, int f, double k,
                             std::span<const double> beta_grid) {
  if (beta_grid.empty()) {
    throw_data_error("holder_sparsity_index: empty beta grid");
  }
  double best = std::numeric_limits<double>::infinity();
  for (double beta : beta_grid) {
    if (!(beta > 1.0)) {
      throw_data_error("holder_sparsity_index: beta grid entries must be > 1");
    }
    const double overlap = shell_overlap_moment(graph, h, f, k * beta);
    const double size = shell_size_moment(graph, h, beta / (beta - 1.0));
    const double value = std::pow(overlap, 1.0 / beta) *
                         std::pow(size, 1.0 - 1.0 / beta);
    best = std::min(best, value);
  }
  return best;
}

void write_edge_list(const SpatialGraph& graph, std::ostream& os) {
  const int n = graph.count();
  for (int u = 0; u < n; ++u) {
    for (std::int32_t v : graph.adjacent(u)) {
      if (u < v) os << u << ' ' << v << '\n';
    }
  }
}

}  // namespace ordpat
