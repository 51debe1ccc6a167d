#include "ordpat/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "ordpat/errors.hpp"
#include "ordpat/patterns.hpp"

namespace ordpat {

double kernel_weight(const CovKernel& kernel, int h) {
  if (!(kernel.bandwidth > 0)) {
    throw_data_error("kernel bandwidth must be positive");
  }
  const double x = static_cast<double>(h) / kernel.bandwidth;
  switch (kernel.kind) {
    case CovKernel::Kind::bartlett:
      return (x <= 1.0) ? 1.0 - x : 0.0;
    case CovKernel::Kind::truncated:
      return (x <= 1.0) ? 1.0 : 0.0;
  }
  return 0.0;
}

int kernel_max_lag(const CovKernel& kernel) {
  if (!(kernel.bandwidth > 0)) {
    throw_data_error("kernel bandwidth must be positive");
  }
  switch (kernel.kind) {
    case CovKernel::Kind::bartlett: {
      // weight > 0 iff h < bandwidth
      const int h = static_cast<int>(std::ceil(kernel.bandwidth)) - 1;
      return std::max(0, h);
    }
    case CovKernel::Kind::truncated:
      return std::max(0, static_cast<int>(std::floor(kernel.bandwidth)));
  }
  return 0;
}

const char* kernel_name(CovKernel::Kind kind) {
  return kind == CovKernel::Kind::bartlett ? "bartlett" : "truncated";
}

const char* centering_name(Centering c) {
  return c == Centering::null_uniform ? "null" : "empirical";
}

double eigen_condition_cap(double bandwidth) {
  return 3.0 * std::max(1.0, bandwidth);
}

namespace {

struct BfsScratch {
  std::vector<std::int32_t> queue;
  std::vector<std::int32_t> dist;
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;

  explicit BfsScratch(int n) : queue(n), dist(n), stamp(n, 0) {}
};

}  // namespace

std::vector<std::uint64_t> shell_cooccurrence_counts(
    const SpatialGraph& graph, std::span<const std::uint32_t> ranks,
    int m_fact, int h_max, int threads) {
  const int n = graph.count();
  if (static_cast<int>(ranks.size()) != n) {
    throw_data_error("shell_cooccurrence_counts: ranks/graph size mismatch");
  }
  if (h_max < 0) throw_data_error("shell_cooccurrence_counts: h_max < 0");
  const std::size_t step = std::size_t(m_fact) * m_fact;
  const std::size_t total_size = step * std::size_t(h_max + 1);
  threads = std::max(1, std::min(threads, n));

  std::vector<std::vector<std::uint64_t>> partial(threads);

  auto worker = [&](int t, int lo, int hi) {
    auto& counts = partial[t];
    counts.assign(total_size, 0);
    BfsScratch scratch(n);
    for (int s = lo; s < hi; ++s) {
      const std::size_t source_row = std::size_t(ranks[s]) * m_fact;
      ++scratch.epoch;
      std::size_t head = 0, tail = 0;
      scratch.stamp[s] = scratch.epoch;
      scratch.dist[s] = 0;
      scratch.queue[tail++] = s;
      ++counts[source_row + ranks[s]];  // h = 0 self pair
      while (head < tail) {
        const std::int32_t v = scratch.queue[head++];
        const std::int32_t dv = scratch.dist[v];
        if (dv >= h_max) continue;
        std::uint64_t* level =
            counts.data() + step * std::size_t(dv + 1) + source_row;
        for (std::int32_t u : graph.adjacent(v)) {
          if (scratch.stamp[u] != scratch.epoch) {
            scratch.stamp[u] = scratch.epoch;
            scratch.dist[u] = dv + 1;
            scratch.queue[tail++] = u;
            ++level[ranks[u]];
          }
        }
      }
    }
  };

  if (threads == 1) {
    worker(0, 0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      const int lo = static_cast<int>(std::int64_t(n) * t / threads);
      const int hi = static_cast<int>(std::int64_t(n) * (t + 1) / threads);
      pool.emplace_back(worker, t, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<std::uint64_t> total(total_size, 0);
  for (const auto& counts : partial) {
    for (std::size_t i = 0; i < total_size; ++i) total[i] += counts[i];
  }
  return total;
}

Matrix assemble_shell_matrix(std::span<const std::uint64_t> counts_h,
                             int m_fact, std::span<const double> centering) {
  const int d = m_fact - 1;
  if (static_cast<int>(counts_h.size()) != m_fact * m_fact) {
    throw_data_error("assemble_shell_matrix: counts slice size mismatch");
  }
  if (static_cast<int>(centering.size()) != d) {
    throw_data_error("assemble_shell_matrix: centering length mismatch");
  }

  // Omega(h) = T - r c^T - c r^T + N c c^T over the first m!-1 coordinates,
  // where T is the co-occurrence table, r its row sums, N the pair total.
  // Row and column sums coincide because graph distance is symmetric.
  std::vector<double> row_sum(m_fact, 0.0);
  double pair_total = 0.0;
  for (int a = 0; a < m_fact; ++a) {
    double s = 0.0;
    for (int b = 0; b < m_fact; ++b) {
      s += static_cast<double>(counts_h[std::size_t(a) * m_fact + b]);
    }
    row_sum[a] = s;
    pair_total += s;
  }

  Matrix omega(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double t = static_cast<double>(counts_h[std::size_t(i) * m_fact + j]);
      omega(i, j) = t - row_sum[i] * centering[j] - centering[i] * row_sum[j] +
                    pair_total * centering[i] * centering[j];
    }
  }
  return omega;
}

Matrix shell_contribution(const Matrix& indicators,
                          std::span<const double> centering,
                          const SpatialGraph& graph, int h) {
  const int n = graph.count();
  if (indicators.rows != n) {
    throw_data_error("shell_contribution: indicator rows != graph vertices");
  }
  const int d = indicators.cols;
  if (static_cast<int>(centering.size()) != d) {
    throw_data_error("shell_contribution: centering length mismatch");
  }
  if (h < 0) throw_data_error("shell_contribution: h < 0");

  Matrix omega(d, d);
  std::vector<double> cs(d), ct(d);
  for (int s = 0; s < n; ++s) {
    const ShellIndex shell = bfs_distances(graph, s, h);
    for (int j = 0; j < d; ++j) cs[j] = indicators(s, j) - centering[j];
    for (int t = 0; t < n; ++t) {
      if (shell.distance[t] != h) continue;
      for (int j = 0; j < d; ++j) ct[j] = indicators(t, j) - centering[j];
      for (int i = 0; i < d; ++i) {
        const double csi = cs[i];
        if (csi == 0.0) continue;
        for (int j = 0; j < d; ++j) omega(i, j) += csi * ct[j];
      }
    }
  }
  return omega;
}

CovarianceEstimate estimate_covariance(const SpatialGraph& graph,
                                       std::span<const std::uint32_t> ranks,
                                       int m, const CovKernel& kernel,
                                       Centering centering, int threads) {
  const int n = graph.count();
  if (n == 0) throw_data_error("estimate_covariance: empty graph");
  const int m_fact = static_cast<int>(factorial(m));
  const int d = m_fact - 1;

  std::vector<double> center(d);
  if (centering == Centering::null_uniform) {
    std::fill(center.begin(), center.end(), 1.0 / m_fact);
  } else {
    std::vector<std::uint64_t> counts(m_fact, 0);
    for (std::uint32_t r : ranks) ++counts[r];
    for (int j = 0; j < d; ++j) {
      center[j] = static_cast<double>(counts[j]) / static_cast<double>(n);
    }
  }

  const int h_max = kernel_max_lag(kernel);
  const auto counts =
      shell_cooccurrence_counts(graph, ranks, m_fact, h_max, threads);
  const std::size_t step = std::size_t(m_fact) * m_fact;

  Matrix v(d, d);
  for (int h = 0; h <= h_max; ++h) {
    const double w = kernel_weight(kernel, h);
    if (w <= 0.0) continue;
    const Matrix omega = assemble_shell_matrix(
        {counts.data() + step * std::size_t(h), step}, m_fact, center);
    for (std::size_t i = 0; i < v.data.size(); ++i) {
      v.data[i] += w * omega.data[i];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& x : v.data) x *= inv_n;

  for (double x : v.data) {
    if (!std::isfinite(x)) {
      throw_numerical_error("estimate_covariance: non-finite entry");
    }
  }
  const double tr = trace(v);
  if (!(tr > 0.0)) {
    throw_numerical_error(
        "estimate_covariance: degenerate covariance (trace <= 0); the "
        "indicator field carries no variation");
  }

  CovarianceEstimate est;
  est.bandwidth = kernel.bandwidth;
  est.h_max = h_max;

  // Positive-definiteness repair plus finite-sample stabilization: the
  // shell sum is not guaranteed PSD, and its smallest eigenvalues are noisy
  // enough at moderate n to blow up the Wald quadratic form. The spectrum
  // is floored at lambda_max / (3 * bandwidth), i.e. the condition number
  // is capped at 4b; the cap widens with the bandwidth (hence with n under
  // the default rule) and stops binding once the noise is gone. The
  // unrepaired matrix is kept bit-for-bit when no eigenvalue is below the
  // floor.
  Matrix vectors;
  std::vector<double> values;
  symmetric_eigen(v, vectors, values);
  est.eigen_floor = values.back() / eigen_condition_cap(kernel.bandwidth);
  if (values.front() < est.eigen_floor) {
    est.regularized = true;
    for (double& lambda : values) lambda = std::max(lambda, est.eigen_floor);
    Matrix repaired(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
          s += vectors(i, k) * values[k] * vectors(j, k);
        }
        repaired(i, j) = s;
        repaired(j, i) = s;
      }
    }
    est.v_hat = std::move(repaired);
  } else {
    est.v_hat = std::move(v);
  }
  return est;
}

void dump_shell_matrices(const SpatialGraph& graph,
                         std::span<const std::uint32_t> ranks, int m,
                         int h_max, std::span<const double> centering,
                         const std::string& path_prefix) {
  const int m_fact = static_cast<int>(factorial(m));
  const auto counts =
      shell_cooccurrence_counts(graph, ranks, m_fact, h_max, 1);
  const std::size_t step = std::size_t(m_fact) * m_fact;
  for (int h = 0; h <= h_max; ++h) {
    const Matrix omega = assemble_shell_matrix(
        {counts.data() + step * std::size_t(h), step}, m_fact, centering);
    std::ofstream os(path_prefix + "omega_h" + std::to_string(h) + ".csv");
    if (!os) throw_data_error("dump_shell_matrices: cannot open output file");
    char buf[40];
    for (int i = 0; i < omega.rows; ++i) {
      for (int j = 0; j < omega.cols; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", omega(i, j));
        os << buf << (j + 1 < omega.cols ? "," : "");
      }
      os << '\n';
    }
  }
}

}  // namespace ordpat
