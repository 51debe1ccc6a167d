#include "ordpat/dgp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ordpat/errors.hpp"
#include "ordpat/kernels.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {

const char* transform_name(Transform t) {
  switch (t) {
    case Transform::identity:
      return "identity";
    case Transform::sine:
      return "sin";
    case Transform::log_abs:
      return "logabs";
  }
  return "?";
}

PointCloud sample_points_uniform(int n, std::uint64_t seed) {
  if (n < 1) throw_data_error("sample_points_uniform: n must be >= 1");
  PointCloud cloud;
  cloud.xs.resize(n);
  cloud.ys.resize(n);
  cloud.values.assign(n, 0.0);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    cloud.xs[i] = rng.next_double();
    cloud.ys[i] = rng.next_double();
  }
  return cloud;
}

WeightMatrix build_weight_matrix(const PointCloud& points, int k_graph) {
  const int n = static_cast<int>(points.size());
  if (k_graph < 1) throw_data_error("build_weight_matrix: k_graph must be >= 1");
  if (n <= k_graph) {
    throw_data_error("build_weight_matrix: need n > k_graph");
  }
  const BlockSet blocks = build_blocks(points, k_graph + 1);
  const SpatialGraph graph = build_graph(blocks, n);

  WeightMatrix w;
  w.k_graph = k_graph;
  w.offsets = graph.offsets;
  w.cols = graph.neighbors;
  w.inv_degree.resize(n);
  for (int i = 0; i < n; ++i) {
    const int deg = graph.degree(i);
    if (deg == 0) {
      // Unreachable after symmetrized kNN with k >= 1.
      throw_numerical_error("build_weight_matrix: isolated vertex");
    }
    w.inv_degree[i] = 1.0 / static_cast<double>(deg);
  }
  return w;
}

void weight_matvec(const WeightMatrix& w, std::span<const double> x,
                   std::span<double> y) {
  const int n = w.count();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::int32_t c = w.offsets[i]; c < w.offsets[i + 1]; ++c) {
      s += x[w.cols[c]];
    }
    y[i] = s * w.inv_degree[i];
  }
}

std::vector<double> sar_sample(const WeightMatrix& w, double rho,
                               std::uint64_t seed, double noise_sd) {
  if (!(std::fabs(rho) < 1.0)) {
    throw_data_error("sar_sample: |rho| must be below 1");
  }
  const int n = w.count();
  std::vector<double> eps(n);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) eps[i] = noise_sd * rng.next_gaussian();

  const KernelTable& kern = active_kernels();
  std::vector<double> x = eps;
  std::vector<double> wx(n), next(n);
  const double tol = 1e-12;
  for (int iter = 0; iter < 10000; ++iter) {
    weight_matvec(w, x, wx);
    kern.scale_add(n, rho, wx.data(), eps.data(), next.data());
    const double change = kern.max_abs_diff(next.data(), x.data(), n);
    x.swap(next);
    if (change < tol) break;
    if (iter == 9999) {
      throw_numerical_error("sar_sample: Neumann iteration did not converge");
    }
  }
  return x;
}

void apply_transform(std::span<double> values, Transform transform) {
  switch (transform) {
    case Transform::identity:
      return;
    case Transform::sine:
      for (double& v : values) v = std::sin(v);
      return;
    case Transform::log_abs: {
      bool warned = false;
      for (double& v : values) {
        double a = std::fabs(v);
        if (a == 0.0) {
          // Probability-zero event for continuous noise; substitute the
          // smallest positive normal so the log stays finite.
          a = std::numeric_limits<double>::min();
          if (!warned) {
            std::fputs("warning: log|0| encountered; substituting the "
                       "smallest positive normal\n",
                       stderr);
            warned = true;
          }
        }
        v = std::log(a);
      }
      return;
    }
  }
}

std::vector<double> sample_iid_field(int n, std::uint64_t seed,
                                     FieldDistribution distribution) {
  if (n < 1) throw_data_error("sample_iid_field: n must be >= 1");
  std::vector<double> values(n);
  SplitMix64 rng(seed);
  if (distribution == FieldDistribution::gaussian) {
    for (int i = 0; i < n; ++i) values[i] = rng.next_gaussian();
  } else {
    for (int i = 0; i < n; ++i) values[i] = rng.next_double();
  }
  return values;
}

}  // namespace ordpat
