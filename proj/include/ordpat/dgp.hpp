#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ordpat/geometry.hpp"

namespace ordpat {

enum class Transform { identity, sine, log_abs };
enum class FieldDistribution { gaussian, uniform };

const char* transform_name(Transform t);

// Row-stochastic weights over the symmetrized k-NN edge set, CSR layout;
// every nonzero in row i equals 1/deg(i).
struct WeightMatrix {
  int k_graph = 0;
  std::vector<std::int32_t> offsets;  // n+1
  std::vector<std::int32_t> cols;     // sorted within each row
  std::vector<double> inv_degree;     // per row

  int count() const { return static_cast<int>(offsets.size()) - 1; }
};

// n i.i.d. uniform points on the unit square (values zero-filled).
PointCloud sample_points_uniform(int n, std::uint64_t seed);

// Default neighbour count for SAR weight matrices; independent of the
// pattern embedding dimension m.
inline constexpr int kDefaultKGraph = 2;

WeightMatrix build_weight_matrix(const PointCloud& points, int k_graph);

// y = W x
void weight_matvec(const WeightMatrix& w, std::span<const double> x,
                   std::span<double> y);

// Solves (I - rho W) x = eps with i.i.d. N(0, noise_sd^2) innovations by
// Neumann fixed-point iteration x <- eps + rho W x; the contraction factor
// is |rho| since ||W||_inf = 1. Stops when the successive-iterate max-norm
// change drops below 1e-12.
std::vector<double> sar_sample(const WeightMatrix& w, double rho,
                               std::uint64_t seed, double noise_sd = 1.0);

void apply_transform(std::span<double> values, Transform transform);

std::vector<double> sample_iid_field(int n, std::uint64_t seed,
                                     FieldDistribution distribution);

}  // namespace ordpat
