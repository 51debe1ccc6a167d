#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordpat/geometry.hpp"
#include "ordpat/linalg.hpp"

namespace ordpat {

// Compactly supported kernel over graph-distance shells. The truncated
// kernel is the default: the genuine cross-covariance of overlapping
// blocks lives in the first couple of shells and must enter at full
// weight for the chi-square calibration to hold; the Bartlett taper
// remains available.
struct CovKernel {
  enum class Kind { bartlett, truncated };
  Kind kind = Kind::truncated;
  double bandwidth = 1.0;
};

// omega(h / bandwidth); both kernels give 1 at h = 0.
double kernel_weight(const CovKernel& kernel, int h);
// Largest h with a strictly positive weight.
int kernel_max_lag(const CovKernel& kernel);

const char* kernel_name(CovKernel::Kind kind);

// Condition-number cap applied to the repaired estimate: eigenvalues are
// floored at lambda_max / cap with cap = 3 * bandwidth. The cap widens with
// the bandwidth (hence with n under the default rule), so the
// stabilization stops binding asymptotically.
double eigen_condition_cap(double bandwidth);

enum class Centering { empirical_mean, null_uniform };

const char* centering_name(Centering c);

struct CovarianceEstimate {
  Matrix v_hat;         // (m!-1) x (m!-1), symmetric positive definite
  double bandwidth = 0;
  int h_max = 0;        // deepest shell with nonzero weight
  bool regularized = false;
  double eigen_floor = 0;
};

// Ordered-pair pattern co-occurrence per shell:
// counts[(h*m! + a)*m! + b] = #{(s,t) : d(s,t)=h, rank(s)=a, rank(t)=b},
// h = 0..h_max. Thread partials merge exactly (integer counts).
std::vector<std::uint64_t> shell_cooccurrence_counts(
    const SpatialGraph& graph, std::span<const std::uint32_t> ranks,
    int m_fact, int h_max, int threads = 1);

// Shell matrix from one h-slice of the co-occurrence counts.
Matrix assemble_shell_matrix(std::span<const std::uint64_t> counts_h,
                             int m_fact, std::span<const double> centering);

// Reference form of the shell sum: the double sum over ordered pairs at
// graph distance exactly h of (row_s - c)(row_t - c)^T for an arbitrary
// indicator matrix. Quadratic work; used by tests and debug dumps.
Matrix shell_contribution(const Matrix& indicators,
                          std::span<const double> centering,
                          const SpatialGraph& graph, int h);

// V_hat = (1/n) sum_h omega(h/b) Omega_hat(h) with the requested centering
// (empirical pattern frequencies or the uniform 1/m! vector), repaired to
// positive definite by an eigenvalue floor when needed.
CovarianceEstimate estimate_covariance(const SpatialGraph& graph,
                                       std::span<const std::uint32_t> ranks,
                                       int m, const CovKernel& kernel,
                                       Centering centering, int threads = 1);

// Debug dump of the per-shell matrices as CSV, one file per h
// (<prefix>omega_h<h>.csv).
void dump_shell_matrices(const SpatialGraph& graph,
                         std::span<const std::uint32_t> ranks, int m,
                         int h_max, std::span<const double> centering,
                         const std::string& path_prefix);

}  // namespace ordpat
