#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordpat/covariance.hpp"
#include "ordpat/geometry.hpp"
#include "ordpat/linalg.hpp"
#include "ordpat/patterns.hpp"

namespace ordpat {

enum class SmoothingMode { auto_half, off };

// Additive log-ratio of the pattern frequencies against the reference
// pattern (lexicographically last word). Under mode auto_half, 0.5 is added
// to every count only when some count is zero; mode off errors out instead,
// naming the missing pattern.
struct AlrResult {
  std::vector<double> coords;  // length m!-1
  int reference = 0;           // pattern index used as denominator
  bool smoothed = false;
};

AlrResult alr(const PatternCounts& counts, SmoothingMode mode,
              double amount = 0.5);

// Derivative of the ALR map at the uniform composition:
// m! * (I + ones*ones^T), dimension (m!-1).
Matrix jacobian_uniform(int m);

// n * a^T (J V J^T)^{-1} a via Cholesky; never forms an inverse.
double wald_statistic(std::span<const double> alr_coords,
                      const CovarianceEstimate& cov, std::uint64_t n, int m);

// Upper tail P(chi2_df > x) through the regularized incomplete gamma
// function; absolute error well under 1e-10.
double chi2_survival(double x, int df);
// Inverse of 1 - survival; chi2_survival(chi2_quantile(1-a, df), df) = a
// to 1e-8 or better.
double chi2_quantile(double p, int df);
double chi2_pdf(double x, int df);

// Default shell bandwidth: max(1, floor(n^(1/4))), exact integer root.
int default_bandwidth(std::uint64_t n);

struct TestOptions {
  int m = 3;
  double bandwidth = 0.0;  // <= 0 selects the default rule
  CovKernel::Kind kernel = CovKernel::Kind::truncated;
  double level = 0.05;
  Centering centering = Centering::null_uniform;
  SmoothingMode smoothing = SmoothingMode::auto_half;
  int threads = 1;
  int m_cap = 6;  // keeps m! manageable; raise deliberately if needed
};

struct TestReport {
  std::uint64_t n = 0;
  int m = 0;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double level = 0.05;
  bool reject = false;
  double bandwidth = 0.0;
  CovKernel::Kind kernel = CovKernel::Kind::truncated;
  Centering centering = Centering::null_uniform;
  std::vector<int> reference_pattern;  // permutation word of the reference
  std::vector<double> frequencies;     // length m!, raw p-hat
  std::uint64_t ties = 0;
  bool regularized = false;
  bool smoothed = false;
};

// Full pipeline: blocks -> graph -> patterns -> covariance -> ALR -> Wald ->
// decision. Deterministic for fixed input and options.
TestReport run_test(const PointCloud& cloud, const TestOptions& options);

// JSON with exactly the documented keys:
// n, m, statistic, df, p_value, level, reject, bandwidth, kernel, centering,
// reference_pattern, frequencies, ties, regularized.
std::string report_to_json(const TestReport& report);

}  // namespace ordpat
