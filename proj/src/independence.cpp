#include "ordpat/independence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ordpat/errors.hpp"

#include "json.hpp"

namespace ordpat {

AlrResult alr(const PatternCounts& counts, SmoothingMode mode, double amount) {
  const int m_fact = static_cast<int>(counts.counts.size());
  if (m_fact < 2 || counts.total == 0) {
    throw_data_error("alr: need counts from at least one block");
  }
  const int d = m_fact - 1;

  bool any_zero = false;
  for (std::uint64_t c : counts.counts) {
    if (c == 0) {
      any_zero = true;
      break;
    }
  }
  double add = 0.0;
  if (any_zero) {
    if (mode == SmoothingMode::off) {
      for (int j = 0; j < m_fact; ++j) {
        if (counts.counts[j] == 0) {
          const auto word = rank_to_word(static_cast<std::uint32_t>(j),
                                         counts.m);
          std::ostringstream oss;
          oss << "alr: pattern " << j << " (word";
          for (int w : word) oss << ' ' << w;
          oss << ") has zero frequency and smoothing is off";
          throw_numerical_error(oss.str());
        }
      }
    }
    add = amount;
  }

  AlrResult result;
  result.reference = d;  // lexicographically last pattern
  result.smoothed = any_zero && add > 0.0;
  result.coords.resize(d);
  const double denom = static_cast<double>(counts.counts[d]) + add;
  for (int j = 0; j < d; ++j) {
    result.coords[j] =
        std::log((static_cast<double>(counts.counts[j]) + add) / denom);
  }
  return result;
}

Matrix jacobian_uniform(int m) {
  const int d = static_cast<int>(factorial(m)) - 1;
  const double mf = static_cast<double>(d + 1);
  Matrix j(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      j(r, c) = (r == c) ? mf * 2.0 : mf;
    }
  }
  return j;
}

double wald_statistic(std::span<const double> alr_coords,
                      const CovarianceEstimate& cov, std::uint64_t n, int m) {
  const int d = static_cast<int>(factorial(m)) - 1;
  if (static_cast<int>(alr_coords.size()) != d || cov.v_hat.rows != d) {
    throw_data_error("wald_statistic: dimension mismatch");
  }
  const double mf = static_cast<double>(d + 1);

  // J V J^T with J = m!(I + ones ones^T):
  // J V J = m!^2 (V + ones r^T + r ones^T + sigma ones ones^T), r = V ones.
  std::vector<double> r(d, 0.0);
  double sigma = 0.0;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += cov.v_hat(i, j);
    r[i] = s;
    sigma += s;
  }
  Matrix mjvj(d, d);
  const double mf2 = mf * mf;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      mjvj(i, j) = mf2 * (cov.v_hat(i, j) + r[i] + r[j] + sigma);
    }
  }

  if (!cholesky_factor(mjvj)) {
    throw_numerical_error(
        "wald_statistic: singular covariance after regularization");
  }
  const std::vector<double> z = cholesky_solve(mjvj, alr_coords);
  double quad = 0.0;
  for (int i = 0; i < d; ++i) quad += alr_coords[i] * z[i];
  // Clamp the tiny negative roundoff that can appear when a == 0.
  return std::max(0.0, static_cast<double>(n) * quad);
}

namespace {

// Regularized lower incomplete gamma P(a,x) by series, x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction,
// x >= a+1.
double gamma_q_contfrac(double a, double x) {
  const double fpmin = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi2_survival(double x, int df) {
  if (df < 1) throw_data_error("chi2_survival: df must be positive");
  if (!(x >= 0.0)) throw_data_error("chi2_survival: x must be >= 0");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * df;
  const double xs = 0.5 * x;
  if (xs < a + 1.0) return 1.0 - gamma_p_series(a, xs);
  return gamma_q_contfrac(a, xs);
}

double chi2_pdf(double x, int df) {
  if (df < 1) throw_data_error("chi2_pdf: df must be positive");
  if (x < 0.0) return 0.0;
  const double a = 0.5 * df;
  if (x == 0.0) return df == 2 ? 0.5 : (df == 1 ? std::numeric_limits<double>::infinity() : 0.0);
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - std::lgamma(a) -
                  a * std::numbers::ln2);
}

double chi2_quantile(double p, int df) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw_data_error("chi2_quantile: p must lie in (0,1)");
  }
  const double target = 1.0 - p;  // survival value to hit

  // Bracket the root of survival(x) = target.
  double lo = 0.0;
  double hi = df + 10.0 * std::sqrt(2.0 * df) + 10.0;
  while (chi2_survival(hi, df) > target) hi *= 2.0;

  // Bisection to a rough root, then Newton polish on the survival function.
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_survival(mid, df) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 6; ++i) {
    const double f = chi2_survival(x, df) - target;
    const double dens = chi2_pdf(x, df);
    if (dens <= 0.0) break;
    double step = f / dens;  // survival' = -pdf, so x_next = x + f/pdf
    const double next = x + step;
    if (next <= lo || next >= hi) break;
    x = next;
    if (std::fabs(step) < 1e-13 * (1.0 + x)) break;
  }
  return x;
}

int default_bandwidth(std::uint64_t n) {
  int k = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.25)));
  k = std::max(1, k);
  auto fourth = [](std::uint64_t v) { return v * v * v * v; };
  while (fourth(static_cast<std::uint64_t>(k) + 1) <= n) ++k;
  while (k > 1 && fourth(static_cast<std::uint64_t>(k)) > n) --k;
  return k;
}

TestReport run_test(const PointCloud& cloud, const TestOptions& options) {
  if (options.m < 2) throw_data_error("run_test: m must be at least 2");
  if (options.m > options.m_cap) {
    throw_data_error("run_test: m exceeds the configured cap of " +
                     std::to_string(options.m_cap));
  }
  if (!(options.level > 0.0 && options.level < 1.0)) {
    throw_data_error("run_test: level must lie in (0,1)");
  }
  validate_cloud(cloud, options.m);

  const std::uint64_t n = cloud.size();
  const BlockSet blocks = build_blocks(cloud, options.m);
  const SpatialGraph graph = build_graph(blocks, static_cast<int>(n));
  const SymbolizedField field = symbolize_blocks(cloud, blocks);
  const PatternCounts counts = tally_ranks(field.ranks, options.m);

  CovKernel kernel;
  kernel.kind = options.kernel;
  kernel.bandwidth = options.bandwidth > 0.0
                         ? options.bandwidth
                         : static_cast<double>(default_bandwidth(n));

  const CovarianceEstimate cov = estimate_covariance(
      graph, field.ranks, options.m, kernel, options.centering,
      options.threads);
  const AlrResult transformed = alr(counts, options.smoothing);
  const double statistic =
      wald_statistic(transformed.coords, cov, n, options.m);
  const int df = static_cast<int>(factorial(options.m)) - 1;
  const double p_value = chi2_survival(statistic, df);

  TestReport report;
  report.n = n;
  report.m = options.m;
  report.statistic = statistic;
  report.df = df;
  report.p_value = p_value;
  report.level = options.level;
  report.reject = (p_value <= options.level);
  report.bandwidth = kernel.bandwidth;
  report.kernel = options.kernel;
  report.centering = options.centering;
  report.reference_pattern =
      rank_to_word(static_cast<std::uint32_t>(df), options.m);
  report.frequencies.resize(df + 1);
  for (int j = 0; j <= df; ++j) {
    report.frequencies[j] = counts.frequency(static_cast<std::uint32_t>(j));
  }
  report.ties = field.tied_blocks;
  report.regularized = cov.regularized;
  report.smoothed = transformed.smoothed;
  return report;
}

std::string report_to_json(const TestReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["m"] = report.m;
  j["statistic"] = report.statistic;
  j["df"] = report.df;
  j["p_value"] = report.p_value;
  j["level"] = report.level;
  j["reject"] = report.reject;
  j["bandwidth"] = report.bandwidth;
  j["kernel"] = kernel_name(report.kernel);
  j["centering"] = centering_name(report.centering);
  j["reference_pattern"] = report.reference_pattern;
  j["frequencies"] = report.frequencies;
  j["ties"] = report.ties;
  j["regularized"] = report.regularized;
  return j.dump(2);
}

}  // namespace ordpat
