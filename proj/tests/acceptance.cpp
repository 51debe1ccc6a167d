// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Criterion 8 is retained exactly as documented even though measurement
// shows the full kernel estimate cannot converge to the plain multinomial
// matrix (overlapping blocks are correlated under independence; the
// per-site h=0 term alone is multinomial). Its failure is expected and the
// run prints the isolating diagnostic alongside.
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ordpat/covariance.hpp"
#include "ordpat/csv_io.hpp"
#include "ordpat/experiments.hpp"
#include "ordpat/independence.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/rng.hpp"

using namespace ordpat;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s  (%s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double ks_against_chi2(std::vector<double> stats, int df) {
  std::sort(stats.begin(), stats.end());
  const double r = static_cast<double>(stats.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double cdf = 1.0 - chi2_survival(stats[i], df);
    ks = std::max({ks, std::fabs((i + 1) / r - cdf), std::fabs(i / r - cdf)});
  }
  return ks;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

constexpr std::uint64_t kSeed = 20240801;
constexpr int kThreads = 2;

}  // namespace

int main() {
  const TestOptions opts;  // library defaults throughout

  // ---- criteria 1 + 2 + 3: null distribution at R = 2000 ----
  const int null_reps = 2000;
  const auto stats500 = simulate_null_statistics(
      500, 3, null_reps, kSeed, opts, FieldDistribution::gaussian, kThreads);
  const auto stats2000 = simulate_null_statistics(
      2000, 3, null_reps, kSeed, opts, FieldDistribution::gaussian, kThreads);
  const auto stats5000 = simulate_null_statistics(
      5000, 3, null_reps, kSeed, opts, FieldDistribution::gaussian, kThreads);
  const SizeRow row500 = summarize_statistics(500, 3, 0.05, stats500);
  const SizeRow row2000 = summarize_statistics(2000, 3, 0.05, stats2000);
  const SizeRow row5000 = summarize_statistics(5000, 3, 0.05, stats5000);

  {
    const bool pass500 = row500.mean >= 4.60 && row500.mean <= 5.10 &&
                         row500.median >= 4.05 && row500.median <= 4.60 &&
                         row500.var >= 7.3 && row500.var <= 9.6;
    const bool pass5000 = row5000.mean >= 4.75 && row5000.mean <= 5.15 &&
                          row5000.var >= 8.8 && row5000.var <= 10.6 &&
                          row5000.median >= 4.10 && row5000.median <= 4.55;
    report(1, pass500 && pass5000, "Table 1 reproduction (scaled)",
           fmt("n=500: mean=%.4f var=%.4f median=%.4f; "
               "n=5000: mean=%.4f var=%.4f median=%.4f; windows "
               "mean [4.60,5.10]/[4.75,5.15], var [7.3,9.6]/[8.8,10.6], "
               "median [4.05,4.60]/[4.10,4.55]",
               row500.mean, row500.var, row500.median, row5000.mean,
               row5000.var, row5000.median));
  }

  {
    const double ks = ks_against_chi2(stats5000, 5);
    report(2, ks < 0.03, "chi-square calibration (KS at n=5000)",
           fmt("KS=%.4f vs chi2_5 over R=%d", ks, null_reps));
  }

  {
    const bool pass = row500.reject_rate >= 0.035 &&
                      row500.reject_rate <= 0.065 &&
                      row2000.reject_rate >= 0.035 &&
                      row2000.reject_rate <= 0.065;
    report(3, pass, "size control at the 5% level",
           fmt("reject(n=500)=%.4f, reject(n=2000)=%.4f", row500.reject_rate,
               row2000.reject_rate));
  }

  // ---- criterion 4: power monotonicity and level (linear SAR) ----
  {
    const std::vector<double> rho_grid{0.0, 0.2, 0.4, 0.6, 0.8};
    std::vector<double> rates;
    for (double rho : rho_grid) {
      const auto stats = simulate_sar_statistics(
          2000, 3, kDefaultKGraph, rho, Transform::identity, 1000, kSeed, opts, kThreads);
      rates.push_back(rejection_rate(stats, 5, 0.05));
    }
    int inversions = 0;
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < rates.size(); ++i) {
      if (rates[i] < rates[i - 1]) {
        ++inversions;
        worst_drop = std::max(worst_drop, rates[i - 1] - rates[i]);
      }
    }
    const auto stats5k = simulate_sar_statistics(
        5000, 3, kDefaultKGraph, 0.5, Transform::identity, 1000, kSeed, opts, kThreads);
    const double rate5k = rejection_rate(stats5k, 5, 0.05);
    const bool pass = inversions <= 1 && worst_drop <= 0.02 &&
                      rates.back() >= 0.90 && rate5k >= 0.90;
    report(4, pass, "power monotonicity and level (linear SAR)",
           fmt("rates(n=2000)=%.3f/%.3f/%.3f/%.3f/%.3f, "
               "rate(n=5000,rho=0.5)=%.3f, inversions=%d (worst %.3f)",
               rates[0], rates[1], rates[2], rates[3], rates[4], rate5k,
               inversions, worst_drop));
  }

  // ---- criterion 5: nonlinear robustness ----
  {
    const auto sin_stats = simulate_sar_statistics(
        2000, 3, kDefaultKGraph, 0.8, Transform::sine, 1000, kSeed, opts, kThreads);
    const auto log_stats = simulate_sar_statistics(
        2000, 3, kDefaultKGraph, 0.8, Transform::log_abs, 1000, kSeed, opts, kThreads);
    const double sin_rate = rejection_rate(sin_stats, 5, 0.05);
    const double log_rate = rejection_rate(log_stats, 5, 0.05);
    report(5, sin_rate >= 0.70 && log_rate >= 0.70,
           "nonlinear robustness (sin, log|.|)",
           fmt("reject(sin)=%.3f, reject(log|.|)=%.3f at rho=0.8, n=2000",
               sin_rate, log_rate));
  }

  // ---- criterion 6: bit-level monotone invariance ----
  {
    int identical = 0;
    const int cases = 100;
    for (int i = 0; i < cases; ++i) {
      const int n = 100 + 7 * i;
      PointCloud cloud = sample_points_uniform(n, derive_seed(kSeed, 600, i));
      cloud.values = sample_iid_field(n, derive_seed(kSeed, 601, i),
                                      FieldDistribution::gaussian);
      const double base = run_test(cloud, opts).statistic;
      bool same = true;
      for (int variant = 0; variant < 3 && same; ++variant) {
        PointCloud warped = cloud;
        for (double& v : warped.values) {
          v = variant == 0 ? std::exp(v)
                           : variant == 1 ? v * v * v : 5.0 * v + 2.0;
        }
        same = run_test(warped, opts).statistic == base;
      }
      identical += same;
    }
    report(6, identical == cases, "bit-level monotone invariance",
           fmt("%d/%d datasets identical under exp, x^3, 5x+2", identical,
               cases));
  }

  // ---- criterion 7: full-pipeline oracle equivalence at n <= 30 ----
  {
    int matches = 0;
    double worst = 0.0;
    const int cases = 50;
    for (int i = 0; i < cases; ++i) {
      const int n = 15 + (i % 16);
      PointCloud cloud = sample_points_uniform(n, derive_seed(kSeed, 700, i));
      cloud.values = sample_iid_field(n, derive_seed(kSeed, 701, i),
                                      FieldDistribution::gaussian);
      const double lib = run_test(cloud, opts).statistic;
      const double brute = oracle::brute_pipeline_statistic(
          cloud, 3, default_bandwidth(n), /*bartlett=*/false,
          /*null_centering=*/true);
      const double rel =
          std::fabs(lib - brute) / std::max(1e-300, std::fabs(brute));
      worst = std::max(worst, rel);
      if (rel <= 1e-9) ++matches;
    }
    report(7, matches == cases, "oracle equivalence on small instances",
           fmt("%d/%d within 1e-9 relative (worst %.2e)", matches, cases,
               worst));
  }

  // ---- criterion 8: multinomial covariance check (expected red; header) ----
  {
    PointCloud cloud = sample_points_uniform(5000, derive_seed(kSeed, 800, 0));
    cloud.values = sample_iid_field(5000, derive_seed(kSeed, 801, 0),
                                    FieldDistribution::uniform);
    const BlockSet blocks = build_blocks(cloud, 3);
    const SpatialGraph graph = build_graph(blocks, 5000);
    const SymbolizedField field = symbolize_blocks(cloud, blocks);
    CovKernel kernel;
    kernel.bandwidth = default_bandwidth(5000);
    const CovarianceEstimate est = estimate_covariance(
        graph, field.ranks, 3, kernel, Centering::null_uniform, kThreads);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double want = (i == j) ? 5.0 / 36.0 : -1.0 / 36.0;
        worst = std::max(worst, std::fabs(est.v_hat(i, j) - want));
      }
    }
    // Isolating diagnostic: the h = 0 term alone is multinomial.
    const CovarianceEstimate site = estimate_covariance(
        graph, field.ranks, 3, {CovKernel::Kind::truncated, 0.5},
        Centering::null_uniform, kThreads);
    double worst_site = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double want = (i == j) ? 5.0 / 36.0 : -1.0 / 36.0;
        worst_site = std::max(worst_site, std::fabs(site.v_hat(i, j) - want));
      }
    }
    report(8, worst < 0.02, "multinomial covariance check",
           fmt("max deviation %.4f (h=0 term alone deviates %.4f; the "
               "overlap covariance at h>=1 is real; see the header comment)",
               worst, worst_site));
  }

  // ---- criterion 9: numerics ----
  {
    double jac_worst = 0.0;
    for (int m : {3, 4}) {
      const int d = static_cast<int>(factorial(m)) - 1;
      const double u = 1.0 / (d + 1);
      const double step = 1e-6;
      const Matrix jac = jacobian_uniform(m);
      const auto alr_map = [&](const std::vector<double>& r, int i) {
        double g = 1.0;
        for (double v : r) g -= v;
        return std::log(r[i] / g);
      };
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          std::vector<double> hi(d, u), lo(d, u);
          hi[j] += step;
          lo[j] -= step;
          const double fd = (alr_map(hi, i) - alr_map(lo, i)) / (2.0 * step);
          jac_worst = std::max(jac_worst,
                               std::fabs(fd - jac(i, j)) / jac(i, j));
        }
      }
    }

    double chi_worst = 0.0;
    for (int df : {2, 5, 23, 119}) {
      for (double p : {0.01, 0.5, 0.95, 0.999}) {
        const double q = chi2_quantile(p, df);
        chi_worst = std::max(chi_worst,
                             std::fabs(chi2_survival(q, df) - (1.0 - p)));
      }
    }

    double sar_worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const int n = 120 + i * 20;
      const PointCloud pts =
          sample_points_uniform(n, derive_seed(kSeed, 900, i));
      const WeightMatrix w = build_weight_matrix(pts, 3);
      const double rho = -0.9 + 0.4 * i;
      const auto x = sar_sample(w, rho, derive_seed(kSeed, 901, i));
      Matrix a(n, n);
      for (int r = 0; r < n; ++r) {
        a(r, r) = 1.0;
        for (std::int32_t c = w.offsets[r]; c < w.offsets[r + 1]; ++c) {
          a(r, w.cols[c]) -= rho * w.inv_degree[r];
        }
      }
      SplitMix64 rng(derive_seed(kSeed, 901, i));
      std::vector<double> eps(n);
      for (double& e : eps) e = rng.next_gaussian();
      const auto dense = oracle::gauss_solve(a, eps);
      for (int r = 0; r < n; ++r) {
        sar_worst = std::max(sar_worst, std::fabs(dense[r] - x[r]));
      }
    }

    const bool pass = jac_worst < 1e-4 && chi_worst < 1e-8 && sar_worst < 1e-9;
    report(9, pass, "numerics (Jacobian FD, chi2 round trip, Neumann vs LU)",
           fmt("jacobian rel err %.2e, chi2 round trip %.2e, solver max "
               "diff %.2e",
               jac_worst, chi_worst, sar_worst));
  }

  // ---- criterion 10: thread-count determinism ----
  {
    const fs::path base = fs::temp_directory_path() / "ordpat_acceptance";
    fs::remove_all(base);
    ExperimentConfig config;
    config.n_list = {300};
    config.m_list = {3};
    config.reps = 200;
    config.seed = kSeed;
    ExperimentConfig power = config;
    power.rho_grid = {0.0, 0.6};
    power.k_graph_list = {3};
    power.reps = 100;

    config.threads = 1;
    power.threads = 1;
    run_size_experiment(config, (base / "t1").string());
    run_power_experiment(power, (base / "t1p").string());
    config.threads = 8;
    power.threads = 8;
    run_size_experiment(config, (base / "t8").string());
    run_power_experiment(power, (base / "t8p").string());

    const bool same_size = slurp(base / "t1" / "size_summary.csv") ==
                               slurp(base / "t8" / "size_summary.csv") &&
                           slurp(base / "t1" / "size_qq_n300_m3.csv") ==
                               slurp(base / "t8" / "size_qq_n300_m3.csv");
    const bool same_power = slurp(base / "t1p" / "power_curves.csv") ==
                            slurp(base / "t8p" / "power_curves.csv");
    report(10, same_size && same_power, "thread-count determinism",
           fmt("size CSVs %s, power CSVs %s", same_size ? "identical" : "DIFFER",
               same_power ? "identical" : "DIFFER"));
  }

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
