#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordpat/dgp.hpp"
#include "ordpat/independence.hpp"

namespace ordpat {

struct ExperimentConfig {
  std::vector<int> n_list{500, 2000, 5000};
  std::vector<int> m_list{3};
  std::vector<double> rho_grid{0.0, 0.1, 0.2, 0.3, 0.4,
                               0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<int> k_graph_list{2, 3};
  Transform transform = Transform::identity;
  FieldDistribution distribution = FieldDistribution::gaussian;
  int reps = 10000;
  double level = 0.05;
  double bandwidth = 0.0;  // <= 0 selects the default rule
  CovKernel::Kind kernel = CovKernel::Kind::truncated;
  Centering centering = Centering::null_uniform;
  SmoothingMode smoothing = SmoothingMode::auto_half;
  std::uint64_t seed = 1;
  int threads = 1;
};

TestOptions test_options_from(const ExperimentConfig& config, int m);

// One full null replicate (fresh uniform cloud + i.i.d. field); returns the
// statistic. `rep` feeds the derived seed streams.
double null_replicate_statistic(int n, int m, std::uint64_t seed,
                                std::uint64_t rep, const TestOptions& options,
                                FieldDistribution distribution);

// R statistics under the null, replicate-parallel, deterministic order.
std::vector<double> simulate_null_statistics(int n, int m, int reps,
                                             std::uint64_t seed,
                                             const TestOptions& options,
                                             FieldDistribution distribution,
                                             int threads);

// One SAR replicate under the given transform; returns the statistic.
double sar_replicate_statistic(int n, int m, int k_graph, double rho,
                               Transform transform, std::uint64_t seed,
                               std::uint64_t rep, const TestOptions& options);

std::vector<double> simulate_sar_statistics(int n, int m, int k_graph,
                                            double rho, Transform transform,
                                            int reps, std::uint64_t seed,
                                            const TestOptions& options,
                                            int threads);

inline double rejection_rate(const std::vector<double>& stats, int df,
                             double level) {
  const double cutoff = chi2_quantile(1.0 - level, df);
  std::size_t rejected = 0;
  for (double s : stats) {
    if (s >= cutoff) ++rejected;
  }
  return static_cast<double>(rejected) / static_cast<double>(stats.size());
}

struct SizeRow {
  int n = 0;
  int m = 0;
  int reps = 0;
  double mean = 0;
  double var = 0;
  double median = 0;
  double reject_rate = 0;
  bool var_degenerate = false;  // reps == 1: var reported as 0
};

SizeRow summarize_statistics(int n, int m, double level,
                             const std::vector<double>& stats);

// Size experiment per (n, m): summary CSV, QQ CSV per pair, one QQ overlay
// SVG per m. Returns the summary rows.
std::vector<SizeRow> run_size_experiment(const ExperimentConfig& config,
                                         const std::string& out_dir);

struct PowerRow {
  Transform model = Transform::identity;
  int m = 0;
  int n = 0;
  int k_graph = 0;
  double rho = 0;
  double reject_rate = 0;
  int reps = 0;
};

// Power curves over (m, n, k_graph, rho): one CSV, one SVG per m.
std::vector<PowerRow> run_power_experiment(const ExperimentConfig& config,
                                           const std::string& out_dir);

struct DiagnosticsOptions {
  int m = 3;
  int h_max = 0;  // <= 0: max(4, default bandwidth)
  std::vector<int> h_list{1, 2, 3, 4};
  std::vector<double> k_list{1.0, 2.0};
};

// Graph/pattern diagnostics as JSON: U(h) table, shell-size summaries,
// the sparsity statistics, tie and duplicate counts.
std::string run_diagnostics(const PointCloud& cloud,
                            const DiagnosticsOptions& options);

// Writers shared by the CLI and the tests.
void write_size_summary_csv(const std::string& path,
                            const std::vector<SizeRow>& rows);
void write_power_csv(const std::string& path,
                     const std::vector<PowerRow>& rows);

}  // namespace ordpat
