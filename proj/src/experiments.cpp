#include "ordpat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "ordpat/csv_io.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/rng.hpp"
#include "ordpat/svg.hpp"

#include "json.hpp"

namespace ordpat {

namespace {

// Distinct derived-seed streams per purpose and configuration.
enum StreamTag : std::uint64_t {
  kStreamPoints = 0x706f696e74,
  kStreamField = 0x6669656c64,
  kStreamNoise = 0x6e6f697365,
};

std::uint64_t config_tag(std::uint64_t purpose, std::uint64_t n,
                         std::uint64_t m, std::uint64_t k_graph,
                         std::uint64_t rho_milli, std::uint64_t transform) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto absorb = [&h](std::uint64_t v) {
    h = (h ^ v) * 0x100000001b3ull;
  };
  absorb(purpose);
  absorb(n);
  absorb(m);
  absorb(k_graph);
  absorb(rho_milli);
  absorb(transform);
  return h;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw_data_error("cannot create output directory '" + dir + "'");
}

}  // namespace

TestOptions test_options_from(const ExperimentConfig& config, int m) {
  TestOptions opts;
  opts.m = m;
  opts.bandwidth = config.bandwidth;
  opts.kernel = config.kernel;
  opts.level = config.level;
  opts.centering = config.centering;
  opts.smoothing = config.smoothing;
  opts.threads = 1;  // replicate-level parallelism only
  return opts;
}

double null_replicate_statistic(int n, int m, std::uint64_t seed,
                                std::uint64_t rep, const TestOptions& options,
                                FieldDistribution distribution) {
  const std::uint64_t tag = config_tag(0x73697a65, n, m, 0, 0, 0);
  PointCloud cloud = sample_points_uniform(
      n, derive_seed(seed, tag ^ kStreamPoints, rep));
  cloud.values =
      sample_iid_field(n, derive_seed(seed, tag ^ kStreamField, rep),
                       distribution);
  return run_test(cloud, options).statistic;
}

std::vector<double> simulate_null_statistics(int n, int m, int reps,
                                             std::uint64_t seed,
                                             const TestOptions& options,
                                             FieldDistribution distribution,
                                             int threads) {
  std::vector<double> stats(reps);
  parallel_replicates(reps, threads, [&](int rep) {
    stats[rep] = null_replicate_statistic(
        n, m, seed, static_cast<std::uint64_t>(rep), options, distribution);
  });
  return stats;
}

double sar_replicate_statistic(int n, int m, int k_graph, double rho,
                               Transform transform, std::uint64_t seed,
                               std::uint64_t rep, const TestOptions& options) {
  const auto rho_milli =
      static_cast<std::uint64_t>(std::llround(rho * 1000.0));
  const std::uint64_t tag =
      config_tag(0x706f776572, n, m, k_graph, rho_milli,
                 static_cast<std::uint64_t>(transform));
  PointCloud cloud = sample_points_uniform(
      n, derive_seed(seed, tag ^ kStreamPoints, rep));
  const WeightMatrix w = build_weight_matrix(cloud, k_graph);
  cloud.values =
      sar_sample(w, rho, derive_seed(seed, tag ^ kStreamNoise, rep));
  apply_transform(cloud.values, transform);
  return run_test(cloud, options).statistic;
}

std::vector<double> simulate_sar_statistics(int n, int m, int k_graph,
                                            double rho, Transform transform,
                                            int reps, std::uint64_t seed,
                                            const TestOptions& options,
                                            int threads) {
  std::vector<double> stats(reps);
  parallel_replicates(reps, threads, [&](int rep) {
    stats[rep] = sar_replicate_statistic(n, m, k_graph, rho, transform, seed,
                                         static_cast<std::uint64_t>(rep),
                                         options);
  });
  return stats;
}

SizeRow summarize_statistics(int n, int m, double level,
                             const std::vector<double>& stats) {
  SizeRow row;
  row.n = n;
  row.m = m;
  row.reps = static_cast<int>(stats.size());
  if (stats.empty()) throw_data_error("summarize_statistics: no replicates");

  double mean = 0.0;
  for (double s : stats) mean += s;
  mean /= static_cast<double>(stats.size());
  row.mean = mean;

  if (stats.size() > 1) {
    double ss = 0.0;
    for (double s : stats) ss += (s - mean) * (s - mean);
    row.var = ss / static_cast<double>(stats.size() - 1);
  } else {
    row.var = 0.0;
    row.var_degenerate = true;
  }

  std::vector<double> sorted = stats;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t r = sorted.size();
  row.median = (r % 2 == 1) ? sorted[r / 2]
                            : 0.5 * (sorted[r / 2 - 1] + sorted[r / 2]);

  const int df = static_cast<int>(factorial(m)) - 1;
  row.reject_rate = rejection_rate(stats, df, level);
  return row;
}

void write_size_summary_csv(const std::string& path,
                            const std::vector<SizeRow>& rows) {
  std::ofstream os(path);
  if (!os) throw_data_error("cannot open '" + path + "' for writing");
  os << "n,m,R,mean,var,median,reject_rate\n";
  for (const auto& row : rows) {
    os << row.n << ',' << row.m << ',' << row.reps << ','
       << format_double(row.mean) << ',' << format_double(row.var) << ','
       << format_double(row.median) << ',' << format_double(row.reject_rate)
       << '\n';
  }
}

std::vector<SizeRow> run_size_experiment(const ExperimentConfig& config,
                                         const std::string& out_dir) {
  if (config.reps < 1) throw_data_error("size experiment: reps must be >= 1");
  ensure_dir(out_dir);
  std::vector<SizeRow> rows;

  for (int m : config.m_list) {
    SvgPlot qq_plot("Null-statistic QQ, m=" + std::to_string(m),
                    "theoretical chi-square quantile", "empirical quantile");
    qq_plot.add_identity_line();
    const int df = static_cast<int>(factorial(m)) - 1;

    for (int n : config.n_list) {
      const TestOptions opts = test_options_from(config, m);
      const std::vector<double> stats =
          simulate_null_statistics(n, m, config.reps, config.seed, opts,
                                   config.distribution, config.threads);
      SizeRow row = summarize_statistics(n, m, config.level, stats);
      if (row.var_degenerate) {
        std::fprintf(stderr,
                     "note: size experiment with R=1 (n=%d, m=%d); variance "
                     "reported as 0\n",
                     n, m);
      }
      rows.push_back(row);

      // QQ pairs at R evenly spaced probability levels.
      std::vector<double> sorted = stats;
      std::sort(sorted.begin(), sorted.end());
      std::vector<double> theo(sorted.size());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) /
                         static_cast<double>(sorted.size());
        theo[i] = chi2_quantile(p, df);
      }
      const std::string qq_path = out_dir + "/size_qq_n" + std::to_string(n) +
                                  "_m" + std::to_string(m) + ".csv";
      std::ofstream qq(qq_path);
      if (!qq) throw_data_error("cannot open '" + qq_path + "' for writing");
      qq << "theoretical,empirical\n";
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        qq << format_double(theo[i]) << ',' << format_double(sorted[i])
           << '\n';
      }
      qq_plot.add_series("n=" + std::to_string(n), theo, sorted);
    }
    qq_plot.write_file(out_dir + "/size_qq_m" + std::to_string(m) + ".svg");
  }

  write_size_summary_csv(out_dir + "/size_summary.csv", rows);
  return rows;
}

void write_power_csv(const std::string& path,
                     const std::vector<PowerRow>& rows) {
  std::ofstream os(path);
  if (!os) throw_data_error("cannot open '" + path + "' for writing");
  os << "model,m,n,k_graph,rho,reject_rate,R\n";
  for (const auto& row : rows) {
    os << transform_name(row.model) << ',' << row.m << ',' << row.n << ','
       << row.k_graph << ',' << format_double(row.rho) << ','
       << format_double(row.reject_rate) << ',' << row.reps << '\n';
  }
}

std::vector<PowerRow> run_power_experiment(const ExperimentConfig& config,
                                           const std::string& out_dir) {
  if (config.reps < 1) throw_data_error("power experiment: reps must be >= 1");
  for (double rho : config.rho_grid) {
    if (!(std::fabs(rho) < 1.0)) {
      throw_data_error("power experiment: rho grid must lie in (-1,1)");
    }
  }
  ensure_dir(out_dir);
  std::vector<PowerRow> rows;

  for (int m : config.m_list) {
    SvgPlot plot(std::string("Power, ") + transform_name(config.transform) +
                     " model, m=" + std::to_string(m),
                 "rho", "rejection rate");
    const int df = static_cast<int>(factorial(m)) - 1;
    for (int n : config.n_list) {
      for (int k_graph : config.k_graph_list) {
        std::vector<double> rates;
        rates.reserve(config.rho_grid.size());
        for (double rho : config.rho_grid) {
          const TestOptions opts = test_options_from(config, m);
          const std::vector<double> stats = simulate_sar_statistics(
              n, m, k_graph, rho, config.transform, config.reps, config.seed,
              opts, config.threads);
          PowerRow row;
          row.model = config.transform;
          row.m = m;
          row.n = n;
          row.k_graph = k_graph;
          row.rho = rho;
          row.reps = config.reps;
          row.reject_rate = rejection_rate(stats, df, config.level);
          rows.push_back(row);
          rates.push_back(row.reject_rate);
        }
        plot.add_series(
            "n=" + std::to_string(n) + ", k=" + std::to_string(k_graph),
            config.rho_grid, rates);
      }
    }
    plot.write_file(out_dir + "/power_" +
                    std::string(transform_name(config.transform)) + "_m" +
                    std::to_string(m) + ".svg");
  }

  write_power_csv(out_dir + "/power_curves.csv", rows);
  return rows;
}

std::string run_diagnostics(const PointCloud& cloud,
                            const DiagnosticsOptions& options) {
  validate_cloud(cloud, options.m);
  const int n = static_cast<int>(cloud.size());
  const BlockSet blocks = build_blocks(cloud, options.m);
  const SpatialGraph graph = build_graph(blocks, n);
  const SymbolizedField field = symbolize_blocks(cloud, blocks);

  const int h_max = options.h_max > 0
                        ? options.h_max
                        : std::max(4, default_bandwidth(cloud.size()));

  nlohmann::ordered_json j;
  j["n"] = n;
  j["m"] = options.m;
  j["duplicate_coordinates"] = duplicate_coordinate_count(cloud);
  j["ties"] = field.tied_blocks;

  const auto pair_counts = distance_pair_counts(graph, h_max);
  nlohmann::ordered_json u_table = nlohmann::ordered_json::array();
  for (int h = 0; h <= h_max; ++h) {
    u_table.push_back({{"h", h}, {"pairs", pair_counts[h]}});
  }
  j["pair_counts"] = u_table;

  // Shell-size histogram per h over all vertices.
  nlohmann::ordered_json shell_hist = nlohmann::ordered_json::array();
  for (int h : options.h_list) {
    if (h > h_max) continue;
    std::vector<std::int64_t> sizes(n, 0);
    for (int s = 0; s < n; ++s) {
      const ShellIndex shell = bfs_distances(graph, s, h);
      std::int64_t count = 0;
      for (std::int32_t dist : shell.distance) {
        if (dist == h) ++count;
      }
      sizes[s] = count;
    }
    std::map<std::int64_t, std::int64_t> hist;
    double mean = 0;
    std::int64_t max_size = 0;
    for (std::int64_t s : sizes) {
      ++hist[s];
      mean += static_cast<double>(s);
      max_size = std::max(max_size, s);
    }
    mean /= n;
    nlohmann::ordered_json hist_json = nlohmann::ordered_json::array();
    for (const auto& [size, freq] : hist) {
      hist_json.push_back({{"size", size}, {"count", freq}});
    }
    shell_hist.push_back({{"h", h},
                          {"mean", mean},
                          {"max", max_size},
                          {"histogram", hist_json}});
  }
  j["shell_sizes"] = shell_hist;

  nlohmann::ordered_json delta = nlohmann::ordered_json::array();
  nlohmann::ordered_json overlap = nlohmann::ordered_json::array();
  nlohmann::ordered_json holder = nlohmann::ordered_json::array();
  for (int h : options.h_list) {
    for (double k : options.k_list) {
      delta.push_back({{"h", h},
                       {"k", k},
                       {"value", shell_size_moment(graph, h, k)}});
      if (h >= 1) {
        const int f = h;
        overlap.push_back(
            {{"h", h},
             {"f", f},
             {"k", k},
             {"value", shell_overlap_moment(graph, h, f, k)}});
        holder.push_back(
            {{"h", h},
             {"f", f},
             {"k", k},
             {"value", holder_sparsity_index(graph, h, f, k,
                                             default_beta_grid())}});
      }
    }
  }
  j["shell_size_moment"] = delta;
  j["shell_overlap_moment"] = overlap;
  j["holder_sparsity_index"] = holder;
  return j.dump(2);
}

}  // namespace ordpat
