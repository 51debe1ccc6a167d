// ordpat: nonparametric spatial-independence testing on irregular point
// clouds via nearest-neighbour ordinal patterns.
//
// Subcommands: test | size | power | diagnostics
// Exit codes: 0 success, 1 usage error, 3 data error, 4 numerical error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ordpat/csv_io.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/experiments.hpp"
#include "ordpat/independence.hpp"

namespace {

int exit_code_for(ordpat::ErrorCategory category) {
  switch (category) {
    case ordpat::ErrorCategory::usage:
      return 1;
    case ordpat::ErrorCategory::data:
      return 3;
    case ordpat::ErrorCategory::numerical:
      return 4;
  }
  return 1;
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct CommonFlags {
  double bandwidth = 0.0;
  std::string kernel = "truncated";
  double level = 0.05;
  std::string centering = "null";
  std::string smoothing = "auto";
  int threads = default_threads();
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

void add_stat_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--bandwidth", flags.bandwidth,
                  "Kernel bandwidth (default: max(1, floor(n^(1/4))))");
  cmd->add_option("--kernel", flags.kernel, "Shell kernel")
      ->check(CLI::IsMember({"bartlett", "truncated"}));
  cmd->add_option("--level", flags.level, "Test level alpha")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  cmd->add_option("--centering", flags.centering,
                  "Covariance centering vector")
      ->check(CLI::IsMember({"null", "empirical"}));
  cmd->add_option("--smoothing", flags.smoothing,
                  "Zero-count handling in the log-ratio transform")
      ->check(CLI::IsMember({"auto", "off"}));
}

ordpat::CovKernel::Kind parse_kernel(const std::string& s) {
  return s == "truncated" ? ordpat::CovKernel::Kind::truncated
                          : ordpat::CovKernel::Kind::bartlett;
}

ordpat::Centering parse_centering(const std::string& s) {
  return s == "empirical" ? ordpat::Centering::empirical_mean
                          : ordpat::Centering::null_uniform;
}

ordpat::SmoothingMode parse_smoothing(const std::string& s) {
  return s == "off" ? ordpat::SmoothingMode::off
                    : ordpat::SmoothingMode::auto_half;
}

ordpat::Transform parse_transform(const std::string& s) {
  if (s == "sin") return ordpat::Transform::sine;
  if (s == "logabs") return ordpat::Transform::log_abs;
  return ordpat::Transform::identity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Ordinal-pattern test of spatial independence for irregular point "
      "clouds"};
  app.require_subcommand(1);

  CommonFlags flags;

  // --- test ---
  auto* cmd_test = app.add_subcommand(
      "test", "Run the independence test on a CSV field (x,y,value)");
  std::string test_input;
  int test_m = 3;
  std::string test_out_file;
  cmd_test->add_option("input", test_input, "Input CSV path")->required();
  cmd_test->add_option("--m", test_m, "Embedding dimension (block size)");
  add_stat_flags(cmd_test, flags);
  cmd_test->add_option("--threads", flags.threads, "Worker threads");
  cmd_test->add_option("--out", test_out_file,
                       "Write the JSON report here instead of stdout");

  // --- size ---
  auto* cmd_size = app.add_subcommand(
      "size", "Null-distribution study: moments, rejection rate, QQ data");
  std::vector<int> size_n{500, 2000, 5000};
  std::vector<int> size_m{3};
  int size_reps = 10000;
  cmd_size->add_option("--n", size_n, "Sample sizes");
  cmd_size->add_option("--m", size_m, "Embedding dimensions");
  cmd_size->add_option("--reps", size_reps, "Monte Carlo replications")
      ->check(CLI::PositiveNumber);
  cmd_size->add_option("--seed", flags.seed, "Master seed");
  cmd_size->add_option("--threads", flags.threads, "Worker threads");
  cmd_size->add_option("--out", flags.out_dir, "Output directory");
  add_stat_flags(cmd_size, flags);

  // --- power ---
  auto* cmd_power = app.add_subcommand(
      "power", "Power study against SAR alternatives over a rho grid");
  std::vector<int> power_n{500, 2000, 5000};
  std::vector<int> power_m{3};
  std::vector<int> power_k{2, 3};
  std::vector<double> power_rho{0.0, 0.1, 0.2, 0.3, 0.4,
                                0.5, 0.6, 0.7, 0.8, 0.9};
  std::string power_transform = "identity";
  int power_reps = 10000;
  cmd_power->add_option("--n", power_n, "Sample sizes");
  cmd_power->add_option("--m", power_m, "Embedding dimensions");
  cmd_power->add_option("--k-graph", power_k,
                        "Neighbour counts for the SAR weight matrix");
  cmd_power->add_option("--rho-grid", power_rho, "Dependence grid in (-1,1)");
  cmd_power->add_option("--transform", power_transform, "Output transform")
      ->check(CLI::IsMember({"identity", "sin", "logabs"}));
  cmd_power->add_option("--reps", power_reps, "Monte Carlo replications")
      ->check(CLI::PositiveNumber);
  cmd_power->add_option("--seed", flags.seed, "Master seed");
  cmd_power->add_option("--threads", flags.threads, "Worker threads");
  cmd_power->add_option("--out", flags.out_dir, "Output directory");
  add_stat_flags(cmd_power, flags);

  // --- diagnostics ---
  auto* cmd_diag = app.add_subcommand(
      "diagnostics", "Graph sparsity and pattern diagnostics for a CSV field");
  std::string diag_input;
  int diag_m = 3;
  std::string diag_out_file;
  cmd_diag->add_option("input", diag_input, "Input CSV path")->required();
  cmd_diag->add_option("--m", diag_m, "Embedding dimension");
  cmd_diag->add_option("--out", diag_out_file,
                       "Write the JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (cmd_test->parsed()) {
      const ordpat::PointCloud cloud = ordpat::read_field_csv_file(test_input);
      ordpat::TestOptions opts;
      opts.m = test_m;
      opts.bandwidth = flags.bandwidth;
      opts.kernel = parse_kernel(flags.kernel);
      opts.level = flags.level;
      opts.centering = parse_centering(flags.centering);
      opts.smoothing = parse_smoothing(flags.smoothing);
      opts.threads = flags.threads;
      const ordpat::TestReport report = ordpat::run_test(cloud, opts);
      if (report.smoothed) {
        std::cerr << "note: zero pattern counts; 0.5 smoothing applied to "
                     "the log-ratio transform\n";
      }
      const std::string json = ordpat::report_to_json(report);
      if (test_out_file.empty()) {
        std::cout << json << '\n';
      } else {
        std::ofstream os(test_out_file);
        if (!os) ordpat::throw_data_error("cannot open '" + test_out_file + "'");
        os << json << '\n';
      }
      return 0;
    }

    if (cmd_size->parsed() || cmd_power->parsed()) {
      ordpat::ExperimentConfig config;
      config.level = flags.level;
      config.bandwidth = flags.bandwidth;
      config.kernel = parse_kernel(flags.kernel);
      config.centering = parse_centering(flags.centering);
      config.smoothing = parse_smoothing(flags.smoothing);
      config.seed = flags.seed;
      config.threads = flags.threads;
      if (cmd_size->parsed()) {
        config.n_list = size_n;
        config.m_list = size_m;
        config.reps = size_reps;
        const auto rows = ordpat::run_size_experiment(config, flags.out_dir);
        for (const auto& row : rows) {
          std::printf("n=%d m=%d R=%d mean=%.4f var=%.4f median=%.4f "
                      "reject=%.4f\n",
                      row.n, row.m, row.reps, row.mean, row.var, row.median,
                      row.reject_rate);
        }
      } else {
        config.n_list = power_n;
        config.m_list = power_m;
        config.k_graph_list = power_k;
        config.rho_grid = power_rho;
        config.transform = parse_transform(power_transform);
        config.reps = power_reps;
        const auto rows = ordpat::run_power_experiment(config, flags.out_dir);
        for (const auto& row : rows) {
          std::printf("model=%s m=%d n=%d k=%d rho=%.2f reject=%.4f\n",
                      ordpat::transform_name(row.model), row.m, row.n,
                      row.k_graph, row.rho, row.reject_rate);
        }
      }
      return 0;
    }

    if (cmd_diag->parsed()) {
      const ordpat::PointCloud cloud = ordpat::read_field_csv_file(diag_input);
      ordpat::DiagnosticsOptions opts;
      opts.m = diag_m;
      const std::string json = ordpat::run_diagnostics(cloud, opts);
      if (diag_out_file.empty()) {
        std::cout << json << '\n';
      } else {
        std::ofstream os(diag_out_file);
        if (!os) ordpat::throw_data_error("cannot open '" + diag_out_file + "'");
        os << json << '\n';
      }
      return 0;
    }
  } catch (const ordpat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
