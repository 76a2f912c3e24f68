#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ntn/harness/config.hpp"

namespace ntn {

// train.csv: episode, overall_mbps, uav0_mbps..uavN_mbps, drop_rate, noise_std
// eval.csv:  episode, mean_mbps, std_mbps, uav0_mbps..uavN_mbps, drop_rate
struct RunOptions {
  std::ostream* progress = nullptr;  // per-evaluation progress lines
};

struct RunSummary {
  std::filesystem::path dir;
  int episodes = 0;
  int evaluations = 0;
  std::vector<std::filesystem::path> checkpoints;
  double final_eval_mbps = 0.0;
};

std::string run_dir_name(Method method, std::uint64_t seed);

// One method, one seed, into <out>/<method>_seed<seed>/.
RunSummary run_experiment(const ExperimentConfig& config, std::uint64_t seed, const std::filesystem::path& out,
                          const RunOptions& options = {});

// All seeds of `config`, up to config.parallel at a time.
std::vector<RunSummary> run_sweep(const ExperimentConfig& config, const std::filesystem::path& out,
                                  const RunOptions& options = {});

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& path);

struct ConvergedStat {
  std::string label;
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

// Evaluation rows within the last 10% of episodes (at least the last row).
ConvergedStat converged_eval(const std::filesystem::path& run_dir);
ConvergedStat converged_stat(const CsvTable& eval, const std::string& label);

double relative_gain(double baseline, double candidate);

struct Comparison {
  std::vector<ConvergedStat> stats;
  // gains[i][j]: gain of stats[j] over stats[i].
  std::vector<std::vector<double>> gains;
};

Comparison compare_runs(const std::vector<std::filesystem::path>& dirs);
std::string format_comparison(const Comparison& c);

}  // namespace ntn
