#include "ntn/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ntn {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_line(header);
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(num(v));
    write_line(cells);
  }

 private:
  void write_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
  }

  std::filesystem::path path_;
  std::ofstream out_;
};

std::vector<std::string> uav_columns(int platforms) {
  std::vector<std::string> out;
  for (int p = 0; p < platforms; ++p) out.push_back("uav" + std::to_string(p) + "_mbps");
  return out;
}

}  // namespace

std::string run_dir_name(Method method, std::uint64_t seed) {
  return method_name(method) + "_seed" + std::to_string(seed);
}

RunSummary run_experiment(const ExperimentConfig& config, std::uint64_t seed, const std::filesystem::path& out,
                          const RunOptions& options) {
  RunSummary summary;
  summary.dir = out / run_dir_name(config.method, seed);
  std::error_code ec;
  std::filesystem::create_directories(summary.dir, ec);
  if (ec) throw std::runtime_error("cannot create " + summary.dir.string() + ": " + ec.message());

  ExperimentConfig echo = config;
  echo.seeds = {seed};
  {
    const auto path = summary.dir / "config.ini";
    std::ofstream f(path);
    f << dump_config(echo);
    if (!f) throw std::runtime_error("write failed: " + path.string());
  }

  Trainer trainer(config.sim, config.training, config.method, seed);
  const int P = static_cast<int>(config.sim.scenario.platforms.size());
  auto train_header = std::vector<std::string>{"episode", "overall_mbps"};
  auto eval_header = std::vector<std::string>{"episode", "mean_mbps", "std_mbps"};
  for (const auto& c : uav_columns(P)) {
    train_header.push_back(c);
    eval_header.push_back(c);
  }
  train_header.insert(train_header.end(), {"drop_rate", "noise_std"});
  eval_header.push_back("drop_rate");
  CsvWriter train_csv(summary.dir / "train.csv", train_header);
  CsvWriter eval_csv(summary.dir / "eval.csv", eval_header);

  for (int e = 0; e < config.training.episodes; ++e) {
    const TrainEpisodeLog log = trainer.train_episode();
    std::vector<double> row{static_cast<double>(log.episode), log.metrics.overall_mbps()};
    for (int p = 0; p < P; ++p) row.push_back(log.metrics.uav_mbps(p));
    row.push_back(log.metrics.drop_rate());
    row.push_back(log.noise_std);
    train_csv.row(row);
    ++summary.episodes;

    if (trainer.eval_due() || e + 1 == config.training.episodes) {
      const EvalLog ev = trainer.evaluate(config.eval_threads);
      std::vector<double> erow{static_cast<double>(ev.episode), ev.mean_mbps, ev.std_mbps};
      erow.insert(erow.end(), ev.uav_mbps.begin(), ev.uav_mbps.end());
      erow.push_back(ev.drop_rate);
      eval_csv.row(erow);
      ++summary.evaluations;
      summary.final_eval_mbps = ev.mean_mbps;
      summary.checkpoints = trainer.save_checkpoints(summary.dir / "checkpoints");
      if (options.progress) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s seed %llu episode %d/%d eval %.3f Mbps (train %.3f)\n",
                      method_name(config.method).c_str(), static_cast<unsigned long long>(seed), ev.episode,
                      config.training.episodes, ev.mean_mbps, log.metrics.overall_mbps());
        *options.progress << buf << std::flush;
      }
    }
  }
  return summary;
}

std::vector<RunSummary> run_sweep(const ExperimentConfig& config, const std::filesystem::path& out,
                                  const RunOptions& options) {
  const std::size_t n = config.seeds.size();
  std::vector<RunSummary> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::mutex progress_mutex;
  auto job = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      try {
        std::ostringstream local;
        RunOptions o;
        o.progress = options.progress ? &local : nullptr;
        results[i] = run_experiment(config, config.seeds[i], out, o);
        if (options.progress) {
          std::lock_guard lock(progress_mutex);
          *options.progress << local.str() << std::flush;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(config.parallel, n));
  if (workers == 1) {
    RunOptions o = options;
    for (std::size_t i = 0; i < n; ++i) results[i] = run_experiment(config, config.seeds[i], out, o);
    return results;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(job, w, workers);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(t.header.size()) + " columns");
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": not a number '" + c + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw std::runtime_error(path.string() + ": empty CSV");
  return t;
}

ConvergedStat converged_stat(const CsvTable& eval, const std::string& label) {
  const int ep = eval.column("episode");
  const int val = eval.column("mean_mbps");
  if (ep < 0 || val < 0) throw std::runtime_error(label + ": evaluation CSV lacks episode/mean_mbps columns");
  if (eval.rows.empty()) throw std::runtime_error(label + ": evaluation CSV has no rows");
  double last = 0.0;
  for (const auto& r : eval.rows) last = std::max(last, r[ep]);
  const double cutoff = last - 0.1 * last;
  std::vector<double> xs;
  for (const auto& r : eval.rows)
    if (r[ep] > cutoff) xs.push_back(r[val]);
  if (xs.empty()) xs.push_back(eval.rows.back()[val]);
  ConvergedStat s;
  s.label = label;
  s.count = static_cast<int>(xs.size());
  for (double x : xs) s.mean += x / s.count;
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean) / s.count;
  s.std = std::sqrt(var);
  return s;
}

ConvergedStat converged_eval(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "eval.csv";
  if (!std::filesystem::exists(path)) throw std::runtime_error("missing evaluation CSV: " + path.string());
  return converged_stat(read_csv(path), run_dir.filename().string());
}

double relative_gain(double baseline, double candidate) {
  if (baseline == 0.0) throw std::invalid_argument("relative_gain: zero baseline");
  return (candidate - baseline) / baseline;
}

Comparison compare_runs(const std::vector<std::filesystem::path>& dirs) {
  if (dirs.size() < 2) throw std::invalid_argument("compare: need at least two result directories");
  Comparison c;
  std::size_t columns = 0;
  for (const auto& d : dirs) {
    const auto path = d / "eval.csv";
    if (!std::filesystem::exists(path)) throw std::runtime_error("missing evaluation CSV: " + path.string());
    const CsvTable t = read_csv(path);
    if (columns && t.header.size() != columns)
      throw std::runtime_error("incompatible evaluation CSV: " + path.string());
    columns = t.header.size();
    std::string label = d.filename().string();
    if (label.empty()) label = d.parent_path().filename().string();
    c.stats.push_back(converged_stat(t, label));
  }
  const std::size_t n = c.stats.size();
  c.gains.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c.gains[i][j] = relative_gain(c.stats[i].mean, c.stats[j].mean);
  return c;
}

std::string format_comparison(const Comparison& c) {
  std::string out = "run,converged_mean_mbps,converged_std_mbps,eval_points\n";
  char buf[256];
  for (const auto& s : c.stats) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%d\n", s.label.c_str(), s.mean, s.std, s.count);
    out += buf;
  }
  out += "\nbaseline,candidate,gain_percent\n";
  for (std::size_t i = 0; i < c.stats.size(); ++i)
    for (std::size_t j = 0; j < c.stats.size(); ++j) {
      if (i == j) continue;
      std::snprintf(buf, sizeof buf, "%s,%s,%.4f\n", c.stats[i].label.c_str(), c.stats[j].label.c_str(),
                    100.0 * c.gains[i][j]);
      out += buf;
    }
  return out;
}

}  // namespace ntn
