#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ntn/harness/config.hpp"
#include "ntn/harness/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"IAB-assisted non-terrestrial network simulator and multi-agent trainer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string method;
  std::uint64_t seed = 0;
  std::string out = "results";
  int episodes = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "train or simulate one method; writes CSVs and checkpoints");
  run->add_option("--config", config_path, "experiment config file");
  run->add_option("--method", method, "rr, maddpg or tts-maddpg")->check(CLI::IsMember({"rr", "maddpg", "tts-maddpg"}));
  auto* seed_opt = run->add_option("--seed", seed, "run only this seed");
  run->add_option("--out", out, "output directory")->capture_default_str();
  run->add_option("--episodes", episodes, "override training.episodes")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "suppress progress output");

  std::vector<std::string> dirs;
  auto* cmp = app.add_subcommand("compare", "converged evaluation throughput and pairwise gains");
  cmp->add_option("dirs", dirs, "run directories containing eval.csv")->required()->expected(2, -1);

  auto* dump = app.add_subcommand("dump-config", "print the effective configuration");
  dump->add_option("--config", config_path, "experiment config file");
  dump->add_option("--method", method, "rr, maddpg or tts-maddpg")->check(CLI::IsMember({"rr", "maddpg", "tts-maddpg"}));
  dump->add_option("--episodes", episodes, "override training.episodes")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    auto effective = [&]() {
      ntn::ExperimentConfig c = config_path.empty() ? ntn::parse_config("") : ntn::load_config(config_path);
      if (!method.empty()) c.method = *ntn::parse_method(method);
      if (episodes > 0) c.training.episodes = episodes;
      return c;
    };
    if (*run) {
      ntn::ExperimentConfig c = effective();
      if (*seed_opt) c.seeds = {seed};
      ntn::RunOptions o;
      o.progress = quiet ? nullptr : &std::cerr;
      for (const auto& s : ntn::run_sweep(c, out, o))
        if (!quiet) std::cout << s.dir.string() << "\n";
    } else if (*cmp) {
      std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
      std::cout << ntn::format_comparison(ntn::compare_runs(paths));
    } else if (*dump) {
      std::cout << ntn::dump_config(effective());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
