#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ntn/harness/config.hpp"
#include "ntn/harness/experiment.hpp"

using namespace ntn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("ntn_harness_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny(Method m) {
  ExperimentConfig c = parse_config("");
  c.method = m;
  c.training.episodes = 4;
  c.training.slots_per_episode = 30;
  c.training.eval_every = 2;
  c.training.eval_episodes = 2;
  c.training.batch_size = 16;
  c.training.warmup_transitions = 40;
  c.training.actor_hidden = {8};
  c.training.critic_hidden = {8};
  return c;
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
  const ExperimentConfig c = parse_config("");
  EXPECT_EQ(c.sim.traffic.lambda, 4.0);
  EXPECT_EQ(c.sim.traffic.deadline_slots, 10);
  EXPECT_EQ(c.sim.traffic.packet_bits, 50'000);
  EXPECT_EQ(c.training.episodes, 1000);
  EXPECT_EQ(c.training.slots_per_episode, 200);
  EXPECT_EQ(c.sim.scenario.num_ues, 20);
  EXPECT_EQ(c.sim.slot_s, 0.030);
  EXPECT_EQ(c.sim.scenario.platforms.size(), 5u);
  EXPECT_EQ(c.method, Method::TtsMaddpg);
}

TEST(Config, SectionsAndDottedKeys) {
  const ExperimentConfig c = parse_config(
      "# comment\n"
      "traffic.lambda = 4\n"
      "[training]\n"
      "episodes = 300   # trailing comment\n"
      "actor_hidden = 32, 16\n"
      "experiment.method = rr\n"
      "[node]\n"
      "max_speed_mps = 12.5\n"
      "[experiment]\n"
      "seeds = 1, 2, 3\n");
  EXPECT_EQ(c.sim.traffic.lambda, 4.0);
  EXPECT_EQ(c.training.episodes, 300);
  EXPECT_EQ(c.training.actor_hidden, (std::vector<int>{32, 16}));
  EXPECT_EQ(c.method, Method::RoundRobin);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  for (const auto& p : c.sim.scenario.platforms)
    EXPECT_EQ(p.max_speed_mps, p.tier == Tier::TetheredDonor ? 0.0 : 12.5);
}

TEST(Config, TypeErrorNamesKeyAndLine) {
  try {
    parse_config("[scenario]\nnum_ues = 20\ntraffic.lambda = banana\n", "exp.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("traffic.lambda"), std::string::npos);
    EXPECT_NE(msg.find("exp.ini:3"), std::string::npos);
  }
}

TEST(Config, RejectsUnknownDuplicateAndOutOfRange) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("[traffic]\nlamda = 4\n"), 2);
  EXPECT_EQ(line_of("[bogus]\n"), 1);
  EXPECT_EQ(line_of("traffic.lambda = 4\ntraffic.lambda = 5\n"), 2);
  EXPECT_EQ(line_of("lambda = 4\n"), 1);
  EXPECT_EQ(line_of("\n\ntraffic.lambda = -1\n"), 3);
  EXPECT_EQ(line_of("training.gamma = 1.5\n"), 1);
  EXPECT_EQ(line_of("scenario.num_ues = 2.5\n"), 1);
  EXPECT_EQ(line_of("experiment.method = dqn\n"), 1);
  EXPECT_EQ(line_of("traffic.lambda 4\n"), 1);
  EXPECT_EQ(line_of("[traffic\n"), 1);
  // cross-field constraint, reported without a line
  EXPECT_EQ(line_of("scenario.ue_speed_min_mps = 5\nscenario.ue_speed_max_mps = 2\n"), 0);
}

TEST(Config, DumpRoundTripsExactly) {
  ExperimentConfig c = parse_config("traffic.lambda = 3.3\nscenario.slot_s = 0.031\ntraining.tau = 0.1\n");
  c.seeds = {7, 9};
  const ExperimentConfig back = parse_config(dump_config(c));
  EXPECT_TRUE(back == c);
  EXPECT_EQ(back.sim.traffic.lambda, 3.3);
  EXPECT_EQ(back.sim.slot_s, 0.031);
  EXPECT_EQ(dump_config(back), dump_config(c));
  for (const auto& k : config_keys()) EXPECT_NE(dump_config(c).find(k.substr(k.find('.') + 1) + " = "), std::string::npos);
}

TEST(Config, LoadFileAndMissingFile) {
  const fs::path d = fresh_dir("load");
  {
    std::ofstream f(d / "c.ini");
    f << "[traffic]\nlambda = 4\n";
  }
  EXPECT_EQ(load_config(d / "c.ini").sim.traffic.lambda, 4.0);
  EXPECT_THROW(load_config(d / "missing.ini"), ConfigError);
}

TEST(Run, RoundRobinWritesRowsWithoutCheckpoints) {
  const fs::path d = fresh_dir("rr");
  ExperimentConfig c = tiny(Method::RoundRobin);
  c.training.episodes = 10;
  const RunSummary s = run_experiment(c, 1, d);
  EXPECT_EQ(s.dir, d / "rr_seed1");
  const CsvTable t = read_csv(s.dir / "train.csv");
  EXPECT_EQ(t.rows.size(), 10u);
  EXPECT_EQ(t.header.front(), "episode");
  EXPECT_TRUE(s.checkpoints.empty());
  EXPECT_FALSE(fs::exists(s.dir / "checkpoints"));
  EXPECT_TRUE(fs::exists(s.dir / "eval.csv"));
  EXPECT_TRUE(fs::exists(s.dir / "config.ini"));
}

TEST(Run, PerUavColumnsSumToOverall) {
  const fs::path d = fresh_dir("sum");
  const RunSummary s = run_experiment(tiny(Method::TtsMaddpg), 2, d);
  for (const char* file : {"train.csv", "eval.csv"}) {
    const CsvTable t = read_csv(s.dir / file);
    const int overall = t.column(std::string(file) == "train.csv" ? "overall_mbps" : "mean_mbps");
    for (const auto& row : t.rows) {
      double sum = 0;
      for (int p = 0; p < 5; ++p) sum += row[t.column("uav" + std::to_string(p) + "_mbps")];
      EXPECT_NEAR(sum, row[overall], 1e-6);
    }
  }
  EXPECT_EQ(s.checkpoints.size(), (5u + 4u) * 4u);
}

TEST(Run, RepeatIsBitIdenticalAndEchoReproduces) {
  const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2"), d3 = fresh_dir("det3");
  const ExperimentConfig c = tiny(Method::TtsMaddpg);
  const auto a = run_experiment(c, 1, d1);
  const auto b = run_experiment(c, 1, d2);
  EXPECT_EQ(slurp(a.dir / "train.csv"), slurp(b.dir / "train.csv"));
  EXPECT_EQ(slurp(a.dir / "eval.csv"), slurp(b.dir / "eval.csv"));
  const ExperimentConfig echo = load_config(a.dir / "config.ini");
  const auto e = run_experiment(echo, echo.seeds.front(), d3);
  EXPECT_EQ(slurp(a.dir / "train.csv"), slurp(e.dir / "train.csv"));
  EXPECT_EQ(slurp(a.dir / "config.ini"), slurp(e.dir / "config.ini"));
}

TEST(Run, SweepIsolatesSeeds) {
  const fs::path d = fresh_dir("sweep");
  ExperimentConfig c = tiny(Method::Maddpg);
  c.seeds = {1, 2};
  c.parallel = 2;
  const auto runs = run_sweep(c, d);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].dir, d / "maddpg_seed1");
  EXPECT_EQ(runs[1].dir, d / "maddpg_seed2");
  const fs::path seq = fresh_dir("sweep_seq");
  const auto single = run_experiment(c, 2, seq);
  EXPECT_EQ(slurp(runs[1].dir / "train.csv"), slurp(single.dir / "train.csv"));
}

TEST(Compare, GainsFormula) {
  EXPECT_NEAR(relative_gain(70, 175), 1.5, 1e-12);
  EXPECT_NEAR(relative_gain(147, 175), 0.190476, 1e-6);
  EXPECT_EQ(relative_gain(100, 100), 0.0);
  EXPECT_THROW(relative_gain(0, 1), std::invalid_argument);
}

TEST(Compare, ConvergedWindowAndTable) {
  const fs::path d = fresh_dir("cmp");
  auto write = [&](const std::string& name, std::vector<std::pair<int, double>> rows) {
    fs::create_directories(d / name);
    std::ofstream f(d / name / "eval.csv");
    f << "episode,mean_mbps,std_mbps,uav0_mbps,drop_rate\n";
    for (auto [e, v] : rows) f << e << "," << v << ",0," << v << ",0\n";
  };
  write("rr_seed1", {{50, 60}, {90, 69}, {95, 70}, {100, 71}});
  write("tts_seed1", {{50, 100}, {90, 170}, {95, 175}, {100, 180}});
  const ConvergedStat s = converged_eval(d / "rr_seed1");
  EXPECT_EQ(s.count, 2);  // episodes 95 and 100 lie in the last 10%
  EXPECT_NEAR(s.mean, 70.5, 1e-12);
  const Comparison c = compare_runs({d / "rr_seed1", d / "tts_seed1"});
  EXPECT_NEAR(c.gains[0][1], (177.5 - 70.5) / 70.5, 1e-12);
  const Comparison same = compare_runs({d / "rr_seed1", d / "rr_seed1"});
  EXPECT_EQ(same.gains[0][1], 0.0);
  EXPECT_NE(format_comparison(c).find("tts_seed1"), std::string::npos);
  EXPECT_THROW(compare_runs({d / "rr_seed1"}), std::invalid_argument);
  EXPECT_THROW(compare_runs({d / "rr_seed1", d / "nothing"}), std::runtime_error);
}
