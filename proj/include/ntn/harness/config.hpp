#pragma once

// Plain-text experiment configuration:
//
//   # comment
//   [traffic]
//   lambda = 4
//   training.episodes = 300    # dotted keys work anywhere
//
// Omitted keys keep their defaults. Unknown keys, malformed values and
// out-of-range values are rejected with the offending line number.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ntn/madrl/trainer.hpp"
#include "ntn/scenario.hpp"

namespace ntn {

struct ExperimentConfig {
  SimConfig sim;
  TrainingConfig training;
  Method method = Method::TtsMaddpg;
  std::vector<std::uint64_t> seeds = {1};
  int parallel = 1;       // seeds run concurrently
  int eval_threads = 1;   // evaluation episodes run concurrently
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

// Every key with its effective value; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& config);

// Names of every accepted key, "section.key".
std::vector<std::string> config_keys();

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace ntn
