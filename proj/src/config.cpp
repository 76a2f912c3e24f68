#include "ntn/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ntn {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message),
      line_(line) {}

namespace {

struct ValueError {
  std::string message;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& v, const char* kind) {
  T out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && v[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || v.empty()) throw ValueError{"expected " + std::string(kind) + ", got '" + v + "'"};
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& v, const char* kind) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(trim(item), kind));
  if (out.empty()) throw ValueError{"expected a comma-separated list of " + std::string(kind)};
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T>
std::string fmt_list(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

using Table = std::vector<std::pair<std::string, Field>>;

void require(bool ok, const char* what) {
  if (!ok) throw ValueError{what};
}

template <typename Getter>
Field real(Getter ref, std::function<bool(double)> ok = {}, const char* what = "value out of range") {
  return {[=](ExperimentConfig& c, const std::string& v) {
            const double x = parse_number<double>(v, "a number");
            require(std::isfinite(x), "value must be finite");
            if (ok) require(ok(x), what);
            ref(c) = x;
          },
          [=](const ExperimentConfig& c) { return fmt(ref(const_cast<ExperimentConfig&>(c))); }};
}

template <typename Int, typename Getter>
Field integer(Getter ref, std::function<bool(Int)> ok = {}, const char* what = "value out of range") {
  return {[=](ExperimentConfig& c, const std::string& v) {
            const Int x = parse_number<Int>(v, "an integer");
            if (ok) require(ok(x), what);
            ref(c) = x;
          },
          [=](const ExperimentConfig& c) { return std::to_string(ref(const_cast<ExperimentConfig&>(c))); }};
}

std::vector<PlatformSpec*> nodes(ExperimentConfig& c) {
  std::vector<PlatformSpec*> out;
  for (auto& p : c.sim.scenario.platforms)
    if (p.tier == Tier::UntetheredNode) out.push_back(&p);
  return out;
}

PlatformSpec& donor(ExperimentConfig& c) {
  for (auto& p : c.sim.scenario.platforms)
    if (p.tier == Tier::TetheredDonor) return p;
  throw ValueError{"no donor platform"};
}

// Node keys apply to every node; the echo reads the first.
Field node_real(double PlatformSpec::*member, std::function<bool(double)> ok, const char* what) {
  return {[=](ExperimentConfig& c, const std::string& v) {
            const double x = parse_number<double>(v, "a number");
            require(std::isfinite(x), "value must be finite");
            if (ok) require(ok(x), what);
            for (auto* p : nodes(c)) p->*member = x;
          },
          [=](const ExperimentConfig& c) { return fmt(nodes(const_cast<ExperimentConfig&>(c)).front()->*member); }};
}

Field donor_real(double PlatformSpec::*member, std::function<bool(double)> ok, const char* what) {
  return {[=](ExperimentConfig& c, const std::string& v) {
            const double x = parse_number<double>(v, "a number");
            require(std::isfinite(x), "value must be finite");
            if (ok) require(ok(x), what);
            donor(c).*member = x;
          },
          [=](const ExperimentConfig& c) { return fmt(donor(const_cast<ExperimentConfig&>(c)).*member); }};
}

const auto positive = [](double x) { return x > 0.0; };
const auto nonneg = [](double x) { return x >= 0.0; };
const auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
const auto pos_int = [](int x) { return x > 0; };

const Table& table() {
  static const Table t = [] {
    Table t;
    auto add = [&](const std::string& k, Field f) { t.emplace_back(k, std::move(f)); };
#define REF(expr) [](ExperimentConfig& c) -> auto& { return expr; }
    add("scenario.area_width_m", real(REF(c.sim.scenario.area_width_m), positive, "must be positive"));
    add("scenario.area_height_m", real(REF(c.sim.scenario.area_height_m), positive, "must be positive"));
    add("scenario.num_ues", integer<int>(REF(c.sim.scenario.num_ues), pos_int, "must be positive"));
    add("scenario.ue_speed_min_mps", real(REF(c.sim.scenario.ue_speed_min_mps), nonneg, "must be nonnegative"));
    add("scenario.ue_speed_max_mps", real(REF(c.sim.scenario.ue_speed_max_mps), nonneg, "must be nonnegative"));
    add("scenario.slot_s", real(REF(c.sim.slot_s), positive, "must be positive"));

    add("donor.altitude_m", donor_real(&PlatformSpec::altitude_m, positive, "must be positive"));
    add("donor.carrier_hz", donor_real(&PlatformSpec::carrier_hz, positive, "must be positive"));
    add("donor.bandwidth_hz", donor_real(&PlatformSpec::bandwidth_hz, positive, "must be positive"));
    add("donor.tx_power_dbm", donor_real(&PlatformSpec::tx_power_dbm, {}, ""));
    add("donor.antenna_gain_dbi", donor_real(&PlatformSpec::antenna_gain_dbi, {}, ""));
    add("donor.noise_figure_db", donor_real(&PlatformSpec::noise_figure_db, nonneg, "must be nonnegative"));

    add("node.altitude_m", node_real(&PlatformSpec::altitude_m, positive, "must be positive"));
    add("node.carrier_hz", node_real(&PlatformSpec::carrier_hz, positive, "must be positive"));
    add("node.bandwidth_hz", node_real(&PlatformSpec::bandwidth_hz, positive, "must be positive"));
    add("node.tx_power_dbm", node_real(&PlatformSpec::tx_power_dbm, {}, ""));
    add("node.antenna_gain_dbi", node_real(&PlatformSpec::antenna_gain_dbi, {}, ""));
    add("node.noise_figure_db", node_real(&PlatformSpec::noise_figure_db, nonneg, "must be nonnegative"));
    add("node.max_speed_mps", node_real(&PlatformSpec::max_speed_mps, nonneg, "must be nonnegative"));

    add("channel.los_a", real(REF(c.sim.channel.los_a), positive, "must be positive"));
    add("channel.los_b", real(REF(c.sim.channel.los_b), positive, "must be positive"));
    add("channel.eta_los_db", real(REF(c.sim.channel.eta_los_db), nonneg, "must be nonnegative"));
    add("channel.eta_nlos_db", real(REF(c.sim.channel.eta_nlos_db), nonneg, "must be nonnegative"));
    add("channel.ue_noise_figure_db", real(REF(c.sim.channel.ue_noise_figure_db), nonneg, "must be nonnegative"));
    add("channel.backhaul_carrier_hz", real(REF(c.sim.channel.backhaul_carrier_hz), positive, "must be positive"));
    add("channel.backhaul_bandwidth_hz", real(REF(c.sim.channel.backhaul_bandwidth_hz), positive, "must be positive"));

    add("traffic.lambda", real(REF(c.sim.traffic.lambda), nonneg, "must be nonnegative"));
    add("traffic.packet_bits",
        integer<std::int64_t>(REF(c.sim.traffic.packet_bits), [](std::int64_t x) { return x > 0; }, "must be positive"));
    add("traffic.deadline_slots", integer<std::int64_t>(REF(c.sim.traffic.deadline_slots),
                                                        [](std::int64_t x) { return x > 0; }, "must be positive"));

    add("training.episodes", integer<int>(REF(c.training.episodes), pos_int, "must be positive"));
    add("training.slots_per_episode", integer<int>(REF(c.training.slots_per_episode), pos_int, "must be positive"));
    add("training.k_obs", integer<int>(REF(c.training.k_obs), pos_int, "must be positive"));
    add("training.macro_period", integer<int>(REF(c.training.macro_period), pos_int, "must be positive"));
    for (const char* name : {"actor_hidden", "critic_hidden"}) {
      const bool actor = std::string(name) == "actor_hidden";
      add(std::string("training.") + name,
          Field{[=](ExperimentConfig& c, const std::string& v) {
                  auto xs = parse_list<int>(v, "positive integers");
                  for (int x : xs) require(x > 0, "layer sizes must be positive");
                  (actor ? c.training.actor_hidden : c.training.critic_hidden) = xs;
                },
                [=](const ExperimentConfig& c) {
                  return fmt_list(actor ? c.training.actor_hidden : c.training.critic_hidden);
                }});
    }
    add("training.actor_lr", real(REF(c.training.actor_lr), nonneg, "must be nonnegative"));
    add("training.critic_lr", real(REF(c.training.critic_lr), nonneg, "must be nonnegative"));
    add("training.actor_preact_reg", real(REF(c.training.actor_preact_reg), nonneg, "must be nonnegative"));
    add("training.gamma", real(REF(c.training.gamma), unit, "must lie in [0, 1]"));
    add("training.tau", real(REF(c.training.tau), unit, "must lie in [0, 1]"));
    add("training.batch_size", integer<int>(REF(c.training.batch_size), pos_int, "must be positive"));
    add("training.scheduler_buffer", integer<int>(REF(c.training.scheduler_buffer), pos_int, "must be positive"));
    add("training.trajectory_buffer", integer<int>(REF(c.training.trajectory_buffer), pos_int, "must be positive"));
    add("training.warmup_transitions",
        integer<int>(REF(c.training.warmup_transitions), [](int x) { return x >= 0; }, "must be nonnegative"));
    add("training.slots_per_update", integer<int>(REF(c.training.slots_per_update), pos_int, "must be positive"));
    add("training.noise_start", real(REF(c.training.noise_start), nonneg, "must be nonnegative"));
    add("training.noise_end", real(REF(c.training.noise_end), nonneg, "must be nonnegative"));
    add("training.noise_decay_fraction", real(REF(c.training.noise_decay_fraction), unit, "must lie in [0, 1]"));
    add("training.reward_scale", real(REF(c.training.reward_scale), positive, "must be positive"));
    add("training.eval_every", integer<int>(REF(c.training.eval_every), pos_int, "must be positive"));
    add("training.eval_episodes", integer<int>(REF(c.training.eval_episodes), pos_int, "must be positive"));

    add("experiment.method", Field{[](ExperimentConfig& c, const std::string& v) {
                                     auto m = parse_method(v);
                                     if (!m) throw ValueError{"expected rr, maddpg or tts-maddpg, got '" + v + "'"};
                                     c.method = *m;
                                   },
                                   [](const ExperimentConfig& c) { return method_name(c.method); }});
    add("experiment.seeds", Field{[](ExperimentConfig& c, const std::string& v) {
                                    c.seeds = parse_list<std::uint64_t>(v, "unsigned integers");
                                  },
                                  [](const ExperimentConfig& c) { return fmt_list(c.seeds); }});
    add("experiment.parallel", integer<int>(REF(c.parallel), pos_int, "must be positive"));
    add("experiment.eval_threads", integer<int>(REF(c.eval_threads), pos_int, "must be positive"));
#undef REF
    return t;
  }();
  return t;
}

const Field* find(const std::string& key) {
  for (const auto& [k, f] : table())
    if (k == key) return &f;
  return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, f] : table()) out.push_back(k);
  return out;
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  ExperimentConfig c;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& [k, f] : table()) known = known || k.rfind(section + ".", 0) == 0;
      if (!known) throw ConfigError(source, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line_no, "missing key before '='");
    if (key.find('.') == std::string::npos) {
      if (section.empty()) throw ConfigError(source, line_no, "key '" + key + "' outside any section");
      key = section + "." + key;
    }
    const Field* f = find(key);
    if (!f) throw ConfigError(source, line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(source, line_no, "duplicate key '" + key + "'");
    try {
      f->set(c, value);
    } catch (const ValueError& e) {
      throw ConfigError(source, line_no, key + ": " + e.message);
    }
  }
  try {
    validate(c.sim.scenario);
    validate(c.training);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string dump_config(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [key, field] : table()) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      out += (section.empty() ? "[" : "\n[") + s + "]\n";
      section = s;
    }
    out += key.substr(dot + 1) + " = " + field.get(config) + "\n";
  }
  return out;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return dump_config(a) == dump_config(b); }

}  // namespace ntn
