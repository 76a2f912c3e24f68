#include "ntn/mac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ntn/traffic.hpp"

namespace ntn {

std::int64_t SlotMetrics::total_delivered_bits() const {
  return std::accumulate(uav_delivered_bits.begin(), uav_delivered_bits.end(), std::int64_t{0});
}

std::int64_t SlotMetrics::total_dropped_bits() const {
  return std::accumulate(ue_dropped_bits.begin(), ue_dropped_bits.end(), std::int64_t{0});
}

Vec3 ue_position3d(const UeState& ue) { return Vec3(ue.position.x(), ue.position.y(), 0.0); }

double expected_rsrp_dbm(const WorldState& world, int platform, const UeState& ue) {
  const auto& spec = world.spec(platform);
  const Vec3& tx = world.platform_positions[platform];
  const Vec3 rx = ue_position3d(ue);
  const double d = std::max(1.0, distance3d(tx, rx));
  const double e = elevation_deg(rx, tx);
  return spec.tx_power_dbm + spec.antenna_gain_dbi - expected_path_loss_db(spec.carrier_hz, d, e, world.config.channel);
}

Association associate(const WorldState& world) {
  Association a(world.num_ues(), 0);
  for (const auto& ue : world.ues) {
    int best = 0;
    double best_p = expected_rsrp_dbm(world, 0, ue);
    for (int p = 1; p < world.num_platforms(); ++p) {
      const double v = expected_rsrp_dbm(world, p, ue);
      if (v > best_p) {
        best_p = v;
        best = p;
      }
    }
    a[ue.id] = best;
  }
  return a;
}

std::vector<int> cell_members(const Association& association, int platform) {
  std::vector<int> cell;
  for (int u = 0; u < static_cast<int>(association.size()); ++u)
    if (association[u] == platform) cell.push_back(u);
  return cell;
}

std::vector<int> observed_ues(const WorldState& world, const Association& association, int platform, int k) {
  const Vec2 here = world.platform_positions[platform].head<2>();
  std::vector<std::pair<double, int>> ranked;
  for (const auto& ue : world.ues)
    if (association[ue.id] == platform) ranked.emplace_back((ue.position - here).squaredNorm(), ue.id);
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> ids;
  for (int i = 0; i < std::min<int>(k, static_cast<int>(ranked.size())); ++i) ids.push_back(ranked[i].second);
  return ids;
}

Choices decode_schedule(std::span<const VecX> priorities, const Association& association, const WorldState& world,
                        int k_obs) {
  if (static_cast<int>(priorities.size()) != world.num_platforms())
    throw std::invalid_argument("decode_schedule: one priority vector per platform required");
  Choices out(world.num_platforms(), kIdle);
  for (int p = 0; p < world.num_platforms(); ++p) {
    const auto ids = observed_ues(world, association, p, k_obs);
    const auto n = std::min<Eigen::Index>(static_cast<Eigen::Index>(ids.size()), priorities[p].size());
    if (n == 0) continue;
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (priorities[p][i] > priorities[p][best]) best = i;
    out[p] = ids[best];
  }
  return out;
}

Choices rr_schedule(const Association& association, std::int64_t slot, int num_platforms) {
  Choices out(num_platforms, kIdle);
  for (int p = 0; p < num_platforms; ++p) {
    const auto cell = cell_members(association, p);
    if (!cell.empty()) out[p] = cell[static_cast<std::size_t>(slot % static_cast<std::int64_t>(cell.size()))];
  }
  return out;
}

BackhaulState backhaul_rates(const WorldState& world) {
  const auto& ch = world.config.channel;
  const auto& donor = world.spec(0);
  const int n = world.num_nodes();
  const double bw = ch.backhaul_bandwidth_hz / n;
  // Equal split of both band and power keeps the per-node PSD at the donor's.
  const double tx_dbm = donor.tx_power_dbm - 10.0 * std::log10(static_cast<double>(n));
  BackhaulState out;
  out.rate_bps.assign(world.num_platforms(), 0.0);
  for (int p = 1; p < world.num_platforms(); ++p) {
    LinkBudget lb = link_geometry(world.platform_positions[0], world.platform_positions[p], ch.backhaul_carrier_hz,
                                  tx_dbm, donor.antenna_gain_dbi, true, ch);
    finish_link(lb, {}, bw, world.spec(p).noise_figure_db);
    out.rate_bps[p] = lb.rate_bps;
  }
  return out;
}

std::pair<WorldState, SlotMetrics> step_slot(WorldState world, const Choices& choices) {
  const int n_p = world.num_platforms();
  const int n_u = world.num_ues();
  if (static_cast<int>(choices.size()) != n_p)
    throw std::invalid_argument("step_slot: expected " + std::to_string(n_p) + " choices");
  for (int c : choices)
    if (c != kIdle && (c < 0 || c >= n_u)) throw std::invalid_argument("step_slot: chosen UE id out of range");

  const auto& cfg = world.config;
  SlotMetrics m;
  m.slot = world.slot;
  m.choices = choices;
  m.uav_delivered_bits.assign(n_p, 0);
  m.uav_access_bits.assign(n_p, 0);
  m.uav_backhaul_bits.assign(n_p, 0);
  m.ue_delivered_bits.assign(n_u, 0);
  m.ue_dropped_bits.assign(n_u, 0);
  m.ue_arrived_bits.assign(n_u, 0);

  // (1) deadline drops at slot start
  for (int u = 0; u < n_u; ++u)
    m.ue_dropped_bits[u] = drop_expired(world.queues[u], world.slot, cfg.traffic.deadline_slots);

  // (2) arrivals
  std::vector<std::int64_t> before(n_u);
  for (int u = 0; u < n_u; ++u) before[u] = world.queues[u].arrived_bits;
  world = generate_arrivals(std::move(world), cfg.traffic.lambda, cfg.traffic.packet_bits);
  for (int u = 0; u < n_u; ++u) m.ue_arrived_bits[u] = world.queues[u].arrived_bits - before[u];

  // (3) LoS state for every (platform, UE) link, drawn in a fixed order
  std::vector<Vec3> ue_pos(n_u);
  for (const auto& ue : world.ues) ue_pos[ue.id] = ue_position3d(ue);
  std::vector<char> los(static_cast<std::size_t>(n_p) * n_u);
  for (int p = 0; p < n_p; ++p)
    for (int u = 0; u < n_u; ++u) {
      const double e = elevation_deg(ue_pos[u], world.platform_positions[p]);
      const double pl = los_probability(e, cfg.channel.los_a, cfg.channel.los_b);
      los[static_cast<std::size_t>(p) * n_u + u] = world.channel_rng.uniform() < pl;
    }
  auto link_to = [&](int p, int u) {
    const auto& s = world.spec(p);
    return link_geometry(world.platform_positions[p], ue_pos[u], s.carrier_hz, s.tx_power_dbm, s.antenna_gain_dbi,
                         los[static_cast<std::size_t>(p) * n_u + u] != 0, cfg.channel);
  };

  const BackhaulState bh = backhaul_rates(world);
  std::vector<double> interferers;
  for (int p = 0; p < n_p; ++p) {
    const int u = choices[p];
    if (u == kIdle) continue;
    interferers.clear();
    for (int k = 0; k < n_p; ++k)
      if (k != p && choices[k] != kIdle && world.spec(k).carrier_hz == world.spec(p).carrier_hz)
        interferers.push_back(link_to(k, u).rx_power_dbm);
    LinkBudget lb = link_to(p, u);
    finish_link(lb, interferers, world.spec(p).bandwidth_hz, cfg.channel.ue_noise_figure_db);

    // (4) capacity, backhaul-capped for nodes
    std::int64_t capacity = static_cast<std::int64_t>(std::floor(lb.rate_bps * cfg.slot_s));
    m.uav_access_bits[p] = capacity;
    if (p != 0) {
      m.uav_backhaul_bits[p] = static_cast<std::int64_t>(std::floor(bh.rate_bps[p] * cfg.slot_s));
      capacity = std::min(capacity, m.uav_backhaul_bits[p]);
    }

    // (5) service
    auto& q = world.queues[u];
    const std::int64_t head_age = q.head_age(world.slot);
    const std::int64_t got = serve_bits(q, capacity);
    if (got > 0) m.max_served_age = std::max(m.max_served_age, head_age);
    m.uav_delivered_bits[p] += got;
    m.ue_delivered_bits[u] += got;
  }

  // (6) mobility, (7) clock
  world = step_ue_mobility(std::move(world), cfg.slot_s);
  ++world.slot;
  return {std::move(world), std::move(m)};
}

}  // namespace ntn
