#pragma once

// Air-to-ground and air-to-air link budgets: free-space path loss with an
// elevation-dependent LoS probability and additive excess loss.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "ntn/types.hpp"

namespace ntn {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

struct ChannelConfig {
  double los_a = 9.61;
  double los_b = 0.16;
  double eta_los_db = 1.0;
  double eta_nlos_db = 20.0;
  double ue_noise_figure_db = 7.0;
  double backhaul_carrier_hz = 3.5e9;
  double backhaul_bandwidth_hz = 50e6;
};

struct LinkBudget {
  double distance_m = 0.0;
  double elevation_deg = 0.0;
  bool los = true;
  double path_loss_db = 0.0;
  double rx_power_dbm = 0.0;
  double sinr_linear = 0.0;
  double rate_bps = 0.0;
};

template <typename Derived>
typename Derived::Scalar distance3d(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  return (a - b).norm();
}

// Elevation of `high` as seen from `low`, in degrees; 90 when co-located.
template <typename Derived>
typename Derived::Scalar elevation_deg(const Eigen::MatrixBase<Derived>& low, const Eigen::MatrixBase<Derived>& high) {
  using Scalar = typename Derived::Scalar;
  const Scalar d = (high - low).norm();
  if (d <= Scalar(0)) return Scalar(90);
  const Scalar s = std::clamp((high.z() - low.z()) / d, Scalar(-1), Scalar(1));
  return std::asin(s) * Scalar(180) / std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
Scalar los_probability(Scalar elevation_deg, Scalar a, Scalar b) {
  return Scalar(1) / (Scalar(1) + a * std::exp(-b * (elevation_deg - a)));
}

template <typename Scalar>
Scalar fspl_db(Scalar carrier_hz, Scalar distance_m) {
  return Scalar(20) * std::log10(Scalar(4) * std::numbers::pi_v<Scalar> * distance_m * carrier_hz /
                                 Scalar(kSpeedOfLight));
}

template <typename Scalar>
Scalar path_loss_db(Scalar carrier_hz, Scalar distance_m, bool los, Scalar eta_los_db, Scalar eta_nlos_db) {
  return fspl_db(carrier_hz, distance_m) + (los ? eta_los_db : eta_nlos_db);
}

inline double path_loss_db(double carrier_hz, double distance_m, bool los, const ChannelConfig& cfg) {
  return path_loss_db(carrier_hz, distance_m, los, cfg.eta_los_db, cfg.eta_nlos_db);
}

// Path loss averaged over the LoS/NLoS excess, used for fading-free association.
inline double expected_path_loss_db(double carrier_hz, double distance_m, double elevation, const ChannelConfig& cfg) {
  const double p = los_probability(elevation, cfg.los_a, cfg.los_b);
  return fspl_db(carrier_hz, distance_m) + p * cfg.eta_los_db + (1.0 - p) * cfg.eta_nlos_db;
}

template <typename Scalar>
Scalar dbm_to_mw(Scalar dbm) {
  return std::pow(Scalar(10), dbm / Scalar(10));
}

template <typename Scalar>
Scalar mw_to_dbm(Scalar mw) {
  return Scalar(10) * std::log10(mw);
}

template <typename Scalar>
Scalar noise_power_dbm(Scalar bandwidth_hz, Scalar noise_figure_db) {
  return Scalar(kThermalNoiseDbmPerHz) + Scalar(10) * std::log10(bandwidth_hz) + noise_figure_db;
}

// Linear SINR with all powers combined in milliwatts.
inline double sinr(double serving_rx_dbm, std::span<const double> interferer_rx_dbm, double bandwidth_hz,
                   double noise_figure_db) {
  double denom = dbm_to_mw(noise_power_dbm(bandwidth_hz, noise_figure_db));
  for (double p : interferer_rx_dbm) denom += dbm_to_mw(p);
  return dbm_to_mw(serving_rx_dbm) / denom;
}

template <typename Scalar>
Scalar shannon_rate(Scalar sinr_linear, Scalar bandwidth_hz) {
  if (sinr_linear <= Scalar(0) || bandwidth_hz <= Scalar(0)) return Scalar(0);
  return bandwidth_hz * std::log2(Scalar(1) + sinr_linear);
}

// Geometry, loss and received power of a link; SINR and rate are left for the
// caller, who knows the interference set.
inline LinkBudget link_geometry(const Vec3& tx, const Vec3& rx, double carrier_hz, double tx_power_dbm,
                                double antenna_gain_dbi, bool los, const ChannelConfig& cfg) {
  LinkBudget lb;
  lb.distance_m = std::max(1.0, distance3d(tx, rx));
  lb.elevation_deg = rx.z() <= tx.z() ? elevation_deg(rx, tx) : elevation_deg(tx, rx);
  lb.los = los;
  lb.path_loss_db = path_loss_db(carrier_hz, lb.distance_m, los, cfg);
  lb.rx_power_dbm = tx_power_dbm + antenna_gain_dbi - lb.path_loss_db;
  return lb;
}

inline void finish_link(LinkBudget& lb, std::span<const double> interferer_rx_dbm, double bandwidth_hz,
                        double noise_figure_db) {
  lb.sinr_linear = sinr(lb.rx_power_dbm, interferer_rx_dbm, bandwidth_hz, noise_figure_db);
  lb.rate_bps = shannon_rate(lb.sinr_linear, bandwidth_hz);
}

}  // namespace ntn
