#pragma once

#include <random>
#include <vector>

#include "vnet/scenario.hpp"

namespace vnet {

enum class FadingMode { Deterministic, Stochastic };

struct ChannelParams {
  double carrier_hz = 30e9;
  double bandwidth_hz = 2000e6;
  double noise_dbm_per_mhz = -134.0;
  double tx_power_vehicle_w = 10.0;  // 40 dBm
  double tx_power_uav_w = 1.0;       // 30 dBm
  double spectral_efficiency = 0.8;
  double nakagami_m = 2.0;
  double rician_k = 7.943282347242816;  // 9 dB
  double alpha_vehicle = 2.5;
  double alpha_uav = 2.0;
  double self_interference = 1e-9;  // residual loopback power fraction, linear
  double boresight_gain_dbi = 20.0;
  double beamwidth_deg = 30.0;
  FadingMode fading = FadingMode::Stochastic;

  double wavelength_m() const { return 3.0e8 / carrier_hz; }
  double attenuation_vehicle() const;  // (lambda/4pi)^alpha_vehicle
  double attenuation_uav() const;      // (lambda/4pi)^alpha_uav
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double v);

// Directional gain at a deviation angle from boresight, dBi; flat floor 26 dB down.
double antenna_gain_dbi(double deviation_deg, const ChannelParams& p);

double noise_power_w(const ChannelParams& p);

enum class LinkKind { VehicleToVehicle, VehicleToUav, UavToVehicle };

struct Link {
  int tx = -1;
  int rx = -1;
  LinkKind kind = LinkKind::VehicleToVehicle;
};

inline bool same_link(const Link& a, const Link& b) {
  return a.tx == b.tx && a.rx == b.rx;
}

// Unit-mean power fading. Gamma(shape m, mean 1) and noncentral-chi-square (K factor).
double sample_nakagami_power(double m, std::mt19937_64& rng);
double sample_rician_power(double k, std::mt19937_64& rng);
// Dispatch on whether the path touches a UAV; returns 1 in Deterministic mode.
double sample_fading(bool uav_path, const ChannelParams& p, std::mt19937_64* rng);

// Received power over a path of the given kind. gain_dbi is the total antenna
// gain applied to the path; fading is a linear power factor.
// Throws std::domain_error when distance_m is not positive.
double rx_power_w(LinkKind kind, double distance_m, double gain_dbi, double fading,
                  const ChannelParams& p);
// Same, with the distance (planar wrapped for V2V, 3D otherwise) from geometry.
double rx_power_w(const ScenarioState& s, const Link& link, double gain_dbi,
                  double fading, const ChannelParams& p);

struct ActiveLink {
  int flow = -1;
  int hop = 0;  // 0-based hop index within the flow's path
  Link link;
};

struct SinrBreakdown {
  double desired_w = 0.0;
  double mui_w = 0.0;
  double si_w = 0.0;
  double noise_w = 0.0;
  double sinr = 0.0;
};

// SINR of `target` given everything in `active` transmitting in the same slot.
// Same-flow entries are skipped. UAV receivers see noise only. rng may be null
// in Deterministic mode; in Stochastic mode it supplies one power-fading draw
// per (interferer, receiver) pair plus one for the desired path.
SinrBreakdown sinr_at(const ScenarioState& s, const ActiveLink& target,
                      const std::vector<ActiveLink>& active, const ChannelParams& p,
                      std::mt19937_64* rng);

double rate_bps(double sinr, const ChannelParams& p);

// Deviation of the interferer direction from the receiver's boresight, degrees.
// The boresight points at the receiver's own transmitter (ground projections).
double deviation_deg(const ScenarioState& s, int rx, int boresight_tx, int interferer_tx);

}  // namespace vnet
