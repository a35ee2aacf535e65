#include "vnet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vnet/scenario.hpp"

namespace vnet {

namespace {
constexpr double kFourPi = 12.566370614359172953850573533118;
}

double ChannelParams::attenuation_vehicle() const {
  return std::pow(wavelength_m() / kFourPi, alpha_vehicle);
}

double ChannelParams::attenuation_uav() const {
  return std::pow(wavelength_m() / kFourPi, alpha_uav);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double antenna_gain_dbi(double deviation_deg, const ChannelParams& p) {
  double ratio = std::fabs(deviation_deg) / p.beamwidth_deg;
  return p.boresight_gain_dbi - std::min(ratio * ratio, 26.0);
}

double noise_power_w(const ChannelParams& p) {
  return dbm_to_watts(p.noise_dbm_per_mhz + 10.0 * std::log10(p.bandwidth_hz / 1e6));
}

double sample_nakagami_power(double m, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(m, 1.0 / m);
  return g(rng);
}

double sample_rician_power(double k, std::mt19937_64& rng) {
  double nu = std::sqrt(k / (k + 1.0));
  double sg = std::sqrt(1.0 / (2.0 * (k + 1.0)));
  std::normal_distribution<double> n(0.0, sg);
  double a = nu + n(rng);
  double b = n(rng);
  return a * a + b * b;
}

double sample_fading(bool uav_path, const ChannelParams& p, std::mt19937_64* rng) {
  if (p.fading == FadingMode::Deterministic || rng == nullptr) return 1.0;
  return uav_path ? sample_rician_power(p.rician_k, *rng)
                  : sample_nakagami_power(p.nakagami_m, *rng);
}

double rx_power_w(LinkKind kind, double distance_m, double gain_dbi, double fading,
                  const ChannelParams& p) {
  if (distance_m <= 0.0) throw std::domain_error("rx_power: nonpositive distance");
  double atten, tx_w, alpha;
  if (kind == LinkKind::UavToVehicle) {
    atten = p.attenuation_uav();
    tx_w = p.tx_power_uav_w;
    alpha = p.alpha_uav;
  } else {
    atten = p.attenuation_vehicle();
    tx_w = p.tx_power_vehicle_w;
    alpha = p.alpha_vehicle;
  }
  return atten * tx_w * db_to_linear(gain_dbi) * fading * std::pow(distance_m, -alpha);
}

double rx_power_w(const ScenarioState& s, const Link& link, double gain_dbi,
                  double fading, const ChannelParams& p) {
  double d = link.kind == LinkKind::VehicleToVehicle ? ground_distance(s, link.tx, link.rx)
                                                     : distance_3d(s, link.tx, link.rx);
  return rx_power_w(link.kind, d, gain_dbi, fading, p);
}

double deviation_deg(const ScenarioState& s, int rx, int boresight_tx, int interferer_tx) {
  double L = s.road.length_m;
  double rx_x = s.node_ground_x(rx), rx_y = s.node_ground_y(rx);
  double ax = wrap_dx(rx_x, s.node_ground_x(boresight_tx), L);
  double ay = s.node_ground_y(boresight_tx) - rx_y;
  double bx = wrap_dx(rx_x, s.node_ground_x(interferer_tx), L);
  double by = s.node_ground_y(interferer_tx) - rx_y;
  double na = std::hypot(ax, ay), nb = std::hypot(bx, by);
  if (na < 1e-9 || nb < 1e-9) return 0.0;
  double c = std::clamp((ax * bx + ay * by) / (na * nb), -1.0, 1.0);
  return std::acos(c) * 180.0 / 3.14159265358979323846;
}

SinrBreakdown sinr_at(const ScenarioState& s, const ActiveLink& target,
                      const std::vector<ActiveLink>& active, const ChannelParams& p,
                      std::mt19937_64* rng) {
  SinrBreakdown out;
  bool desired_uav_path = target.link.kind != LinkKind::VehicleToVehicle;
  out.desired_w = rx_power_w(s, target.link, p.boresight_gain_dbi,
                             sample_fading(desired_uav_path, p, rng), p);
  out.noise_w = noise_power_w(p);
  bool rx_is_uav = s.is_uav(target.link.rx);
  for (const auto& al : active) {
    if (al.flow == target.flow) continue;
    if (rx_is_uav) continue;
    if (al.link.tx == target.link.rx) {
      out.si_w += p.self_interference * p.tx_power_vehicle_w;
      continue;
    }
    bool int_uav = s.is_uav(al.link.tx);
    Link cross{al.link.tx, target.link.rx,
               int_uav ? LinkKind::UavToVehicle : LinkKind::VehicleToVehicle};
    double g = antenna_gain_dbi(deviation_deg(s, target.link.rx, target.link.tx, al.link.tx), p);
    out.mui_w += rx_power_w(s, cross, g, sample_fading(int_uav, p, rng), p);
  }
  out.sinr = out.desired_w / (out.noise_w + out.mui_w + out.si_w);
  return out;
}

double rate_bps(double sinr, const ChannelParams& p) {
  return p.spectral_efficiency * p.bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace vnet
