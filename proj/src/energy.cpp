#include "ringhop/energy.hpp"

#include <algorithm>
#include <cmath>

#include "ringhop/error.hpp"

namespace ringhop {

namespace {

void check_shapes(const RingNetwork& net, const HopVector& delta, const ConfigVector& config) {
  if (delta.ring_count() != net.ring_count) {
    throw ValidationError("delta", "hop vector has " + std::to_string(delta.ring_count()) +
                                       " rings, network has " + std::to_string(net.ring_count));
  }
  if (config.ring_count() != net.ring_count) {
    throw ValidationError("config", "config vector has " + std::to_string(config.ring_count()) +
                                        " rings, network has " + std::to_string(net.ring_count));
  }
}

void check_non_negative(double value, const char* field) {
  if (!(value >= 0.0)) throw ValidationError(field, "must be non-negative");
}

}  // namespace

const TxConfig& ConfigVector::at(int ring) const {
  if (ring < 1 || ring > ring_count()) throw ValidationError("config", "ring out of range");
  return entries[static_cast<std::size_t>(ring - 1)];
}

std::string ConfigVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(entries[i].power_level) + "/" + std::to_string(entries[i].rate_level);
  }
  return out;
}

std::vector<double> station_weights(const RingNetwork& net) {
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(net.ring_count));
  for (int r = 1; r <= net.ring_count; ++r) {
    weights.push_back(static_cast<double>(stations_in_ring(net, r)));
  }
  return weights;
}

void summarize(EnergyReport& report, std::span<const double> station_weights) {
  report.bottleneck_j = 0.0;
  report.bottleneck_ring = 0;
  report.network_j = 0.0;
  for (std::size_t i = 0; i < report.rings.size(); ++i) {
    const double e = report.rings[i].total_j();
    if (report.bottleneck_ring == 0 || e > report.bottleneck_j) {
      report.bottleneck_j = e;
      report.bottleneck_ring = static_cast<int>(i) + 1;
    }
    report.network_j += station_weights[i] * e;
  }
}

void summarize(EnergyReport& report, const RingNetwork& net) {
  const auto weights = station_weights(net);
  summarize(report, weights);
}

double state_energy(const StatePowerProfile& p) {
  for (const auto& [value, field] :
       {std::pair{p.lpm_s, "lpm_s"}, {p.cpu_s, "cpu_s"}, {p.sleep_s, "sleep_s"},
        {p.idle_s, "idle_s"}, {p.rx_s, "rx_s"}, {p.lpm_ma, "lpm_ma"}, {p.cpu_ma, "cpu_ma"},
        {p.sleep_ma, "sleep_ma"}, {p.idle_ma, "idle_ma"}, {p.rx_ma, "rx_ma"},
        {p.supply_voltage_v, "supply_voltage_v"}}) {
    check_non_negative(value, field);
  }
  if (p.tx_s.size() != p.tx_ma.size()) {
    throw ValidationError("tx_s", "TX times and currents must have one entry per power level");
  }
  for (std::size_t i = 0; i < p.tx_s.size(); ++i) {
    check_non_negative(p.tx_s[i], "tx_s");
    check_non_negative(p.tx_ma[i], "tx_ma");
  }

  // Charge in mA*s, converted to coulombs once.
  const double processor = p.lpm_s * p.lpm_ma + p.cpu_s * p.cpu_ma;
  double transceiver = p.sleep_s * p.sleep_ma + p.idle_s * p.idle_ma + p.rx_s * p.rx_ma;
  for (std::size_t i = 0; i < p.tx_s.size(); ++i) transceiver += p.tx_s[i] * p.tx_ma[i];
  return (processor + transceiver) * 1e-3 * p.supply_voltage_v;
}

double hop_distance(const RingNetwork& net, const HopVector& delta, int ring) {
  return net.distance(ring) - net.distance(delta.destination(ring));
}

void check_feasible(const RingNetwork& net, const HopVector& delta, const ConfigVector& config,
                    const TransceiverModel& tx, const RadioEnvironment& env) {
  check_shapes(net, delta, config);
  for (int r = 1; r <= net.ring_count; ++r) {
    const auto& c = config.at(r);
    const double d = hop_distance(net, delta, r);
    if (!is_feasible(tx, env, c.power_level, c.rate_level, d)) {
      throw InfeasibleError("ring " + std::to_string(r) + ": configuration " +
                            std::to_string(c.power_level) + "/" + std::to_string(c.rate_level) +
                            " cannot reach " + std::to_string(d) + " m");
    }
  }
}

double tx_energy(const RingNetwork& net, const HopVector& delta, const ConnectivityMatrix& lambda,
                 const ConfigVector& config, const PacketConfig& packet,
                 const TransceiverModel& tx, const RadioEnvironment& env, int ring) {
  check_shapes(net, delta, config);
  const auto& c = config.at(ring);
  if (!is_feasible(tx, env, c.power_level, c.rate_level, hop_distance(net, delta, ring))) {
    throw InfeasibleError("ring " + std::to_string(ring) + ": configuration does not close the hop");
  }
  const auto packets =
      packets_tx(payloads_aggregated(lambda, net.children_ratio, ring), packet.max_payloads());
  return airtime_energy(packets, packet.packet_bits(), tx.rate(c.rate_level).rate_bps,
                        tx.power(c.power_level).current_ma, env.supply_voltage_v);
}

double rx_energy(const RingNetwork& net, const HopVector& delta, const ConnectivityMatrix& lambda,
                 const ConfigVector& config, const PacketConfig& packet,
                 const TransceiverModel& tx, const RadioEnvironment& env, int ring) {
  check_shapes(net, delta, config);
  double energy = 0.0;
  for (const auto& child : direct_child_rings(delta, net.children_ratio, ring)) {
    const auto packets = packets_tx(payloads_aggregated(lambda, net.children_ratio, child.ring),
                                    packet.max_payloads());
    energy += static_cast<double>(child.per_parent) *
              airtime_energy(packets, packet.packet_bits(),
                             tx.rate(config.at(child.ring).rate_level).rate_bps, tx.rx_current_ma,
                             env.supply_voltage_v);
  }
  return energy;
}

EnergyReport energy_report(const RingNetwork& net, const HopVector& delta,
                           const ConfigVector& config, const PacketConfig& packet,
                           const TransceiverModel& tx, const RadioEnvironment& env) {
  delta.validate();
  packet.validate();
  check_feasible(net, delta, config, tx, env);
  const auto lambda = connectivity_matrix(delta);
  EnergyReport report;
  report.rings.reserve(static_cast<std::size_t>(net.ring_count));
  for (int r = 1; r <= net.ring_count; ++r) {
    report.rings.push_back({tx_energy(net, delta, lambda, config, packet, tx, env, r),
                            rx_energy(net, delta, lambda, config, packet, tx, env, r)});
  }
  summarize(report, net);
  return report;
}

double slot_time(const RingNetwork& net, const HopVector& delta, const PacketConfig& packet,
                 const TransceiverModel& tx) {
  const auto traffic = ring_traffic(delta, net.children_ratio, packet);
  const auto worst = *std::max_element(traffic.packets.begin(), traffic.packets.end());
  return static_cast<double>(worst) * packet.packet_bits() / tx.slowest_rate_bps();
}

}  // namespace ringhop
