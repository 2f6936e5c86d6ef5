#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringhop/radio.hpp"
#include "ringhop/topology.hpp"
#include "ringhop/traffic.hpp"

namespace ringhop {

/// Per-ring transmission configuration, entries[r - 1] for ring r.
struct ConfigVector {
  std::vector<TxConfig> entries;

  int ring_count() const { return static_cast<int>(entries.size()); }
  const TxConfig& at(int ring) const;
  /// "5/1 4/3 1/4" style, power/rate per ring.
  std::string to_string() const;

  friend auto operator<=>(const ConfigVector&, const ConfigVector&) = default;
};

struct RingEnergy {
  double tx_j = 0.0;
  double rx_j = 0.0;

  double total_j() const { return tx_j + rx_j; }

  friend bool operator==(const RingEnergy&, const RingEnergy&) = default;
};

struct EnergyReport {
  std::vector<RingEnergy> rings;  // rings[r - 1]
  double bottleneck_j = 0.0;
  int bottleneck_ring = 0;
  double network_j = 0.0;

  friend bool operator==(const EnergyReport&, const EnergyReport&) = default;
};

/// Fill bottleneck and network totals from the per-ring entries. The
/// bottleneck is the lowest ring attaining the maximum.
void summarize(EnergyReport& report, const RingNetwork& net);
/// Same, with stations_in_ring(r) precomputed as station_weights[r - 1].
void summarize(EnergyReport& report, std::span<const double> station_weights);
std::vector<double> station_weights(const RingNetwork& net);

/// Time and current spent in each microprocessor and transceiver state.
struct StatePowerProfile {
  double lpm_s = 0.0;
  double cpu_s = 0.0;
  double sleep_s = 0.0;
  double idle_s = 0.0;
  double rx_s = 0.0;
  std::vector<double> tx_s;  // per power level
  double lpm_ma = 0.0;
  double cpu_ma = 0.0;
  double sleep_ma = 0.0;
  double idle_ma = 0.0;
  double rx_ma = 0.0;
  std::vector<double> tx_ma;  // per power level
  double supply_voltage_v = 3.0;
};

/// Microprocessor plus transceiver energy in joules.
double state_energy(const StatePowerProfile& profile);

/// Energy in joules of `packets` packets of `packet_bits` at `rate_bps`
/// drawing `current_ma`.
inline double airtime_energy(std::int64_t packets, double packet_bits, double rate_bps,
                             double current_ma, double voltage_v) {
  return static_cast<double>(packets) * (packet_bits / rate_bps) * (current_ma * 1e-3) *
         voltage_v;
}

/// Radial distance from ring r to its destination ring.
double hop_distance(const RingNetwork& net, const HopVector& delta, int ring);

/// Throws InfeasibleError naming the first ring whose configuration cannot
/// close its hop.
void check_feasible(const RingNetwork& net, const HopVector& delta, const ConfigVector& config,
                    const TransceiverModel& tx, const RadioEnvironment& env);

double tx_energy(const RingNetwork& net, const HopVector& delta, const ConnectivityMatrix& lambda,
                 const ConfigVector& config, const PacketConfig& packet,
                 const TransceiverModel& tx, const RadioEnvironment& env, int ring);

/// Listening energy of one STA in ring r, summed over its direct children
/// at each child's configured rate.
double rx_energy(const RingNetwork& net, const HopVector& delta, const ConnectivityMatrix& lambda,
                 const ConfigVector& config, const PacketConfig& packet,
                 const TransceiverModel& tx, const RadioEnvironment& env, int ring);

EnergyReport energy_report(const RingNetwork& net, const HopVector& delta,
                           const ConfigVector& config, const PacketConfig& packet,
                           const TransceiverModel& tx, const RadioEnvironment& env);

/// TDMA slot length: the largest per-STA packet burst at the slowest rate.
double slot_time(const RingNetwork& net, const HopVector& delta, const PacketConfig& packet,
                 const TransceiverModel& tx);

}  // namespace ringhop
