#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ringhop/energy.hpp"
#include "ringhop/radio.hpp"
#include "ringhop/topology.hpp"
#include "ringhop/traffic.hpp"

namespace ringhop {

enum class RoutingModel { SingleHop, NextRingHop, OptimalHop };

std::string_view to_string(RoutingModel model);
/// "single-hop", "next-ring-hop", "optimal-hop" (also "SH", "NRH", "OH").
RoutingModel parse_routing_model(std::string_view text);

/// Everything the search needs about one deployment.
struct Deployment {
  RingNetwork network;
  TransceiverModel transceiver;
  RadioEnvironment environment;
  PacketConfig packet;
};

/// Default cap on joint configuration assignments examined for one hop vector.
inline constexpr std::uint64_t kDefaultAssignmentCap = 50'000'000;
/// Relative tolerance under which two energies count as equal.
inline constexpr double kEnergyTieTolerance = 1e-9;

struct SearchOptions {
  /// Consider every feasible (power, rate) pair instead of the dominance-pruned set.
  bool exhaustive = false;
  /// Worker threads for the hop-vector scan; 0 picks default_thread_count().
  int threads = 1;
  /// Lift the ring-count guard and the per-combo assignment cap.
  bool override_guards = false;
  std::uint64_t assignment_cap = kDefaultAssignmentCap;
};

/// RINGHOP_THREADS if set and positive, otherwise the hardware concurrency.
int default_thread_count();

struct SearchStats {
  std::uint64_t combos_evaluated = 0;
  std::uint64_t combos_feasible = 0;
  /// Complete joint assignments whose energy was evaluated.
  std::uint64_t assignments_evaluated = 0;
  /// Partial assignments abandoned because a finished ring already exceeded the incumbent.
  std::uint64_t branches_cut = 0;
  /// Feasible (power, rate) pairs dropped by dominance, summed over rings and combos.
  std::uint64_t configs_pruned = 0;

  SearchStats& operator+=(const SearchStats& other);
  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct RoutingResult {
  RoutingModel model = RoutingModel::OptimalHop;
  HopVector delta;
  ConfigVector config;
  EnergyReport report;
  std::vector<std::int64_t> payloads;  // n_p per ring
  std::vector<std::int64_t> packets;   // n_DP^tx per ring
  SearchStats stats;

  friend bool operator==(const RoutingResult&, const RoutingResult&) = default;
};

struct ImprovementRatios {
  double rho_sh = 1.0;
  double rho_nrh = 1.0;

  friend bool operator==(const ImprovementRatios&, const ImprovementRatios&) = default;
};

/// Feasible configurations for a hop of `distance_m`. Without `exhaustive`,
/// each rate keeps its cheapest feasible power level and entries dominated
/// on both TX cost (current/rate) and rate are dropped. Sorted by (power, rate).
std::vector<TxConfig> candidate_configs_for_distance(const TransceiverModel& tx,
                                                     const RadioEnvironment& env,
                                                     double distance_m, bool exhaustive = false);

std::vector<TxConfig> candidate_configs(const Deployment& deployment, const HopVector& delta,
                                        int ring, bool exhaustive = false);

struct ComboBest {
  ConfigVector config;
  double bottleneck_j = 0.0;
  double network_j = 0.0;
  SearchStats stats;
};

/// Min-max search over joint configurations for one hop vector. Ties on
/// bottleneck energy go to the smaller network energy, then the
/// lexicographically smaller configuration. Empty when some ring has no
/// feasible configuration.
std::optional<ComboBest> best_configs_for_combo(const Deployment& deployment,
                                                const HopVector& delta,
                                                const SearchOptions& options = {});

/// Optimal-hop: best (delta, C) over all R! hop vectors.
RoutingResult optimize(const Deployment& deployment, const SearchOptions& options = {});

/// Single-hop or next-ring-hop with the best configurations for the fixed
/// hop vector. Passing OptimalHop forwards to optimize().
RoutingResult baseline(RoutingModel model, const Deployment& deployment,
                       const SearchOptions& options = {});

/// Evaluate a fixed hop vector (used by baseline).
RoutingResult evaluate_hop_vector(RoutingModel model, const HopVector& delta,
                                  const Deployment& deployment, const SearchOptions& options = {});

ImprovementRatios improvement_ratios(const RoutingResult& single_hop,
                                     const RoutingResult& next_ring_hop,
                                     const RoutingResult& optimal_hop);
ImprovementRatios improvement_ratios(const Deployment& deployment,
                                     const SearchOptions& options = {});

}  // namespace ringhop
