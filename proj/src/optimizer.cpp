#include "ringhop/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "ringhop/error.hpp"

namespace ringhop {

namespace {

constexpr std::uint64_t kChunkSize = 512;

bool close(double a, double b) {
  return std::abs(a - b) <= kEnergyTieTolerance * std::max(std::abs(a), std::abs(b));
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

/// Transmit cost per bit of a configuration, proportional to its TX energy.
double cost_per_bit(const TransceiverModel& tx, const TxConfig& c) {
  return tx.power(c.power_level).current_ma / tx.rate(c.rate_level).rate_bps;
}

struct Candidates {
  std::vector<TxConfig> kept;
  std::uint64_t dropped = 0;
};

Candidates build_candidates(const TransceiverModel& tx, const RadioEnvironment& env,
                            double distance_m, bool exhaustive) {
  Candidates out;
  std::uint64_t feasible = 0;
  std::vector<TxConfig> per_rate;
  for (int s = 1; s <= tx.rate_level_count(); ++s) {
    std::optional<TxConfig> cheapest;
    for (int p = 1; p <= tx.power_level_count(); ++p) {
      if (!is_feasible(tx, env, p, s, distance_m)) continue;
      ++feasible;
      const TxConfig c{p, s};
      if (exhaustive) out.kept.push_back(c);
      // Cheapest current; equal currents go to the lower output.
      if (!cheapest || tx.power(p).current_ma <= tx.power(cheapest->power_level).current_ma) {
        cheapest = c;
      }
    }
    if (cheapest) per_rate.push_back(*cheapest);
  }
  if (exhaustive) return out;

  // (a) dominates (b) when it is no costlier per bit and no slower, so it can
  // raise neither its own TX energy nor its parent's listening time.
  const auto dominates = [&](const TxConfig& a, const TxConfig& b) {
    return cost_per_bit(tx, a) <= cost_per_bit(tx, b) &&
           tx.rate(a.rate_level).rate_bps >= tx.rate(b.rate_level).rate_bps;
  };
  for (std::size_t i = 0; i < per_rate.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < per_rate.size() && !dominated; ++j) {
      if (i == j || !dominates(per_rate[j], per_rate[i])) continue;
      // Mutual dominance means identical cost and rate: keep the earlier one.
      dominated = !dominates(per_rate[i], per_rate[j]) || j < i;
    }
    if (!dominated) out.kept.push_back(per_rate[i]);
  }
  std::sort(out.kept.begin(), out.kept.end());
  out.dropped = feasible - out.kept.size();
  return out;
}

struct Option {
  TxConfig config;
  double tx_j = 0.0;
  /// Energy a parent spends listening to one STA of this ring.
  double rx_child_j = 0.0;
};

struct ChildLink {
  int ring = 0;
  double per_parent = 0.0;
};

/// Per-worker search state. Candidate sets depend only on (ring, hop length)
/// and are computed once; per-combo buffers are reused.
class ComboSearcher {
 public:
  ComboSearcher(const Deployment& deployment, const SearchOptions& options)
      : deployment_(deployment),
        options_(options),
        rings_(deployment.network.ring_count),
        weights_(station_weights(deployment.network)) {
    const auto& net = deployment.network;
    candidates_.resize(static_cast<std::size_t>(rings_));
    for (int r = 1; r <= rings_; ++r) {
      for (int k = 1; k <= r; ++k) {
        const double d = net.distance(r) - net.distance(r - k);
        candidates_[static_cast<std::size_t>(r - 1)].push_back(build_candidates(
            deployment.transceiver, deployment.environment, d, options.exhaustive));
      }
    }
    const auto n = static_cast<std::size_t>(rings_ + 1);
    payloads_.resize(n);
    packets_.resize(n);
    children_.resize(n);
    options_by_ring_.resize(n);
    choice_.resize(n);
    best_choice_.resize(n);
    energy_.resize(n);
    min_tx_prefix_.resize(n);
  }

  std::optional<ComboBest> search(const HopVector& delta) {
    stats_ = SearchStats{};
    stats_.combos_evaluated = 1;
    if (!prepare(delta)) return std::nullopt;

    has_best_ = false;
    descend(rings_, 0.0, 0.0);
    if (!has_best_) return std::nullopt;
    stats_.combos_feasible = 1;

    ComboBest best;
    best.bottleneck_j = best_bottleneck_;
    best.network_j = best_network_;
    best.config.entries.reserve(static_cast<std::size_t>(rings_));
    for (int r = 1; r <= rings_; ++r) best.config.entries.push_back(option(r, best_choice_[r]).config);
    best.stats = stats_;
    return best;
  }

  const SearchStats& last_stats() const { return stats_; }

 private:
  const Option& option(int ring, std::size_t index) const {
    return options_by_ring_[static_cast<std::size_t>(ring)][index];
  }

  bool prepare(const HopVector& delta) {
    const auto& tx = deployment_.transceiver;
    const auto& packet = deployment_.packet;
    const int c = deployment_.network.children_ratio;
    const double bits = packet.packet_bits();
    const double volts = deployment_.environment.supply_voltage_v;
    const std::int64_t max_payloads = packet.max_payloads();

    // n_p(r) = sum over origins i whose route passes r of c^(i - r).
    std::fill(payloads_.begin(), payloads_.end(), 0);
    for (int origin = 1; origin <= rings_; ++origin) {
      for (int r = origin; r > 0; r = delta.destination(r)) {
        payloads_[static_cast<std::size_t>(r)] += ipow(c, origin - r);
      }
    }
    for (auto& list : children_) list.clear();
    for (int j = 1; j <= rings_; ++j) {
      packets_[static_cast<std::size_t>(j)] =
          packets_tx(payloads_[static_cast<std::size_t>(j)], max_payloads);
      const int parent = delta.destination(j);
      children_[static_cast<std::size_t>(parent)].push_back(
          {j, static_cast<double>(ipow(c, j - parent))});
    }

    std::uint64_t product = 1;
    for (int r = 1; r <= rings_; ++r) {
      const auto& cand =
          candidates_[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(delta.hop(r) - 1)];
      stats_.configs_pruned += cand.dropped;
      auto& opts = options_by_ring_[static_cast<std::size_t>(r)];
      opts.clear();
      if (cand.kept.empty()) return false;
      const auto packets = packets_[static_cast<std::size_t>(r)];
      for (const auto& config : cand.kept) {
        const double rate = tx.rate(config.rate_level).rate_bps;
        opts.push_back({config,
                        airtime_energy(packets, bits, rate, tx.power(config.power_level).current_ma,
                                       volts),
                        airtime_energy(packets, bits, rate, tx.rx_current_ma, volts)});
      }
      // Cheapest first so the first complete assignment is a tight incumbent.
      std::stable_sort(opts.begin(), opts.end(), [](const Option& a, const Option& b) {
        return a.tx_j < b.tx_j;
      });
      product = product > std::numeric_limits<std::uint64_t>::max() / opts.size()
                    ? std::numeric_limits<std::uint64_t>::max()
                    : product * opts.size();
      min_tx_prefix_[static_cast<std::size_t>(r)] =
          min_tx_prefix_[static_cast<std::size_t>(r - 1)] +
          weights_[static_cast<std::size_t>(r - 1)] * opts.front().tx_j;
    }
    if (product > options_.assignment_cap && !options_.override_guards) {
      throw GuardError("hop vector " + delta.to_string() + " has " + std::to_string(product) +
                       " joint configurations, above the cap of " +
                       std::to_string(options_.assignment_cap));
    }
    return true;
  }

  // Rings are assigned outermost first, so when ring r is reached all of its
  // children are fixed and e(r) is final.
  void descend(int ring, double partial_max, double partial_network) {
    if (ring == 0) {
      evaluate_leaf();
      return;
    }
    double rx = 0.0;
    for (const auto& child : children_[static_cast<std::size_t>(ring)]) {
      rx += child.per_parent * option(child.ring, choice_[child.ring]).rx_child_j;
    }
    const double weight = weights_[static_cast<std::size_t>(ring - 1)];
    const auto& opts = options_by_ring_[static_cast<std::size_t>(ring)];
    for (std::size_t i = 0; i < opts.size(); ++i) {
      const double e = RingEnergy{opts[i].tx_j, rx}.total_j();
      const double bottleneck = std::max(partial_max, e);
      const double network = partial_network + weight * e;
      if (has_best_ && cannot_improve(bottleneck, network + min_tx_prefix_[ring - 1])) {
        ++stats_.branches_cut;
        continue;
      }
      choice_[ring] = i;
      energy_[ring] = e;
      descend(ring - 1, bottleneck, network);
    }
  }

  // Lower bounds: the bottleneck can only grow, and each unassigned ring
  // adds at least its cheapest TX energy to the network total.
  bool cannot_improve(double bottleneck_bound, double network_bound) const {
    const double tol = kEnergyTieTolerance;
    if (bottleneck_bound * (1.0 - tol) > best_bottleneck_) return true;
    return bottleneck_bound >= best_bottleneck_ * (1.0 - tol) &&
           network_bound * (1.0 - tol) > best_network_;
  }

  void evaluate_leaf() {
    ++stats_.assignments_evaluated;
    double bottleneck = 0.0;
    double network = 0.0;
    for (int r = 1; r <= rings_; ++r) {
      const double e = energy_[r];
      if (r == 1 || e > bottleneck) bottleneck = e;
      network += weights_[static_cast<std::size_t>(r - 1)] * e;
    }
    if (!has_best_ || better_than_best(bottleneck, network)) {
      has_best_ = true;
      best_bottleneck_ = bottleneck;
      best_network_ = network;
      best_choice_ = choice_;
    }
  }

  bool better_than_best(double bottleneck, double network) const {
    if (!close(bottleneck, best_bottleneck_)) return bottleneck < best_bottleneck_;
    if (!close(network, best_network_)) return network < best_network_;
    for (int r = 1; r <= rings_; ++r) {
      const auto& a = option(r, choice_[r]).config;
      const auto& b = option(r, best_choice_[r]).config;
      if (a != b) return a < b;
    }
    return false;
  }

  const Deployment& deployment_;
  SearchOptions options_;
  int rings_;
  std::vector<double> weights_;
  std::vector<std::vector<Candidates>> candidates_;  // [ring - 1][hop - 1]

  std::vector<std::int64_t> payloads_;
  std::vector<std::int64_t> packets_;
  std::vector<std::vector<ChildLink>> children_;
  std::vector<std::vector<Option>> options_by_ring_;
  std::vector<std::size_t> choice_;
  std::vector<std::size_t> best_choice_;
  std::vector<double> energy_;
  std::vector<double> min_tx_prefix_;  // [r] = sum over rings 1..r of weight * cheapest TX

  SearchStats stats_;
  bool has_best_ = false;
  double best_bottleneck_ = 0.0;
  double best_network_ = 0.0;
};

struct Incumbent {
  HopVector delta;
  ComboBest best;
};

/// Total order used by the reduction over hop vectors.
bool better(const Incumbent& a, const Incumbent& b) {
  if (!close(a.best.bottleneck_j, b.best.bottleneck_j)) {
    return a.best.bottleneck_j < b.best.bottleneck_j;
  }
  if (!close(a.best.network_j, b.best.network_j)) return a.best.network_j < b.best.network_j;
  if (a.delta != b.delta) return a.delta < b.delta;
  return a.best.config < b.best.config;
}

void validate_deployment(const Deployment& deployment) {
  deployment.transceiver.validate();
  deployment.environment.validate();
  deployment.packet.validate();
  if (deployment.network.ring_count < 1 ||
      static_cast<int>(deployment.network.distances.size()) != deployment.network.ring_count) {
    throw ValidationError("R", "network is not initialised");
  }
}

RoutingResult finish(RoutingModel model, const HopVector& delta, const ComboBest& best,
                     const Deployment& deployment, const SearchStats& stats) {
  RoutingResult result;
  result.model = model;
  result.delta = delta;
  result.config = best.config;
  result.report = energy_report(deployment.network, delta, best.config, deployment.packet,
                                deployment.transceiver, deployment.environment);
  const auto traffic = ring_traffic(delta, deployment.network.children_ratio, deployment.packet);
  result.payloads = traffic.payloads;
  result.packets = traffic.packets;
  result.stats = stats;
  return result;
}

}  // namespace

std::string_view to_string(RoutingModel model) {
  switch (model) {
    case RoutingModel::SingleHop:
      return "single-hop";
    case RoutingModel::NextRingHop:
      return "next-ring-hop";
    case RoutingModel::OptimalHop:
      return "optimal-hop";
  }
  return "unknown";
}

RoutingModel parse_routing_model(std::string_view text) {
  const auto key = lowercase(text);
  if (key == "single-hop" || key == "sh" || key == "single_hop") return RoutingModel::SingleHop;
  if (key == "next-ring-hop" || key == "nrh" || key == "next_ring_hop") {
    return RoutingModel::NextRingHop;
  }
  if (key == "optimal-hop" || key == "oh" || key == "optimal_hop") return RoutingModel::OptimalHop;
  throw ValidationError("models", "unknown routing model '" + std::string(text) + "'");
}

int default_thread_count() {
  if (const char* env = std::getenv("RINGHOP_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SearchStats& SearchStats::operator+=(const SearchStats& other) {
  combos_evaluated += other.combos_evaluated;
  combos_feasible += other.combos_feasible;
  assignments_evaluated += other.assignments_evaluated;
  branches_cut += other.branches_cut;
  configs_pruned += other.configs_pruned;
  return *this;
}

std::vector<TxConfig> candidate_configs_for_distance(const TransceiverModel& tx,
                                                     const RadioEnvironment& env,
                                                     double distance_m, bool exhaustive) {
  return build_candidates(tx, env, distance_m, exhaustive).kept;
}

std::vector<TxConfig> candidate_configs(const Deployment& deployment, const HopVector& delta,
                                        int ring, bool exhaustive) {
  return candidate_configs_for_distance(deployment.transceiver, deployment.environment,
                                        hop_distance(deployment.network, delta, ring),
                                        exhaustive);
}

std::optional<ComboBest> best_configs_for_combo(const Deployment& deployment,
                                                const HopVector& delta,
                                                const SearchOptions& options) {
  validate_deployment(deployment);
  delta.validate();
  if (delta.ring_count() != deployment.network.ring_count) {
    throw ValidationError("delta", "hop vector length differs from ring count");
  }
  ComboSearcher searcher(deployment, options);
  return searcher.search(delta);
}

RoutingResult optimize(const Deployment& deployment, const SearchOptions& options) {
  validate_deployment(deployment);
  const int rings = deployment.network.ring_count;
  if (rings > kMaxRingsWithoutOverride && !options.override_guards) {
    throw GuardError("R = " + std::to_string(rings) + " exceeds the search guard of " +
                     std::to_string(kMaxRingsWithoutOverride) + " rings");
  }
  const std::uint64_t combos = hop_combination_count(rings);
  const std::uint64_t chunks = (combos + kChunkSize - 1) / kChunkSize;

  std::vector<std::optional<Incumbent>> chunk_best(chunks);
  std::vector<SearchStats> chunk_stats(chunks);
  std::vector<std::exception_ptr> chunk_error(chunks);
  std::atomic<std::uint64_t> next_chunk{0};

  const auto worker = [&] {
    ComboSearcher searcher(deployment, options);
    HopVector delta;
    for (std::uint64_t chunk = next_chunk++; chunk < chunks; chunk = next_chunk++) {
      try {
        const std::uint64_t end = std::min(combos, (chunk + 1) * kChunkSize);
        for (std::uint64_t index = chunk * kChunkSize; index < end; ++index) {
          hop_combination_into(rings, index, delta);
          auto best = searcher.search(delta);
          chunk_stats[chunk] += searcher.last_stats();
          if (!best) continue;
          Incumbent candidate{delta, std::move(*best)};
          if (!chunk_best[chunk] || better(candidate, *chunk_best[chunk])) {
            chunk_best[chunk] = std::move(candidate);
          }
        }
      } catch (...) {
        chunk_error[chunk] = std::current_exception();
      }
    }
  };

  const int requested = options.threads > 0 ? options.threads : default_thread_count();
  const auto workers =
      static_cast<std::size_t>(std::min<std::uint64_t>(static_cast<std::uint64_t>(requested), chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Reduce in chunk order so the outcome does not depend on scheduling.
  std::optional<Incumbent> best;
  SearchStats stats;
  for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
    if (chunk_error[chunk]) std::rethrow_exception(chunk_error[chunk]);
    stats += chunk_stats[chunk];
    if (chunk_best[chunk] && (!best || better(*chunk_best[chunk], *best))) {
      best = std::move(chunk_best[chunk]);
    }
  }
  if (!best) {
    throw InfeasibleError("no hop vector admits a feasible configuration for every ring");
  }
  return finish(RoutingModel::OptimalHop, best->delta, best->best, deployment, stats);
}

RoutingResult evaluate_hop_vector(RoutingModel model, const HopVector& delta,
                                  const Deployment& deployment, const SearchOptions& options) {
  auto best = best_configs_for_combo(deployment, delta, options);
  if (!best) {
    throw InfeasibleError(std::string(to_string(model)) + ": hop vector " + delta.to_string() +
                          " has a ring with no feasible configuration");
  }
  const auto stats = best->stats;
  return finish(model, delta, *best, deployment, stats);
}

RoutingResult baseline(RoutingModel model, const Deployment& deployment,
                       const SearchOptions& options) {
  const int rings = deployment.network.ring_count;
  switch (model) {
    case RoutingModel::SingleHop:
      return evaluate_hop_vector(model, HopVector::single_hop(rings), deployment, options);
    case RoutingModel::NextRingHop:
      return evaluate_hop_vector(model, HopVector::next_ring_hop(rings), deployment, options);
    case RoutingModel::OptimalHop:
      return optimize(deployment, options);
  }
  throw ValidationError("model", "unknown routing model");
}

ImprovementRatios improvement_ratios(const RoutingResult& single_hop,
                                     const RoutingResult& next_ring_hop,
                                     const RoutingResult& optimal_hop) {
  const double reference = optimal_hop.report.bottleneck_j;
  if (!(reference > 0.0)) {
    throw ValidationError("optimal-hop", "bottleneck energy is zero; ratios undefined");
  }
  return {single_hop.report.bottleneck_j / reference, next_ring_hop.report.bottleneck_j / reference};
}

ImprovementRatios improvement_ratios(const Deployment& deployment, const SearchOptions& options) {
  return improvement_ratios(baseline(RoutingModel::SingleHop, deployment, options),
                            baseline(RoutingModel::NextRingHop, deployment, options),
                            optimize(deployment, options));
}

}  // namespace ringhop
