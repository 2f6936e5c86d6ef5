#include "ringhop/traffic.hpp"

#include <algorithm>

#include "ringhop/error.hpp"
#include "ringhop/topology.hpp"

namespace ringhop {

int HopVector::hop(int ring) const {
  if (ring < 1 || ring > ring_count()) {
    throw ValidationError("delta", "ring " + std::to_string(ring) + " outside hop vector");
  }
  return delta[static_cast<std::size_t>(ring - 1)];
}

void HopVector::validate() const {
  if (delta.empty()) throw ValidationError("delta", "hop vector is empty");
  for (int r = 1; r <= ring_count(); ++r) {
    const int h = delta[static_cast<std::size_t>(r - 1)];
    if (h < 1 || h > r) {
      throw ValidationError("delta[" + std::to_string(r - 1) + "]",
                            "hop length " + std::to_string(h) + " must lie in 1.." +
                                std::to_string(r));
    }
  }
}

std::string HopVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(delta[i]);
  }
  return out + ")";
}

HopVector HopVector::single_hop(int ring_count) {
  HopVector v;
  for (int r = 1; r <= ring_count; ++r) v.delta.push_back(r);
  return v;
}

HopVector HopVector::next_ring_hop(int ring_count) {
  return HopVector{std::vector<int>(static_cast<std::size_t>(ring_count), 1)};
}

std::uint64_t hop_combination_count(int ring_count) {
  if (ring_count < 1 || ring_count > kMaxRings) {
    throw ValidationError("R", "ring count must lie in 1.." + std::to_string(kMaxRings));
  }
  std::uint64_t count = 1;
  for (int r = 2; r <= ring_count; ++r) count *= static_cast<std::uint64_t>(r);
  return count;
}

void hop_combination_into(int ring_count, std::uint64_t index, HopVector& out) {
  if (index >= hop_combination_count(ring_count)) {
    throw ValidationError("index", "hop combination index out of range");
  }
  // Mixed radix: ring r contributes a digit in base r, ring R least significant.
  out.delta.resize(static_cast<std::size_t>(ring_count));
  for (int r = ring_count; r >= 1; --r) {
    out.delta[static_cast<std::size_t>(r - 1)] = static_cast<int>(index % r) + 1;
    index /= static_cast<std::uint64_t>(r);
  }
}

HopVector hop_combination_at(int ring_count, std::uint64_t index) {
  HopVector v;
  hop_combination_into(ring_count, index, v);
  return v;
}

std::vector<HopVector> enumerate_hop_combinations(int ring_count, bool override_guard) {
  if (ring_count > kMaxRingsWithoutOverride && !override_guard) {
    throw GuardError("R = " + std::to_string(ring_count) + " exceeds the enumeration guard of " +
                     std::to_string(kMaxRingsWithoutOverride) + " rings");
  }
  const auto count = hop_combination_count(ring_count);
  std::vector<HopVector> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(hop_combination_at(ring_count, i));
  return out;
}

ConnectivityMatrix::ConnectivityMatrix(int ring_count)
    : size_(ring_count), cells_(static_cast<std::size_t>(ring_count * ring_count), 0) {}

bool ConnectivityMatrix::operator()(int ring, int origin) const {
  return cells_[static_cast<std::size_t>((ring - 1) * size_ + (origin - 1))] != 0;
}

void ConnectivityMatrix::set(int ring, int origin) {
  cells_[static_cast<std::size_t>((ring - 1) * size_ + (origin - 1))] = 1;
}

std::vector<std::vector<int>> ConnectivityMatrix::rows() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(size_));
  for (int r = 1; r <= size_; ++r) {
    for (int i = 1; i <= size_; ++i) out[static_cast<std::size_t>(r - 1)].push_back((*this)(r, i));
  }
  return out;
}

ConnectivityMatrix connectivity_matrix(const HopVector& delta) {
  delta.validate();
  ConnectivityMatrix lambda(delta.ring_count());
  for (int origin = 1; origin <= delta.ring_count(); ++origin) {
    for (int ring = origin; ring > 0; ring = delta.destination(ring)) lambda.set(ring, origin);
  }
  return lambda;
}

std::int64_t payloads_aggregated(const ConnectivityMatrix& lambda, int children_ratio,
                                 int ring) {
  if (ring < 1 || ring > lambda.size()) throw ValidationError("ring", "ring out of range");
  std::int64_t total = 0;
  std::int64_t descendants = 1;  // c^(i - ring)
  for (int i = ring; i <= lambda.size(); ++i) {
    if (lambda(ring, i)) total += descendants;
    if (i < lambda.size()) descendants *= children_ratio;
  }
  return total;
}

int PacketConfig::max_payloads() const {
  if (!aggregation) return 1;
  return (packet_bytes - header_bytes) / payload_bytes;
}

void PacketConfig::validate() const {
  if (payload_bytes < 1) throw ValidationError("packet.payload_bytes", "must be >= 1");
  if (header_bytes < 0) throw ValidationError("packet.header_bytes", "must be >= 0");
  if (packet_bytes < header_bytes + payload_bytes) {
    throw ValidationError("packet.packet_bytes",
                          "packet size " + std::to_string(packet_bytes) +
                              " cannot hold header plus one payload (" +
                              std::to_string(header_bytes + payload_bytes) + ")");
  }
}

std::int64_t packets_tx(std::int64_t payloads, std::int64_t max_payloads) {
  if (max_payloads < 1) throw ValidationError("max_payloads", "must be >= 1");
  if (payloads < 0) throw ValidationError("payloads", "must be >= 0");
  return (payloads + max_payloads - 1) / max_payloads;
}

std::vector<ChildRing> direct_child_rings(const HopVector& delta, int children_ratio, int ring) {
  if (ring < 0 || ring > delta.ring_count()) throw ValidationError("ring", "ring out of range");
  std::vector<ChildRing> out;
  for (int j = ring + 1; j <= delta.ring_count(); ++j) {
    // The gateway has no tree position; count per branch instead (one ring-1 STA).
    if (delta.destination(j) == ring) {
      out.push_back({j, ipow(children_ratio, j - std::max(ring, 1))});
    }
  }
  return out;
}

RingTraffic ring_traffic(const HopVector& delta, int children_ratio, const PacketConfig& packet) {
  const auto lambda = connectivity_matrix(delta);
  const int rings = delta.ring_count();
  const int max_payloads = packet.max_payloads();
  RingTraffic traffic;
  traffic.payloads.reserve(static_cast<std::size_t>(rings));
  traffic.packets.reserve(static_cast<std::size_t>(rings));
  for (int r = 1; r <= rings; ++r) {
    const auto payloads = payloads_aggregated(lambda, children_ratio, r);
    traffic.payloads.push_back(payloads);
    traffic.packets.push_back(packets_tx(payloads, max_payloads));
  }
  traffic.children.reserve(static_cast<std::size_t>(rings + 1));
  for (int r = 0; r <= rings; ++r) {
    traffic.children.push_back(direct_child_rings(delta, children_ratio, r));
  }
  return traffic;
}

}  // namespace ringhop
