#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ringhop {

/// Rings beyond this need an explicit override to enumerate (10! = 3,628,800).
inline constexpr int kMaxRingsWithoutOverride = 10;
/// Hard limit: 20! is the largest factorial that fits in 64 bits.
inline constexpr int kMaxRings = 20;

/// Per-ring hop length. Ring r transmits to ring r - delta(r); 0 is the gateway.
struct HopVector {
  std::vector<int> delta;  // delta[r - 1] is ring r

  int ring_count() const { return static_cast<int>(delta.size()); }
  int hop(int ring) const;
  int destination(int ring) const { return ring - hop(ring); }
  /// Throws ValidationError unless 1 <= delta(r) <= r for every ring.
  void validate() const;
  /// "(1, 1, 1, 4, 1, 3, 1)"
  std::string to_string() const;

  static HopVector single_hop(int ring_count);
  static HopVector next_ring_hop(int ring_count);

  friend auto operator<=>(const HopVector&, const HopVector&) = default;
};

/// |Delta| = R!.
std::uint64_t hop_combination_count(int ring_count);

/// The index-th hop vector in lexicographic order (delta(R) varies fastest).
HopVector hop_combination_at(int ring_count, std::uint64_t index);
/// Decode into an existing vector, reusing its storage.
void hop_combination_into(int ring_count, std::uint64_t index, HopVector& out);

/// Every hop vector with 1 <= delta(r) <= r. Throws GuardError when
/// ring_count exceeds kMaxRingsWithoutOverride and override_guard is false.
std::vector<HopVector> enumerate_hop_combinations(int ring_count, bool override_guard = false);

/// R x R 0/1 matrix. Entry (r, i) is set when payloads from ring i pass
/// through (and are aggregated by) the STAs of ring r.
class ConnectivityMatrix {
 public:
  explicit ConnectivityMatrix(int ring_count);

  int size() const { return size_; }
  bool operator()(int ring, int origin) const;
  void set(int ring, int origin);
  std::vector<std::vector<int>> rows() const;

  friend bool operator==(const ConnectivityMatrix&, const ConnectivityMatrix&) = default;

 private:
  int size_;
  std::vector<unsigned char> cells_;
};

ConnectivityMatrix connectivity_matrix(const HopVector& delta);

/// Payloads one STA of ring r sends upstream: its own plus all descendants
/// routed through it, sum over i of lambda(r, i) * c^(i - r).
std::int64_t payloads_aggregated(const ConnectivityMatrix& lambda, int children_ratio, int ring);

/// Fixed-size data packet layout.
struct PacketConfig {
  int payload_bytes = 15;
  int header_bytes = 2;
  int packet_bytes = 65;
  /// When false, each packet carries exactly one payload.
  bool aggregation = true;

  /// floor((L_DP - L_h) / L_d), or 1 without aggregation.
  int max_payloads() const;
  double packet_bits() const { return 8.0 * packet_bytes; }
  void validate() const;
};

/// ceil(payloads / max_payloads).
std::int64_t packets_tx(std::int64_t payloads, std::int64_t max_payloads);

struct ChildRing {
  int ring = 0;
  /// Direct children one parent STA has in this ring: c^(ring - parent).
  /// For the gateway the count is per branch, c^(ring - 1).
  std::int64_t per_parent = 0;

  friend bool operator==(const ChildRing&, const ChildRing&) = default;
};

/// Rings whose STAs transmit straight to ring `ring` (0 queries the gateway).
std::vector<ChildRing> direct_child_rings(const HopVector& delta, int children_ratio, int ring);

/// Per-ring traffic for one hop vector. Index 0 of `children` is the gateway;
/// `payloads` and `packets` are indexed by ring - 1.
struct RingTraffic {
  std::vector<std::int64_t> payloads;
  std::vector<std::int64_t> packets;
  std::vector<std::vector<ChildRing>> children;
};

RingTraffic ring_traffic(const HopVector& delta, int children_ratio, const PacketConfig& packet);

}  // namespace ringhop
