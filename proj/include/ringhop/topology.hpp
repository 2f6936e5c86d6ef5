#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ringhop {

/// How ring radii are laid out between the gateway and the outermost ring.
enum class Spreading { Equidistant, Fibonacci, ReverseFibonacci };

std::string_view to_string(Spreading spreading);
/// Accepts "equidistant", "fibonacci", "reverse-fibonacci" (case-insensitive,
/// also "r-fibonacci"). Throws ValidationError otherwise.
Spreading parse_spreading(std::string_view text);

/// Fibonacci number with F(1) = F(2) = 1 and F(0) = 0.
std::uint64_t fibonacci(int n);

/// Distance in meters of ring `ring` (1-based) out of `ring_count` rings
/// whose outermost ring sits at `max_distance`.
double ring_distance(Spreading spreading, int ring, int ring_count, double max_distance);

/// Symmetric ring tree: B branches, each node in ring r < R has c tree
/// children in ring r + 1. The gateway is ring 0 at distance 0.
struct RingNetwork {
  double max_distance = 0.0;
  int ring_count = 0;
  int children_ratio = 0;
  int branch_count = 0;
  Spreading spreading = Spreading::Equidistant;
  std::vector<double> distances;  // distances[r - 1] is ring r
  std::int64_t branch_load = 0;
  std::int64_t station_count = 0;

  /// Radius of ring r; ring 0 is the gateway.
  double distance(int ring) const;
};

RingNetwork build_network(double max_distance, int ring_count, int children_ratio,
                          int branch_count, Spreading spreading);

/// STAs in ring r across all branches: B * c^(r-1).
std::int64_t stations_in_ring(const RingNetwork& net, int ring);

/// Integer power for station/payload counts. Throws ValidationError on overflow.
std::int64_t ipow(std::int64_t base, int exponent);

}  // namespace ringhop
