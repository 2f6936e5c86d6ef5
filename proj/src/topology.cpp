#include "ringhop/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "ringhop/error.hpp"

namespace ringhop {

namespace {

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

void check_ring(int ring, int ring_count) {
  if (ring_count < 1) throw ValidationError("R", "ring count must be >= 1");
  if (ring < 1 || ring > ring_count) {
    throw ValidationError("ring", "ring index " + std::to_string(ring) + " outside 1.." +
                                      std::to_string(ring_count));
  }
}

double fibonacci_distance(int ring, int ring_count, double max_distance) {
  if (ring == 0) return 0.0;
  if (ring == ring_count) return max_distance;
  return static_cast<double>(fibonacci(ring + 1)) * max_distance /
         static_cast<double>(fibonacci(ring_count + 1));
}

}  // namespace

std::string_view to_string(Spreading spreading) {
  switch (spreading) {
    case Spreading::Equidistant:
      return "equidistant";
    case Spreading::Fibonacci:
      return "fibonacci";
    case Spreading::ReverseFibonacci:
      return "reverse-fibonacci";
  }
  return "unknown";
}

Spreading parse_spreading(std::string_view text) {
  const auto key = lowercase(text);
  if (key == "equidistant" || key == "equid") return Spreading::Equidistant;
  if (key == "fibonacci" || key == "fibo") return Spreading::Fibonacci;
  if (key == "reverse-fibonacci" || key == "r-fibonacci" || key == "reversefibonacci" ||
      key == "r-fibo") {
    return Spreading::ReverseFibonacci;
  }
  throw ValidationError("spreading", "unknown spreading model '" + std::string(text) + "'");
}

std::uint64_t fibonacci(int n) {
  if (n < 0) throw ValidationError("n", "negative Fibonacci index");
  if (n > 93) throw ValidationError("n", "Fibonacci index overflows 64 bits");
  std::uint64_t previous = 0;
  std::uint64_t current = n == 0 ? 0 : 1;
  for (int i = 2; i <= n; ++i) {
    const auto next = previous + current;
    previous = current;
    current = next;
  }
  return n <= 1 ? static_cast<std::uint64_t>(n) : current;
}

double ring_distance(Spreading spreading, int ring, int ring_count, double max_distance) {
  check_ring(ring, ring_count);
  if (!(max_distance > 0.0) || !std::isfinite(max_distance)) {
    throw ValidationError("D", "maximum distance must be positive");
  }
  switch (spreading) {
    case Spreading::Equidistant:
      if (ring == ring_count) return max_distance;
      return ring * (max_distance / ring_count);
    case Spreading::Fibonacci:
      return fibonacci_distance(ring, ring_count, max_distance);
    case Spreading::ReverseFibonacci: {
      if (ring == ring_count) return max_distance;
      // Walk the Fibonacci gaps from the outside in.
      double distance = 0.0;
      for (int r = 1; r <= ring; ++r) {
        distance += fibonacci_distance(ring_count - r + 1, ring_count, max_distance) -
                    fibonacci_distance(ring_count - r, ring_count, max_distance);
      }
      return distance;
    }
  }
  throw ValidationError("spreading", "unknown spreading model");
}

double RingNetwork::distance(int ring) const {
  if (ring == 0) return 0.0;
  check_ring(ring, ring_count);
  return distances[static_cast<std::size_t>(ring - 1)];
}

std::int64_t ipow(std::int64_t base, int exponent) {
  if (exponent < 0) throw ValidationError("exponent", "negative exponent");
  std::int64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > std::numeric_limits<std::int64_t>::max() / base) {
      throw ValidationError("c", "station count overflows 64 bits");
    }
    result *= base;
  }
  return result;
}

RingNetwork build_network(double max_distance, int ring_count, int children_ratio,
                          int branch_count, Spreading spreading) {
  if (ring_count < 1) throw ValidationError("R", "ring count must be >= 1");
  if (children_ratio < 1) throw ValidationError("c", "children ratio must be >= 1");
  if (branch_count < 1) throw ValidationError("B", "branch count must be >= 1");
  if (!(max_distance > 0.0) || !std::isfinite(max_distance)) {
    throw ValidationError("D", "maximum distance must be positive");
  }

  RingNetwork net;
  net.max_distance = max_distance;
  net.ring_count = ring_count;
  net.children_ratio = children_ratio;
  net.branch_count = branch_count;
  net.spreading = spreading;
  net.distances.reserve(static_cast<std::size_t>(ring_count));
  for (int r = 1; r <= ring_count; ++r) {
    net.distances.push_back(ring_distance(spreading, r, ring_count, max_distance));
  }
  for (int r = 1; r <= ring_count; ++r) net.branch_load += ipow(children_ratio, r - 1);
  net.station_count = net.branch_load * branch_count;
  return net;
}

std::int64_t stations_in_ring(const RingNetwork& net, int ring) {
  check_ring(ring, net.ring_count);
  return static_cast<std::int64_t>(net.branch_count) * ipow(net.children_ratio, ring - 1);
}

}  // namespace ringhop
