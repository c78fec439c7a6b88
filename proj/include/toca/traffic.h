#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "toca/rational.h"
#include "toca/topology.h"

namespace toca {

// Sparse demand matrix over ordered node pairs. Zero entries are not stored.
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(int n) : n_(n) {}

  int node_count() const { return n_; }

  Rational operator()(NodeId s, NodeId t) const;
  void set(NodeId s, NodeId t, const Rational& value);
  void add(NodeId s, NodeId t, const Rational& value);

  // Pairs with positive demand, ordered by (s, t).
  const std::map<std::pair<NodeId, NodeId>, Rational>& entries() const {
    return demand_;
  }
  int support_size() const { return static_cast<int>(demand_.size()); }
  bool empty() const { return demand_.empty(); }
  Rational total() const;

  bool operator==(const TrafficMatrix&) const = default;

 private:
  void check_pair(NodeId s, NodeId t) const;

  int n_ = 0;
  std::map<std::pair<NodeId, NodeId>, Rational> demand_;
};

// Retention ratio in (0,1), kept as a reduced fraction p/q.
class RetentionRatio {
 public:
  explicit RetentionRatio(const Rational& value);
  static RetentionRatio parse(std::string_view text);

  const Rational& value() const { return value_; }
  BigInt p() const { return boost::multiprecision::numerator(value_); }
  BigInt q() const { return boost::multiprecision::denominator(value_); }
  double to_double() const { return toca::to_double(value_); }

 private:
  Rational value_;
};

// T(s,t) = cap(st) for every arc st of the topology.
TrafficMatrix worst_case_matrix(const Topology& topo);

TrafficMatrix scale(const TrafficMatrix& t, const Rational& factor);
inline TrafficMatrix scale(const TrafficMatrix& t, const RetentionRatio& rho) {
  return scale(t, rho.value());
}

// Random matrix routable in (topo, cap) by construction: commodities are
// routed one after another along random simple paths, each taking a random
// share of the remaining bottleneck capacity. Deterministic in `seed`.
TrafficMatrix sample_routable_matrix(const Topology& topo, std::uint64_t seed);

}  // namespace toca
