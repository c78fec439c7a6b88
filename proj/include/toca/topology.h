#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toca/rational.h"

namespace toca {

using NodeId = int;
using EdgeId = int;
using ArcId = int;

struct Node {
  NodeId id = 0;
  std::string label;
  double x = 0;
  double y = 0;
};

// A bundle of `connections` parallel bidirected connections between u < v.
// `weight` is the IGP metric of u->v, `reverse_weight` that of v->u.
struct BidirectedEdge {
  EdgeId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  Rational capacity;
  std::int64_t weight = 1;
  std::int64_t reverse_weight = 1;
  int connections = 1;

  Rational ccap() const { return capacity / connections; }
};

// Directed half of an edge. Arc 2e is u->v, arc 2e+1 is v->u.
struct Arc {
  ArcId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  EdgeId edge = 0;
  std::int64_t weight = 1;
};

class Topology {
 public:
  Topology() = default;

  // Validates ids, capacities, connection counts, the single-edge-per-pair
  // rule and (when `require_connected`) undirected connectivity. Edge ids are
  // reassigned to match vector positions; endpoints are normalised to u < v.
  static Topology create(std::string name, std::vector<Node> nodes,
                         std::vector<BidirectedEdge> edges,
                         bool require_connected = true);

  const std::string& name() const { return name_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int arc_count() const { return 2 * edge_count(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<BidirectedEdge>& edges() const { return edges_; }
  const BidirectedEdge& edge(EdgeId e) const { return edges_.at(e); }

  Arc arc(ArcId a) const;
  static ArcId reverse(ArcId a) { return a ^ 1; }
  static ArcId forward_arc(EdgeId e) { return 2 * e; }
  static ArcId backward_arc(EdgeId e) { return 2 * e + 1; }
  Rational arc_capacity(ArcId a) const { return edges_.at(a / 2).capacity; }

  const std::vector<ArcId>& out_arcs(NodeId v) const { return out_.at(v); }
  const std::vector<ArcId>& in_arcs(NodeId v) const { return in_.at(v); }

  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;
  std::optional<ArcId> find_arc(NodeId tail, NodeId head) const;

  bool is_connected() const;
  // Same connected component in the undirected sense.
  std::vector<int> components() const;

  int min_connections() const;
  bool uniform_capacity() const;

 private:
  std::string name_;
  std::vector<Node> nodes_;
  std::vector<BidirectedEdge> edges_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

// Number of active connections per edge, indexed by EdgeId.
class ActivationSolution {
 public:
  ActivationSolution() = default;
  explicit ActivationSolution(std::vector<int> x) : x_(std::move(x)) {}

  static ActivationSolution full(const Topology& topo);
  static ActivationSolution none(const Topology& topo);

  int operator[](EdgeId e) const { return x_.at(e); }
  int& operator[](EdgeId e) { return x_.at(e); }
  const std::vector<int>& values() const { return x_; }
  int size() const { return static_cast<int>(x_.size()); }
  std::int64_t total() const;

  // Throws UsageError unless sized for `topo` with 0 <= x_e <= c_e.
  void check_against(const Topology& topo) const;

  bool operator==(const ActivationSolution&) const = default;

 private:
  std::vector<int> x_;
};

// Capacities become x_e * ccap(e); edges with x_e = 0 are dropped. The result
// may be disconnected. Edge ids of the result are renumbered densely.
Topology reduce(const Topology& topo, const ActivationSolution& act);

// Returns a copy where every edge has `connections` connections.
Topology with_connections(const Topology& topo, int connections);

}  // namespace toca
