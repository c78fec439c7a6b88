#include "toca/topology.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "toca/errors.h"

namespace toca {

Topology Topology::create(std::string name, std::vector<Node> nodes,
                          std::vector<BidirectedEdge> edges,
                          bool require_connected) {
  Topology t;
  t.name_ = std::move(name);
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    if (nodes[i].id != i) {
      throw ModelError("node ids must be 0..n-1 in order; position " +
                       std::to_string(i) + " has id " +
                       std::to_string(nodes[i].id));
    }
  }
  std::map<std::pair<NodeId, NodeId>, EdgeId> seen;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    BidirectedEdge& e = edges[i];
    e.id = i;
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw ModelError("edge " + std::to_string(i) + " references unknown node");
    }
    if (e.u == e.v) {
      throw ModelError("self-loop at node " + std::to_string(e.u));
    }
    if (e.u > e.v) {
      std::swap(e.u, e.v);
      std::swap(e.weight, e.reverse_weight);
    }
    if (e.capacity <= 0) {
      throw ModelError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                       " has non-positive capacity");
    }
    if (e.connections < 1) {
      throw ModelError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                       " has fewer than one connection");
    }
    if (e.weight < 0 || e.reverse_weight < 0) {
      throw ModelError("negative IGP weight on edge " + std::to_string(e.u) + "-" +
                       std::to_string(e.v));
    }
    if (!seen.emplace(std::make_pair(e.u, e.v), i).second) {
      throw ModelError("parallel edges between " + std::to_string(e.u) + " and " +
                       std::to_string(e.v));
    }
  }
  t.nodes_ = std::move(nodes);
  t.edges_ = std::move(edges);
  t.out_.assign(n, {});
  t.in_.assign(n, {});
  for (const auto& e : t.edges_) {
    ArcId f = forward_arc(e.id), b = backward_arc(e.id);
    t.out_[e.u].push_back(f);
    t.in_[e.v].push_back(f);
    t.out_[e.v].push_back(b);
    t.in_[e.u].push_back(b);
  }
  if (require_connected && !t.is_connected()) {
    throw ModelError("topology '" + t.name_ + "' is not connected");
  }
  return t;
}

Arc Topology::arc(ArcId a) const {
  const BidirectedEdge& e = edges_.at(a / 2);
  if (a % 2 == 0) return Arc{a, e.u, e.v, e.id, e.weight};
  return Arc{a, e.v, e.u, e.id, e.reverse_weight};
}

std::optional<EdgeId> Topology::find_edge(NodeId a, NodeId b) const {
  if (a < 0 || a >= node_count()) return std::nullopt;
  for (ArcId arc_id : out_[a]) {
    if (arc(arc_id).head == b) return arc_id / 2;
  }
  return std::nullopt;
}

std::optional<ArcId> Topology::find_arc(NodeId tail, NodeId head) const {
  if (tail < 0 || tail >= node_count()) return std::nullopt;
  for (ArcId arc_id : out_[tail]) {
    if (arc(arc_id).head == head) return arc_id;
  }
  return std::nullopt;
}

std::vector<int> Topology::components() const {
  std::vector<int> comp(node_count(), -1);
  int next = 0;
  for (NodeId start = 0; start < node_count(); ++start) {
    if (comp[start] >= 0) continue;
    std::vector<NodeId> stack{start};
    comp[start] = next;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (ArcId a : out_[v]) {
        NodeId w = arc(a).head;
        if (comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool Topology::is_connected() const {
  auto comp = components();
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

int Topology::min_connections() const {
  if (edges_.empty()) throw UsageError("topology has no edges");
  int c = edges_.front().connections;
  for (const auto& e : edges_) c = std::min(c, e.connections);
  return c;
}

bool Topology::uniform_capacity() const {
  return std::all_of(edges_.begin(), edges_.end(), [&](const BidirectedEdge& e) {
    return e.capacity == edges_.front().capacity;
  });
}

ActivationSolution ActivationSolution::full(const Topology& topo) {
  std::vector<int> x;
  x.reserve(topo.edge_count());
  for (const auto& e : topo.edges()) x.push_back(e.connections);
  return ActivationSolution(std::move(x));
}

ActivationSolution ActivationSolution::none(const Topology& topo) {
  return ActivationSolution(std::vector<int>(topo.edge_count(), 0));
}

std::int64_t ActivationSolution::total() const {
  return std::accumulate(x_.begin(), x_.end(), std::int64_t{0});
}

void ActivationSolution::check_against(const Topology& topo) const {
  if (size() != topo.edge_count()) {
    throw UsageError("activation has " + std::to_string(size()) +
                     " entries but topology has " +
                     std::to_string(topo.edge_count()) + " edges");
  }
  for (const auto& e : topo.edges()) {
    if (x_[e.id] < 0 || x_[e.id] > e.connections) {
      throw UsageError("activation of edge " + std::to_string(e.u) + "-" +
                       std::to_string(e.v) + " is " + std::to_string(x_[e.id]) +
                       ", outside [0," + std::to_string(e.connections) + "]");
    }
  }
}

Topology reduce(const Topology& topo, const ActivationSolution& act) {
  act.check_against(topo);
  std::vector<BidirectedEdge> edges;
  for (const auto& e : topo.edges()) {
    if (act[e.id] == 0) continue;
    BidirectedEdge r = e;
    r.capacity = e.ccap() * act[e.id];
    r.connections = act[e.id];
    edges.push_back(std::move(r));
  }
  return Topology::create(topo.name(), topo.nodes(), std::move(edges),
                          /*require_connected=*/false);
}

Topology with_connections(const Topology& topo, int connections) {
  std::vector<BidirectedEdge> edges = topo.edges();
  for (auto& e : edges) e.connections = connections;
  return Topology::create(topo.name(), topo.nodes(), std::move(edges),
                          topo.is_connected());
}

}  // namespace toca
