#include "toca/traffic.h"

#include <algorithm>
#include <random>

#include "toca/errors.h"

namespace toca {

void TrafficMatrix::check_pair(NodeId s, NodeId t) const {
  if (s < 0 || s >= n_ || t < 0 || t >= n_) {
    throw UsageError("demand pair (" + std::to_string(s) + "," +
                     std::to_string(t) + ") outside matrix of size " +
                     std::to_string(n_));
  }
}

Rational TrafficMatrix::operator()(NodeId s, NodeId t) const {
  check_pair(s, t);
  auto it = demand_.find({s, t});
  return it == demand_.end() ? Rational(0) : it->second;
}

void TrafficMatrix::set(NodeId s, NodeId t, const Rational& value) {
  check_pair(s, t);
  if (value < 0) throw UsageError("negative demand");
  if (s == t && value != 0) throw UsageError("demand from a node to itself");
  if (value == 0) {
    demand_.erase({s, t});
  } else {
    demand_[{s, t}] = value;
  }
}

void TrafficMatrix::add(NodeId s, NodeId t, const Rational& value) {
  set(s, t, (*this)(s, t) + value);
}

Rational TrafficMatrix::total() const {
  Rational sum = 0;
  for (const auto& [pair, v] : demand_) sum += v;
  return sum;
}

RetentionRatio::RetentionRatio(const Rational& value) : value_(value) {
  if (value_ <= 0 || value_ >= 1) {
    throw UsageError("retention ratio must lie in (0,1), got " + to_string(value_));
  }
}

RetentionRatio RetentionRatio::parse(std::string_view text) {
  try {
    return RetentionRatio(parse_rational(text));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad retention ratio: ") + e.what());
  }
}

TrafficMatrix worst_case_matrix(const Topology& topo) {
  TrafficMatrix t(topo.node_count());
  for (const auto& e : topo.edges()) {
    t.set(e.u, e.v, e.capacity);
    t.set(e.v, e.u, e.capacity);
  }
  return t;
}

TrafficMatrix scale(const TrafficMatrix& t, const Rational& factor) {
  if (factor < 0) throw UsageError("negative scaling factor");
  TrafficMatrix out(t.node_count());
  if (factor == 0) return out;
  for (const auto& [pair, v] : t.entries()) out.set(pair.first, pair.second, v * factor);
  return out;
}

namespace {

// Randomised DFS for a simple s-t path over arcs with positive residual.
bool random_path(const Topology& topo, const std::vector<Rational>& residual,
                 NodeId s, NodeId t, std::mt19937_64& rng, std::vector<ArcId>& path) {
  std::vector<char> visited(topo.node_count(), 0);
  path.clear();
  std::vector<std::vector<ArcId>> pending;
  auto candidates = [&](NodeId v) {
    std::vector<ArcId> arcs;
    for (ArcId a : topo.out_arcs(v)) {
      if (residual[a] > 0 && !visited[topo.arc(a).head]) arcs.push_back(a);
    }
    std::shuffle(arcs.begin(), arcs.end(), rng);
    return arcs;
  };
  visited[s] = 1;
  pending.push_back(candidates(s));
  while (!pending.empty()) {
    if (pending.back().empty()) {
      pending.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    ArcId a = pending.back().back();
    pending.back().pop_back();
    NodeId w = topo.arc(a).head;
    if (visited[w]) continue;
    visited[w] = 1;
    path.push_back(a);
    if (w == t) return true;
    pending.push_back(candidates(w));
  }
  return false;
}

}  // namespace

TrafficMatrix sample_routable_matrix(const Topology& topo, std::uint64_t seed) {
  const int n = topo.node_count();
  TrafficMatrix result(n);
  if (n < 2 || topo.edge_count() == 0) return result;

  std::mt19937_64 rng(seed);
  std::vector<Rational> residual(topo.arc_count());
  for (ArcId a = 0; a < topo.arc_count(); ++a) residual[a] = topo.arc_capacity(a);

  const int max_commodities = n * (n - 1) / 2;
  std::uniform_int_distribution<int> count_dist(1, max_commodities);
  std::uniform_int_distribution<NodeId> node_dist(0, n - 1);
  constexpr int kShareSteps = 1000;
  std::uniform_int_distribution<int> share_dist(1, kShareSteps);

  const int commodities = count_dist(rng);
  std::vector<ArcId> path;
  for (int k = 0; k < commodities; ++k) {
    NodeId s = node_dist(rng);
    NodeId t = node_dist(rng);
    if (s == t) t = (t + 1 + node_dist(rng) % (n - 1)) % n;
    if (!random_path(topo, residual, s, t, rng, path)) continue;
    Rational bottleneck = residual[path.front()];
    for (ArcId a : path) bottleneck = std::min(bottleneck, residual[a]);
    Rational value = bottleneck * Rational(share_dist(rng), kShareSteps);
    for (ArcId a : path) residual[a] -= value;
    result.add(s, t, value);
  }
  return result;
}

}  // namespace toca
