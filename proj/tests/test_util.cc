#include "test_util.h"

#include <algorithm>
#include <functional>
#include <limits>

#include "toca/evaluate.h"
#include "toca/solver.h"

namespace toca::testing {

std::string data_path(const std::string& name) {
  return std::string(TOCA_TEST_DATA_DIR) + "/" + name;
}

Topology make_topology(int n, const std::vector<EdgeSpec>& edges, std::string name) {
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i, "n" + std::to_string(i), 0, 0});
  std::vector<BidirectedEdge> es;
  for (const auto& s : edges) {
    BidirectedEdge e;
    e.u = s.u;
    e.v = s.v;
    e.capacity = s.capacity;
    e.connections = s.connections;
    e.weight = s.weight;
    e.reverse_weight = s.weight;
    es.push_back(e);
  }
  return Topology::create(std::move(name), std::move(nodes), std::move(es));
}

Topology fig2_topology() {
  return make_topology(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1},
                           {0, 4, 1}, {0, 2, 1}, {2, 4, 1}},
                       "fig2");
}

std::vector<std::pair<NodeId, NodeId>> fig2_solid() {
  return {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}};
}

std::vector<std::pair<NodeId, NodeId>> fig2_black() {
  return {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}};
}

std::vector<std::pair<NodeId, NodeId>> active_pairs(const Topology& topo,
                                                    const ActivationSolution& act) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& e : topo.edges()) {
    if (act[e.id] > 0) out.push_back({e.u, e.v});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Topology random_topology(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_int_distribution<int> n_dist(spec.min_nodes, spec.max_nodes);
  const int n = n_dist(rng);
  const int max_m = std::min(spec.max_edges, n * (n - 1) / 2);
  std::uniform_int_distribution<int> m_dist(n - 1, std::max(n - 1, max_m));
  const int m = m_dist(rng);
  std::uniform_int_distribution<int> cap_dist(1, spec.max_capacity);
  std::uniform_int_distribution<int> conn_dist(1, spec.max_connections);
  std::uniform_int_distribution<int> w_dist(1, spec.max_weight);
  const int cap0 = cap_dist(rng);
  const int conn0 = conn_dist(rng);

  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> parent(0, v - 1);
    pairs.push_back({parent(rng), v});
  }
  std::vector<std::pair<NodeId, NodeId>> rest;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (std::find(pairs.begin(), pairs.end(), std::pair(u, v)) == pairs.end()) {
        rest.push_back({u, v});
      }
    }
  }
  std::shuffle(rest.begin(), rest.end(), rng);
  for (int i = 0; static_cast<int>(pairs.size()) < m; ++i) pairs.push_back(rest[i]);

  std::vector<EdgeSpec> edges;
  for (auto [u, v] : pairs) {
    int cap = spec.uniform_capacity ? cap0 : cap_dist(rng);
    int conn = spec.uniform_connections ? conn0 : conn_dist(rng);
    edges.push_back({u, v, Rational(cap), conn, w_dist(rng)});
  }
  static int counter = 0;
  return make_topology(n, edges, "random" + std::to_string(counter++));
}

double oracle_mcf_mlu(const Topology& topo, const TrafficMatrix& t) {
  if (t.empty()) return 0;
  auto comp = topo.components();
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> demand;
  for (const auto& [p, v] : t.entries()) {
    if (comp[p.first] != comp[p.second]) return std::numeric_limits<double>::infinity();
    pairs.push_back(p);
    demand.push_back(to_double(v));
  }
  const int arcs = topo.arc_count();
  LinearProgram lp;
  lp.add_col(1.0, 0.0, kInfinity);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (int a = 0; a < arcs; ++a) lp.add_col(0.0, 0.0, kInfinity);
  }
  auto col = [&](std::size_t k, int a) { return 1 + static_cast<int>(k) * arcs + a; };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (NodeId v = 0; v < topo.node_count(); ++v) {
      double rhs = v == pairs[k].second ? demand[k] : v == pairs[k].first ? -demand[k] : 0;
      int row = lp.add_row(rhs, rhs);
      for (int a = 0; a < arcs; ++a) {
        Arc arc = topo.arc(a);
        if (arc.head == v) lp.add_entry(row, col(k, a), 1.0);
        if (arc.tail == v) lp.add_entry(row, col(k, a), -1.0);
      }
    }
  }
  for (int a = 0; a < arcs; ++a) {
    int row = lp.add_row(-kInfinity, 0.0);
    for (std::size_t k = 0; k < pairs.size(); ++k) lp.add_entry(row, col(k, a), 1.0);
    lp.add_entry(row, 0, -to_double(topo.arc_capacity(a)));
  }
  auto session = default_backend().open();
  session->load(lp);
  SolveResult r = session->solve(SolveLimits{});
  if (r.status != SolveStatus::kOptimal) return std::numeric_limits<double>::infinity();
  return r.col_values[0];
}

double oracle_relaxation(const Topology& topo, const TrafficMatrix& demand) {
  const int m = topo.edge_count();
  const int arcs = topo.arc_count();
  std::vector<std::pair<std::pair<NodeId, NodeId>, double>> pairs;
  for (const auto& [p, v] : demand.entries()) pairs.push_back({p, to_double(v)});
  LinearProgram lp;
  for (const auto& e : topo.edges()) lp.add_col(1.0, 0.0, e.connections);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (int a = 0; a < arcs; ++a) lp.add_col(0.0, 0.0, kInfinity);
  }
  auto col = [&](std::size_t k, int a) { return m + static_cast<int>(k) * arcs + a; };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [st, d] = pairs[k];
    for (NodeId v = 0; v < topo.node_count(); ++v) {
      double rhs = v == st.second ? d : v == st.first ? -d : 0;
      int row = lp.add_row(rhs, rhs);
      for (int a = 0; a < arcs; ++a) {
        Arc arc = topo.arc(a);
        if (arc.head == v) lp.add_entry(row, col(k, a), 1.0);
        if (arc.tail == v) lp.add_entry(row, col(k, a), -1.0);
      }
    }
  }
  for (int a = 0; a < arcs; ++a) {
    int row = lp.add_row(-kInfinity, 0.0);
    for (std::size_t k = 0; k < pairs.size(); ++k) lp.add_entry(row, col(k, a), 1.0);
    lp.add_entry(row, a / 2, -to_double(topo.edge(a / 2).ccap()));
  }
  auto session = default_backend().open();
  session->load(lp);
  SolveResult r = session->solve(SolveLimits{});
  if (r.status != SolveStatus::kOptimal) return std::numeric_limits<double>::infinity();
  return r.objective;
}

int oracle_optimum(const Topology& topo, const RetentionRatio& rho) {
  const TrafficMatrix demand = scale(worst_case_matrix(topo), rho);
  const int m = topo.edge_count();
  std::vector<int> x(m, 0);
  int best = std::numeric_limits<int>::max();
  while (true) {
    int total = 0;
    for (int v : x) total += v;
    if (total < best) {
      Topology reduced = reduce(topo, ActivationSolution(x));
      if (oracle_mcf_mlu(reduced, demand) <= 1 + 1e-6) best = total;
    }
    int i = 0;
    while (i < m && x[i] == topo.edge(i).connections) x[i++] = 0;
    if (i == m) break;
    ++x[i];
  }
  return best;
}

std::map<ArcId, Rational> oracle_ecmp(const Topology& topo, NodeId s, NodeId t) {
  const int n = topo.node_count();
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, inf));
  for (NodeId v = 0; v < n; ++v) d[v][v] = 0;
  for (ArcId a = 0; a < topo.arc_count(); ++a) {
    Arc arc = topo.arc(a);
    d[arc.tail][arc.head] = std::min(d[arc.tail][arc.head], arc.weight);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

  std::map<ArcId, Rational> frac;
  if (s == t || d[s][t] >= inf) return frac;
  std::function<void(NodeId, Rational)> push = [&](NodeId v, Rational share) {
    if (v == t) return;
    std::vector<ArcId> next;
    for (ArcId a = 0; a < topo.arc_count(); ++a) {
      Arc arc = topo.arc(a);
      if (arc.tail == v && arc.weight + d[arc.head][t] == d[v][t]) next.push_back(a);
    }
    for (ArcId a : next) {
      Rational part = share / static_cast<int>(next.size());
      frac[a] += part;
      push(topo.arc(a).head, part);
    }
  };
  push(s, Rational(1));
  return frac;
}

}  // namespace toca::testing
