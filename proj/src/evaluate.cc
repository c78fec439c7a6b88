#include "toca/evaluate.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

#include "toca/errors.h"

namespace toca {

const char* to_string(Router r) {
  switch (r) {
    case Router::kMcf: return "MCF";
    case Router::kTwoSr: return "TWO_SR";
    case Router::kSpr: return "SPR";
  }
  return "MCF";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double capacity_scale(const Topology& topo) {
  double s = 1;
  for (const auto& e : topo.edges()) s = std::max(s, to_double(e.capacity));
  return s;
}

bool all_demands_connected(const Topology& topo, const TrafficMatrix& t) {
  auto comp = topo.components();
  for (const auto& [pair, v] : t.entries()) {
    if (comp[pair.first] != comp[pair.second]) return false;
  }
  return true;
}

MluResult unroutable(Router r) {
  MluResult res;
  res.mlu = kInfinity;
  res.feasible = false;
  res.router = r;
  return res;
}

MluResult finish(Router r, double mlu, Clock::time_point start) {
  MluResult res;
  res.mlu = std::max(0.0, mlu);
  res.feasible = res.mlu <= 1 + kFeasibilityTol;
  res.router = r;
  res.runtime_ms = elapsed_ms(start);
  return res;
}

void check_dims(const Topology& topo, const TrafficMatrix& t) {
  if (t.node_count() != topo.node_count()) {
    throw UsageError("traffic matrix has " + std::to_string(t.node_count()) +
                     " nodes, topology has " + std::to_string(topo.node_count()));
  }
}

// dist[v] = shortest distance from v to `target` along directed arcs.
std::vector<std::int64_t> distances_to(const Topology& topo, NodeId target) {
  std::vector<std::int64_t> dist(topo.node_count(), -1);
  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[target] = 0;
  pq.push({0, target});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[v]) continue;
    for (ArcId a : topo.in_arcs(v)) {
      Arc arc = topo.arc(a);
      std::int64_t nd = d + arc.weight;
      if (dist[arc.tail] < 0 || nd < dist[arc.tail]) {
        dist[arc.tail] = nd;
        pq.push({nd, arc.tail});
      }
    }
  }
  return dist;
}

void require_positive_weights(const Topology& topo) {
  for (const auto& e : topo.edges()) {
    if (e.weight <= 0 || e.reverse_weight <= 0) {
      throw ModelError("ECMP needs positive IGP weights; edge " + std::to_string(e.u) +
                       "-" + std::to_string(e.v) + " has weight 0");
    }
  }
}

// Fractions of the (source, target) flow per arc under per-hop equal splits.
std::map<ArcId, Rational> split_towards(const Topology& topo, NodeId source,
                                        NodeId target,
                                        const std::vector<std::int64_t>& dist) {
  std::map<ArcId, Rational> frac;
  if (source == target || dist[source] < 0) return frac;
  std::vector<NodeId> order;
  for (NodeId v = 0; v < topo.node_count(); ++v) {
    if (dist[v] >= 0 && dist[v] <= dist[source]) order.push_back(v);
  }
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return dist[a] > dist[b]; });
  std::vector<Rational> share(topo.node_count(), Rational(0));
  share[source] = 1;
  std::vector<ArcId> next;
  for (NodeId v : order) {
    if (v == target || share[v] == 0) continue;
    next.clear();
    for (ArcId a : topo.out_arcs(v)) {
      Arc arc = topo.arc(a);
      if (dist[arc.head] >= 0 && dist[v] == arc.weight + dist[arc.head]) next.push_back(a);
    }
    Rational part = share[v] / static_cast<int>(next.size());
    for (ArcId a : next) {
      frac[a] += part;
      share[topo.arc(a).head] += part;
    }
  }
  return frac;
}

// g[s][t] as doubles for LP assembly.
struct EcmpTable {
  std::vector<std::vector<std::vector<std::pair<ArcId, double>>>> g;
  std::vector<std::vector<char>> reachable;
};

EcmpTable ecmp_table(const Topology& topo) {
  require_positive_weights(topo);
  const int n = topo.node_count();
  EcmpTable table;
  table.g.assign(n, std::vector<std::vector<std::pair<ArcId, double>>>(n));
  table.reachable.assign(n, std::vector<char>(n, 0));
  for (NodeId t = 0; t < n; ++t) {
    auto dist = distances_to(topo, t);
    for (NodeId s = 0; s < n; ++s) {
      table.reachable[s][t] = dist[s] >= 0;
      if (s == t || dist[s] < 0) continue;
      for (const auto& [a, f] : split_towards(topo, s, t, dist)) {
        table.g[s][t].push_back({a, to_double(f)});
      }
    }
  }
  return table;
}

}  // namespace

MluResult mcf_mlu(const Topology& topo, const TrafficMatrix& t, const SolverBackend& backend) {
  auto start = Clock::now();
  check_dims(topo, t);
  if (t.empty()) return finish(Router::kMcf, 0, start);
  if (!all_demands_connected(topo, t)) return unroutable(Router::kMcf);

  const double scale = capacity_scale(topo);
  const int n = topo.node_count();
  const int arcs = topo.arc_count();
  std::vector<NodeId> sources;
  for (const auto& [pair, v] : t.entries()) {
    if (sources.empty() || sources.back() != pair.first) sources.push_back(pair.first);
  }

  LinearProgram lp;
  const int lambda = lp.add_col(1.0, 0.0, kInfinity);
  auto flow_col = [&](int k, ArcId a) { return 1 + k * arcs + a; };
  for (std::size_t k = 0; k < sources.size(); ++k) {
    for (ArcId a = 0; a < arcs; ++a) lp.add_col(0.0, 0.0, kInfinity);
  }
  for (std::size_t k = 0; k < sources.size(); ++k) {
    NodeId s = sources[k];
    std::vector<double> rhs(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      if (v == s) continue;
      rhs[v] = to_double(t(s, v)) / scale;
      rhs[s] -= rhs[v];
    }
    for (NodeId v = 0; v < n; ++v) {
      int row = lp.add_row(rhs[v], rhs[v]);
      for (ArcId a : topo.in_arcs(v)) lp.add_entry(row, flow_col(k, a), 1.0);
      for (ArcId a : topo.out_arcs(v)) lp.add_entry(row, flow_col(k, a), -1.0);
    }
  }
  for (ArcId a = 0; a < arcs; ++a) {
    int row = lp.add_row(-kInfinity, 0.0);
    for (std::size_t k = 0; k < sources.size(); ++k) lp.add_entry(row, flow_col(k, a), 1.0);
    lp.add_entry(row, lambda, -to_double(topo.arc_capacity(a)) / scale);
  }

  auto session = backend.open();
  session->load(lp);
  SolveResult r = session->solve(SolveLimits{});
  if (r.status == SolveStatus::kInfeasible) return unroutable(Router::kMcf);
  if (r.status != SolveStatus::kOptimal) {
    throw SolverError(std::string("MCF utilisation LP ended with status ") +
                      to_string(r.status));
  }
  return finish(Router::kMcf, r.col_values[lambda], start);
}

bool mcf_feasible(const Topology& topo, const ActivationSolution& act,
                  const TrafficMatrix& t, const SolverBackend& backend) {
  return mcf_mlu(reduce(topo, act), t, backend).feasible;
}

EcmpFractions ecmp_fractions(const Topology& topo, NodeId source) {
  require_positive_weights(topo);
  if (source < 0 || source >= topo.node_count()) throw UsageError("unknown source node");
  EcmpFractions out;
  out.source = source;
  out.fraction.resize(topo.node_count());
  out.distance.assign(topo.node_count(), -1);
  for (NodeId t = 0; t < topo.node_count(); ++t) {
    auto dist = distances_to(topo, t);
    out.distance[t] = dist[source];
    if (t != source) out.fraction[t] = split_towards(topo, source, t, dist);
  }
  return out;
}

MluResult spr_mlu(const Topology& topo, const TrafficMatrix& t) {
  auto start = Clock::now();
  check_dims(topo, t);
  if (t.empty()) return finish(Router::kSpr, 0, start);
  if (!all_demands_connected(topo, t)) return unroutable(Router::kSpr);
  EcmpTable table = ecmp_table(topo);
  std::vector<double> load(topo.arc_count(), 0.0);
  for (const auto& [pair, v] : t.entries()) {
    double d = to_double(v);
    for (const auto& [a, f] : table.g[pair.first][pair.second]) load[a] += d * f;
  }
  double mlu = 0;
  for (ArcId a = 0; a < topo.arc_count(); ++a) {
    mlu = std::max(mlu, load[a] / to_double(topo.arc_capacity(a)));
  }
  return finish(Router::kSpr, mlu, start);
}

MluResult two_sr_mlu(const Topology& topo, const TrafficMatrix& t,
                     const SolverBackend& backend) {
  auto start = Clock::now();
  check_dims(topo, t);
  if (t.empty()) return finish(Router::kTwoSr, 0, start);
  if (!all_demands_connected(topo, t)) return unroutable(Router::kTwoSr);

  const int n = topo.node_count();
  const double scale = capacity_scale(topo);
  EcmpTable table = ecmp_table(topo);

  // Columns: lambda, then one leg-load column P(u,w) per ordered pair in use,
  // then one split column per (commodity, midpoint).
  LinearProgram lp;
  const int lambda = lp.add_col(1.0, 0.0, kInfinity);
  std::vector<int> leg_row(n * n, -1);
  std::vector<int> leg_col(n * n, -1);
  auto leg = [&](NodeId u, NodeId w) {
    int key = u * n + w;
    if (leg_row[key] < 0) {
      leg_col[key] = lp.add_col(0.0, 0.0, kInfinity);
      leg_row[key] = lp.add_row(0.0, 0.0);
      lp.add_entry(leg_row[key], leg_col[key], 1.0);
    }
    return leg_row[key];
  };

  for (const auto& [pair, v] : t.entries()) {
    const auto [s, d] = pair;
    const double demand = to_double(v) / scale;
    int convex = lp.add_row(1.0, 1.0);
    for (NodeId m = 0; m < n; ++m) {
      if (m == d) continue;  // same path as m == s
      if (m != s && (!table.reachable[s][m] || !table.reachable[m][d])) continue;
      int y = lp.add_col(0.0, 0.0, kInfinity);
      lp.add_entry(convex, y, 1.0);
      if (m == s) {
        lp.add_entry(leg(s, d), y, -demand);
      } else {
        lp.add_entry(leg(s, m), y, -demand);
        lp.add_entry(leg(m, d), y, -demand);
      }
    }
  }
  std::vector<int> arc_row(topo.arc_count());
  for (ArcId a = 0; a < topo.arc_count(); ++a) {
    arc_row[a] = lp.add_row(-kInfinity, 0.0);
    lp.add_entry(arc_row[a], lambda, -to_double(topo.arc_capacity(a)) / scale);
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId w = 0; w < n; ++w) {
      int col = leg_col[u * n + w];
      if (col < 0) continue;
      for (const auto& [a, f] : table.g[u][w]) lp.add_entry(arc_row[a], col, f);
    }
  }

  auto session = backend.open();
  session->load(lp);
  SolveLimits limits;
  limits.interior_point = true;
  SolveResult r = session->solve(limits);
  if (r.status != SolveStatus::kOptimal) {
    throw SolverError(std::string("2-SR utilisation LP ended with status ") +
                      to_string(r.status));
  }
  return finish(Router::kTwoSr, r.col_values[lambda], start);
}

namespace {

// Necessary condition: for every checked cut S, the active capacity leaving S
// covers rho times the full capacity leaving S (the T_A demand across it).
class CutFilter {
 public:
  CutFilter(const Topology& topo, const RetentionRatio& rho) {
    const int n = topo.node_count();
    std::vector<std::uint32_t> masks;
    if (n <= 12) {
      for (std::uint32_t s = 1; s < (1u << (n - 1)); ++s) masks.push_back(s);
    } else {
      for (int v = 0; v < n; ++v) masks.push_back(0);  // node cuts handled below
    }
    const double r = rho.to_double();
    for (std::uint32_t mask : masks) {
      Cut cut;
      for (const auto& e : topo.edges()) {
        bool in_u = (mask >> e.u) & 1u, in_v = (mask >> e.v) & 1u;
        if (in_u != in_v) {
          cut.edges.push_back(e.id);
          cut.need += r * to_double(e.capacity);
        }
      }
      if (!cut.edges.empty()) cuts_.push_back(std::move(cut));
    }
    if (n > 12) {
      cuts_.clear();
      for (NodeId v = 0; v < n; ++v) {
        Cut cut;
        for (ArcId a : topo.out_arcs(v)) {
          cut.edges.push_back(a / 2);
          cut.need += r * to_double(topo.arc_capacity(a));
        }
        cuts_.push_back(std::move(cut));
      }
    }
    for (auto& cut : cuts_) cut.need *= 1 - 1e-9;
    ccap_.reserve(topo.edge_count());
    for (const auto& e : topo.edges()) ccap_.push_back(to_double(e.ccap()));
    // Small cuts first; they reject most candidates.
    std::stable_sort(cuts_.begin(), cuts_.end(), [](const Cut& a, const Cut& b) {
      return a.edges.size() < b.edges.size();
    });
  }

  bool passes(const std::vector<int>& x) const {
    for (const auto& cut : cuts_) {
      double have = 0;
      for (EdgeId e : cut.edges) have += x[e] * ccap_[e];
      if (have < cut.need) return false;
    }
    return true;
  }

 private:
  struct Cut {
    std::vector<EdgeId> edges;
    double need = 0;
  };
  std::vector<Cut> cuts_;
  std::vector<double> ccap_;
};

}  // namespace

BruteForceResult brute_force_optimum(const Topology& topo, const RetentionRatio& rho,
                                     BruteForceOptions options,
                                     const SolverBackend& backend) {
  const int m = topo.edge_count();
  double space = 1;
  for (const auto& e : topo.edges()) space *= e.connections + 1;
  if (space > static_cast<double>(options.max_candidates)) {
    throw RefusalError("enumeration space of " + std::to_string(space) +
                       " activations exceeds the limit of " +
                       std::to_string(options.max_candidates));
  }
  const TrafficMatrix demand = scale(worst_case_matrix(topo), rho);
  CutFilter filter(topo, rho);

  std::vector<int> cap(m);
  for (const auto& e : topo.edges()) cap[e.id] = e.connections;
  std::vector<int> suffix(m + 1, 0);
  for (int i = m - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + cap[i];

  BruteForceResult result;
  std::vector<int> x(m, 0);
  bool found = false;
  // Depth-first over positions in lexicographic order with a fixed total.
  std::function<void(int, int)> visit = [&](int pos, int remaining) {
    if (found) return;
    if (pos == m) {
      if (remaining != 0 || !filter.passes(x)) return;
      ++result.candidates_checked;
      ActivationSolution act(x);
      if (mcf_feasible(topo, act, demand, backend)) {
        result.activation = act;
        found = true;
      }
      return;
    }
    int lo = std::max(0, remaining - suffix[pos + 1]);
    int hi = std::min(cap[pos], remaining);
    for (int v = lo; v <= hi && !found; ++v) {
      x[pos] = v;
      visit(pos + 1, remaining - v);
    }
    x[pos] = 0;
  };
  for (int total = 0; total <= suffix[0] && !found; ++total) visit(0, total);
  if (!found) throw SolverError("full activation failed the feasibility check");
  result.value = result.activation.total();
  return result;
}

Lemma1Report lemma1_check(const FractionalSolution& sol, const Topology& topo,
                          const RetentionRatio& rho, double tol) {
  Lemma1Report rep;
  const double r = rho.to_double();
  for (const auto& e : topo.edges()) {
    double x = sol.xstar.at(e.id);
    if (std::fabs(x - e.connections) <= tol) ++rep.h;
    if (x > tol && x < r * e.connections - tol) ++rep.l;
  }
  rep.holds = rep.l <= rep.h;
  return rep;
}

}  // namespace toca
