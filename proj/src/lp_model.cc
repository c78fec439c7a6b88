#include "toca/lp_model.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "toca/errors.h"

namespace toca {

const char* to_string(ModelMode m) {
  return m == ModelMode::kIlp ? "ILP" : "LP_RELAXATION";
}

const char* to_string(Variant v) {
  return v == Variant::kOblivious ? "OBLIVIOUS" : "TRAFFIC_AWARE";
}

Rational Commodity::total() const {
  Rational sum = 0;
  for (const auto& s : sinks) sum += s.demand;
  return sum;
}

bool is_integral(double v, double tol) { return std::fabs(v - std::round(v)) <= tol; }

void TocaModel::build(bool add_arc_capacity_rows, bool add_edge_capacity_rows) {
  const Topology& topo = *topo_;
  const int m = topo.edge_count();
  const int arcs = topo.arc_count();
  const int n = topo.node_count();

  flow_scale_ = 1;
  for (const auto& e : topo.edges()) flow_scale_ = std::max(flow_scale_, to_double(e.capacity));
  const double inv_scale = 1.0 / flow_scale_;

  lp_ = LinearProgram{};
  for (const auto& e : topo.edges()) {
    lp_.add_col(1.0, 0.0, e.connections, mode_ == ModelMode::kIlp,
                "x_" + std::to_string(e.u) + "_" + std::to_string(e.v));
  }
  for (int k = 0; k < commodity_count(); ++k) {
    for (ArcId a = 0; a < arcs; ++a) {
      Arc arc = topo.arc(a);
      lp_.add_col(0.0, 0.0, kInfinity, false,
                  "f" + std::to_string(k) + "_" + std::to_string(arc.tail) + "_" +
                      std::to_string(arc.head));
    }
  }

  conservation_rows_ = 0;
  for (int k = 0; k < commodity_count(); ++k) {
    const Commodity& c = commodities_[k];
    std::vector<double> rhs(n, 0.0);
    for (const auto& s : c.sinks) rhs[s.node] += to_double(s.demand) * inv_scale;
    rhs[c.source] = -to_double(c.total()) * inv_scale;
    for (NodeId v = 0; v < n; ++v) {
      int row = lp_.add_row(rhs[v], rhs[v],
                            "cons" + std::to_string(k) + "_" + std::to_string(v));
      for (ArcId a : topo.in_arcs(v)) lp_.add_entry(row, flow_col(k, a), 1.0);
      for (ArcId a : topo.out_arcs(v)) lp_.add_entry(row, flow_col(k, a), -1.0);
      ++conservation_rows_;
    }
  }

  capacity_rows_ = 0;
  if (add_arc_capacity_rows) {
    for (ArcId a = 0; a < arcs; ++a) {
      const BidirectedEdge& e = topo.edge(a / 2);
      int row = lp_.add_row(-kInfinity, 0.0, "cap_arc" + std::to_string(a));
      for (int k = 0; k < commodity_count(); ++k) lp_.add_entry(row, flow_col(k, a), 1.0);
      lp_.add_entry(row, x_col(e.id), -to_double(e.ccap()) * inv_scale);
      ++capacity_rows_;
    }
  }
  if (add_edge_capacity_rows) {
    for (const auto& e : topo.edges()) {
      int row = lp_.add_row(-kInfinity, 0.0, "cap_edge" + std::to_string(e.id));
      for (int k = 0; k < commodity_count(); ++k) {
        lp_.add_entry(row, flow_col(k, Topology::forward_arc(e.id)), 1.0);
        lp_.add_entry(row, flow_col(k, Topology::backward_arc(e.id)), 1.0);
      }
      lp_.add_entry(row, x_col(e.id), -to_double(e.ccap()) * inv_scale);
      ++capacity_rows_;
    }
  }
  (void)m;
}

void TocaModel::set_edge_bounds(EdgeId e, int lower, int upper) {
  const BidirectedEdge& edge = topo_->edge(e);
  if (lower < 0 || upper > edge.connections || lower > upper) {
    throw UsageError("invalid bounds [" + std::to_string(lower) + "," +
                     std::to_string(upper) + "] for edge " + std::to_string(e));
  }
  lp_.col_lower[x_col(e)] = lower;
  lp_.col_upper[x_col(e)] = upper;
  auto it = std::find_if(bounds_.begin(), bounds_.end(),
                         [&](const EdgeBound& b) { return b.edge == e; });
  if (it == bounds_.end()) {
    bounds_.push_back({e, lower, upper});
  } else {
    it->lower = lower;
    it->upper = upper;
  }
}

std::pair<int, int> TocaModel::edge_bounds(EdgeId e) const {
  return {static_cast<int>(lp_.col_lower.at(x_col(e))),
          static_cast<int>(lp_.col_upper.at(x_col(e)))};
}

TocaModel build_oblivious(std::shared_ptr<const Topology> topo, const RetentionRatio& rho,
                          ModelMode mode, FlowSymmetry symmetry) {
  TocaModel model(std::move(topo), rho);
  model.mode_ = mode;
  model.variant_ = Variant::kOblivious;
  model.symmetry_ = symmetry;
  const Topology& t = *model.topo_;

  if (symmetry == FlowSymmetry::kIndexReduced) {
    // Edge endpoints satisfy u < v, so one commodity per edge covers every
    // (s,t) in the support of T_A with idx(s) < idx(t).
    for (const auto& e : t.edges()) {
      model.commodities_.push_back({e.u, {{e.v, e.capacity * rho.value()}}});
    }
    model.build(/*arc rows=*/false, /*edge rows=*/true);
    return model;
  }

  for (ArcId a = 0; a < t.arc_count(); ++a) {
    Arc arc = t.arc(a);
    model.commodities_.push_back({arc.tail, {{arc.head, t.arc_capacity(a) * rho.value()}}});
  }
  model.build(/*arc rows=*/true, /*edge rows=*/false);
  if (symmetry == FlowSymmetry::kExplicitRows) {
    // Commodity index equals arc id, so the reversed commodity is k ^ 1.
    for (int k = 0; k < model.commodity_count(); k += 2) {
      for (ArcId a = 0; a < t.arc_count(); ++a) {
        int row = model.lp_.add_row(0.0, 0.0,
                                    "sym" + std::to_string(k) + "_" + std::to_string(a));
        model.lp_.add_entry(row, model.flow_col(k, a), 1.0);
        model.lp_.add_entry(row, model.flow_col(k ^ 1, Topology::reverse(a)), -1.0);
        ++model.symmetry_rows_;
      }
    }
  }
  return model;
}

TocaModel build_traffic_aware(std::shared_ptr<const Topology> topo, const TrafficMatrix& t,
                              const RetentionRatio& rho, ModelMode mode,
                              TrafficAwareOptions options) {
  if (t.node_count() != topo->node_count()) {
    throw UsageError("traffic matrix has " + std::to_string(t.node_count()) +
                     " nodes, topology has " + std::to_string(topo->node_count()));
  }
  TocaModel model(std::move(topo), rho);
  model.mode_ = mode;
  model.variant_ = Variant::kTrafficAware;
  model.symmetry_ = FlowSymmetry::kNone;
  if (options.aggregate_by_source) {
    std::map<NodeId, Commodity> by_source;
    for (const auto& [pair, v] : t.entries()) {
      auto& c = by_source[pair.first];
      c.source = pair.first;
      c.sinks.push_back({pair.second, v * rho.value()});
    }
    for (auto& [s, c] : by_source) model.commodities_.push_back(std::move(c));
  } else {
    for (const auto& [pair, v] : t.entries()) {
      model.commodities_.push_back({pair.first, {{pair.second, v * rho.value()}}});
    }
  }
  model.build(/*arc rows=*/true, /*edge rows=*/false);
  return model;
}

namespace {

FractionalSolution extract(const TocaModel& model, const SolveResult& r) {
  const Topology& topo = model.topology();
  FractionalSolution sol;
  sol.status = r.status;
  sol.is_basic = r.is_basic;
  sol.has_solution = r.has_solution;
  sol.best_bound = r.best_bound;
  sol.mip_gap = r.mip_gap;
  sol.runtime_ms = r.runtime_s * 1e3;
  if (!r.has_solution) return sol;

  const int arcs = topo.arc_count();
  sol.objective = r.objective;
  sol.xstar.assign(r.col_values.begin(), r.col_values.begin() + topo.edge_count());
  sol.objective_exact = 0;
  for (double x : sol.xstar) {
    Rational q = recover_rational(x);
    sol.objective_exact += q;
    sol.xstar_exact.push_back(std::move(q));
  }
  const double scale = model.flow_scale();
  sol.flows.resize(static_cast<std::size_t>(model.commodity_count()) * arcs);
  sol.arc_load.assign(arcs, 0.0);
  for (int k = 0; k < model.commodity_count(); ++k) {
    for (ArcId a = 0; a < arcs; ++a) {
      double f = r.col_values[model.flow_col(k, a)] * scale;
      sol.flows[static_cast<std::size_t>(k) * arcs + a] = f;
      sol.arc_load[a] += f;
      if (model.symmetry() == FlowSymmetry::kIndexReduced) {
        sol.arc_load[Topology::reverse(a)] += f;
      }
    }
  }
  return sol;
}

}  // namespace

void verify_solution(const TocaModel& model, const FractionalSolution& sol, double tol) {
  if (!sol.has_solution) return;
  const Topology& topo = model.topology();
  const double scale = model.flow_scale();
  auto fail = [](const std::string& what) {
    throw SolverError("solution check failed: " + what);
  };
  for (const auto& e : topo.edges()) {
    double x = sol.xstar[e.id];
    auto [lo, hi] = model.edge_bounds(e.id);
    if (x < lo - tol || x > hi + tol) {
      fail("x of edge " + std::to_string(e.id) + " = " + std::to_string(x) +
           " outside its bounds");
    }
  }
  const int arcs = topo.arc_count();
  for (int k = 0; k < model.commodity_count(); ++k) {
    const Commodity& c = model.commodities()[k];
    std::vector<double> balance(topo.node_count(), 0.0);
    for (ArcId a = 0; a < arcs; ++a) {
      double f = sol.flow(k, a, arcs);
      if (f < -tol * scale) fail("negative flow");
      Arc arc = topo.arc(a);
      balance[arc.head] += f;
      balance[arc.tail] -= f;
    }
    for (const auto& s : c.sinks) balance[s.node] -= to_double(s.demand);
    balance[c.source] += to_double(c.total());
    for (double b : balance) {
      if (std::fabs(b) > tol * scale) fail("conservation of commodity " + std::to_string(k));
    }
  }
  for (ArcId a = 0; a < arcs; ++a) {
    const BidirectedEdge& e = topo.edge(a / 2);
    double cap = sol.xstar[e.id] * to_double(e.ccap());
    if (sol.arc_load[a] > cap + tol * scale) {
      fail("capacity of arc " + std::to_string(a) + ": load " +
           std::to_string(sol.arc_load[a]) + " > " + std::to_string(cap));
    }
  }
}

TocaSolver::TocaSolver(TocaModel& model, const SolverBackend& backend)
    : model_(model), session_(backend.open()) {
  session_->load(model_.program());
}

void TocaSolver::set_edge_bounds(EdgeId e, int lower, int upper) {
  model_.set_edge_bounds(e, lower, upper);
  session_->set_col_bounds(model_.x_col(e), lower, upper);
}

FractionalSolution TocaSolver::solve(const SolveLimits& limits) {
  SolveLimits l = limits;
  l.relax_integrality = model_.mode() == ModelMode::kLpRelaxation;
  SolveResult r = session_->solve(l);
  if (r.status == SolveStatus::kError) {
    throw SolverError("solver error: " + r.message);
  }
  FractionalSolution sol = extract(model_, r);
  if (sol.status == SolveStatus::kOptimal ||
      (sol.status == SolveStatus::kTimeLimit && sol.has_solution)) {
    verify_solution(model_, sol);
  }
  return sol;
}

FractionalSolution solve(TocaModel& model, const SolverBackend& backend,
                         const SolveLimits& limits) {
  TocaSolver solver(model, backend);
  return solver.solve(limits);
}

}  // namespace toca
