#include "toca/optimize.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>

#include "toca/errors.h"

namespace toca {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kRnd: return "RND";
    case Algorithm::kDown: return "DWN";
    case Algorithm::kUp: return "UP";
    case Algorithm::kExact: return "EXACT";
    case Algorithm::kUniform: return "UNIFORM";
  }
  return "RND";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "rnd") return Algorithm::kRnd;
  if (s == "dwn" || s == "down") return Algorithm::kDown;
  if (s == "up") return Algorithm::kUp;
  if (s == "exact") return Algorithm::kExact;
  if (s == "uniform") return Algorithm::kUniform;
  throw UsageError("unknown algorithm '" + std::string(name) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

TocaModel build_model(const Instance& inst, ModelMode mode) {
  if (!inst.topology) throw UsageError("instance has no topology");
  if (inst.traffic) {
    return build_traffic_aware(inst.topology, *inst.traffic, inst.rho, mode, inst.options);
  }
  return build_oblivious(inst.topology, inst.rho, mode);
}

int snap_floor(double x) { return static_cast<int>(std::floor(x + kIntegralityTol)); }
int snap_ceil(double x) { return static_cast<int>(std::ceil(x - kIntegralityTol)); }

// First LP solve shared by RND and the heuristics.
FractionalSolution initial_lp(TocaSolver& solver, const Instance& inst, AlgorithmRun& run) {
  FractionalSolution sol = solver.solve(SolveLimits{});
  if (sol.status != SolveStatus::kOptimal) {
    throw SolverError(std::string("LP relaxation ended with status ") +
                      to_string(sol.status));
  }
  if (!sol.is_basic) throw SolverError("backend returned a non-basic LP optimum");
  run.initial_xstar = sol.xstar;
  run.lp_objective = sol.objective_exact;
  run.lp_objective_value = sol.objective;
  if (!inst.traffic) {
    Lemma1Report rep = lemma1_check(sol, *inst.topology, inst.rho);
    run.lemma1 = rep;
    if (!rep.holds) {
      throw SolverError("LP optimum violates the basic-solution structure (l = " +
                        std::to_string(rep.l) + " > h = " + std::to_string(rep.h) +
                        "); check the backend returns vertex solutions");
    }
  }
  return sol;
}

ActivationSolution round_to_activation(const Topology& topo, const std::vector<double>& x) {
  std::vector<int> values(topo.edge_count());
  for (const auto& e : topo.edges()) {
    values[e.id] = std::clamp(static_cast<int>(std::lround(x[e.id])), 0, e.connections);
  }
  return ActivationSolution(std::move(values));
}

void finish(AlgorithmRun& run, Clock::time_point start) {
  run.z = run.activation.total();
  run.runtime_ms = elapsed_ms(start);
}

AlgorithmRun rounding_heuristic(const Instance& inst, const SolverBackend& backend,
                                bool down) {
  auto start = Clock::now();
  AlgorithmRun run;
  run.algorithm = down ? Algorithm::kDown : Algorithm::kUp;
  run.variant = inst.variant();
  const Topology& topo = *inst.topology;

  TocaModel model = build_model(inst, ModelMode::kLpRelaxation);
  TocaSolver solver(model, backend);
  FractionalSolution sol = initial_lp(solver, inst, run);

  for (const auto& e : topo.edges()) {
    double x = sol.xstar[e.id];
    int lo = std::clamp(snap_floor(x), 0, e.connections);
    int hi = std::clamp(snap_ceil(x), lo, e.connections);
    solver.set_edge_bounds(e.id, lo, hi);
  }

  auto resolve = [&](const char* what) {
    FractionalSolution s = solver.solve(SolveLimits{});
    if (s.status != SolveStatus::kOptimal && s.status != SolveStatus::kInfeasible) {
      throw SolverError(std::string(what) + " re-solve ended with status " +
                        to_string(s.status));
    }
    return s;
  };

  while (true) {
    int best = -1;
    double best_diff = kInfinity;
    for (const auto& e : topo.edges()) {
      double x = sol.xstar[e.id];
      if (is_integral(x)) continue;
      double diff = down ? x - std::floor(x) : std::ceil(x) - x;
      if (diff < best_diff - 1e-9) {
        best = e.id;
        best_diff = diff;
      }
    }
    if (best < 0) break;
    ++run.iterations;
    double x = sol.xstar[best];
    if (down) {
      solver.fix_edge(best, static_cast<int>(std::floor(x)));
      FractionalSolution s = resolve("down-fix");
      if (s.status == SolveStatus::kInfeasible) {
        ++run.infeasible_rollbacks;
        solver.fix_edge(best, static_cast<int>(std::ceil(x)));
        s = resolve("up-fix");
        if (s.status == SolveStatus::kInfeasible) {
          throw SolverError("up-fix of edge " + std::to_string(best) +
                            " is infeasible although the all-up completion is feasible");
        }
      }
      sol = std::move(s);
    } else {
      solver.fix_edge(best, static_cast<int>(std::ceil(x)));
      FractionalSolution s = resolve("up-fix");
      if (s.status == SolveStatus::kInfeasible) {
        throw SolverError("up-fix of edge " + std::to_string(best) + " is infeasible");
      }
      sol = std::move(s);
    }
  }
  run.activation = round_to_activation(topo, sol.xstar);
  finish(run, start);
  return run;
}

}  // namespace

AlgorithmRun rnd(const Instance& inst, const SolverBackend& backend) {
  auto start = Clock::now();
  AlgorithmRun run;
  run.algorithm = Algorithm::kRnd;
  run.variant = inst.variant();
  const Topology& topo = *inst.topology;
  TocaModel model = build_model(inst, ModelMode::kLpRelaxation);
  TocaSolver solver(model, backend);
  FractionalSolution sol = initial_lp(solver, inst, run);
  std::vector<int> values(topo.edge_count());
  for (const auto& e : topo.edges()) {
    values[e.id] = std::clamp(snap_ceil(sol.xstar[e.id]), 0, e.connections);
  }
  run.activation = ActivationSolution(std::move(values));
  finish(run, start);
  return run;
}

AlgorithmRun heur_down(const Instance& inst, const SolverBackend& backend) {
  return rounding_heuristic(inst, backend, true);
}

AlgorithmRun heur_up(const Instance& inst, const SolverBackend& backend) {
  return rounding_heuristic(inst, backend, false);
}

AlgorithmRun exact(const Instance& inst, const SolverBackend& backend,
                   const SolveLimits& limits) {
  auto start = Clock::now();
  AlgorithmRun run;
  run.algorithm = Algorithm::kExact;
  run.variant = inst.variant();
  TocaModel model = build_model(inst, ModelMode::kIlp);
  TocaSolver solver(model, backend);
  SolveLimits l = limits;
  l.relax_integrality = false;
  FractionalSolution sol = solver.solve(l);
  run.status = sol.status;
  if (!sol.has_solution) {
    throw SolverError(std::string("ILP ended with status ") + to_string(sol.status) +
                      " and no integral solution");
  }
  run.proven_optimal = sol.status == SolveStatus::kOptimal;
  run.best_bound = sol.best_bound;
  run.mip_gap = sol.mip_gap;
  for (double x : sol.xstar) {
    if (!is_integral(x)) throw SolverError("ILP returned a fractional x value");
  }
  run.activation = round_to_activation(*inst.topology, sol.xstar);
  finish(run, start);
  return run;
}

AlgorithmRun uniform_closed_form(const Topology& topo, const RetentionRatio& rho) {
  auto start = Clock::now();
  if (!topo.uniform_capacity()) {
    throw ModelError("closed form needs equal capacities on all edges; use rnd instead");
  }
  AlgorithmRun run;
  run.algorithm = Algorithm::kUniform;
  std::vector<int> values(topo.edge_count());
  for (const auto& e : topo.edges()) {
    values[e.id] = static_cast<int>(to_int64(ceil(rho.value() * e.connections)));
  }
  run.activation = ActivationSolution(std::move(values));
  finish(run, start);
  return run;
}

AlgorithmRun run_algorithm(Algorithm a, const Instance& inst, const SolverBackend& backend,
                           const SolveLimits& limits) {
  switch (a) {
    case Algorithm::kRnd: return rnd(inst, backend);
    case Algorithm::kDown: return heur_down(inst, backend);
    case Algorithm::kUp: return heur_up(inst, backend);
    case Algorithm::kExact: return exact(inst, backend, limits);
    case Algorithm::kUniform:
      if (inst.traffic) throw UsageError("the closed form has no traffic-aware variant");
      return uniform_closed_form(*inst.topology, inst.rho);
  }
  throw UsageError("unknown algorithm");
}

Rational approx_ratio_bound(const RetentionRatio& rho, int c_min) {
  if (c_min < 1) throw UsageError("c_min must be at least 1");
  Rational pc = rho.value() * c_min;
  if (pc < 1) return std::max(Rational(1) / pc, Rational(2));
  return 1 + Rational(1) / pc;
}

Rational uniform_ratio_bound(const RetentionRatio& rho, const Rational& c_avg) {
  if (c_avg <= 0) throw UsageError("average connection count must be positive");
  Rational a = Rational(1) / rho.value();
  Rational b = 1 + Rational(rho.q() - 1) / (Rational(rho.p()) * c_avg);
  return std::min(a, b);
}

}  // namespace toca
