#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toca/evaluate.h"
#include "toca/lp_model.h"
#include "toca/rational.h"
#include "toca/solver.h"
#include "toca/topology.h"
#include "toca/traffic.h"

namespace toca {

enum class Algorithm { kRnd, kDown, kUp, kExact, kUniform };
const char* to_string(Algorithm a);
// Accepts rnd, dwn (or down), up, exact, uniform; case-insensitive.
Algorithm parse_algorithm(std::string_view name);

struct AlgorithmRun {
  Algorithm algorithm = Algorithm::kRnd;
  Variant variant = Variant::kOblivious;
  ActivationSolution activation;
  std::int64_t z = 0;
  // Optimum of the LP relaxation (absent for UNIFORM).
  std::optional<Rational> lp_objective;
  double lp_objective_value = 0;
  // First basic LP optimum; the heuristics stay inside its floor/ceil box.
  std::vector<double> initial_xstar;
  int iterations = 0;
  int infeasible_rollbacks = 0;
  double runtime_ms = 0;
  SolveStatus status = SolveStatus::kOptimal;
  // EXACT only: whether optimality was proven, and the solver's bound.
  bool proven_optimal = true;
  double best_bound = 0;
  double mip_gap = 0;
  std::optional<Lemma1Report> lemma1;
};

// Demands for the traffic-aware variant; the oblivious variant uses rho * T_A.
struct Instance {
  std::shared_ptr<const Topology> topology;
  RetentionRatio rho{Rational(1, 2)};
  std::optional<TrafficMatrix> traffic;
  TrafficAwareOptions options;

  Variant variant() const {
    return traffic ? Variant::kTrafficAware : Variant::kOblivious;
  }
};

AlgorithmRun rnd(const Instance& inst, const SolverBackend& backend = default_backend());
AlgorithmRun heur_down(const Instance& inst,
                       const SolverBackend& backend = default_backend());
AlgorithmRun heur_up(const Instance& inst, const SolverBackend& backend = default_backend());
AlgorithmRun exact(const Instance& inst, const SolverBackend& backend = default_backend(),
                   const SolveLimits& limits = {});
// x_e = ceil(rho * c_e); requires equal capacities on all edges.
AlgorithmRun uniform_closed_form(const Topology& topo, const RetentionRatio& rho);

AlgorithmRun run_algorithm(Algorithm a, const Instance& inst,
                           const SolverBackend& backend = default_backend(),
                           const SolveLimits& limits = {});

// max(1/(rho c_min), 2) if rho c_min < 1, else 1 + 1/(rho c_min).
Rational approx_ratio_bound(const RetentionRatio& rho, int c_min);
// min{1/rho, 1 + (q-1)/(p c_avg)} for rho = p/q in lowest terms.
Rational uniform_ratio_bound(const RetentionRatio& rho, const Rational& c_avg);

}  // namespace toca
