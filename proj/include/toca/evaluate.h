#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "toca/lp_model.h"
#include "toca/solver.h"
#include "toca/topology.h"
#include "toca/traffic.h"

namespace toca {

enum class Router { kMcf, kTwoSr, kSpr };
const char* to_string(Router r);

inline constexpr double kFeasibilityTol = 1e-6;

struct MluResult {
  // Minimum achievable maximum link utilisation; +inf when a positive demand
  // has no path.
  double mlu = 0;
  bool feasible = true;
  Router router = Router::kMcf;
  double runtime_ms = 0;
};

// Minimum lambda such that T routes as a multi-commodity flow with every arc
// load <= lambda * cap. Commodities are aggregated per source.
MluResult mcf_mlu(const Topology& topo, const TrafficMatrix& t,
                  const SolverBackend& backend = default_backend());

bool mcf_feasible(const Topology& topo, const ActivationSolution& act,
                  const TrafficMatrix& t,
                  const SolverBackend& backend = default_backend());

// Per-destination ECMP split from one source: fraction[t] maps arc -> share
// of the (source, t) traffic crossing it. Unreachable destinations map to an
// empty set; fraction[source] is empty.
struct EcmpFractions {
  NodeId source = 0;
  std::vector<std::map<ArcId, Rational>> fraction;
  std::vector<std::int64_t> distance;  // -1 when unreachable
};

EcmpFractions ecmp_fractions(const Topology& topo, NodeId source);

// Shortest-path routing with ECMP splits; no optimisation involved.
MluResult spr_mlu(const Topology& topo, const TrafficMatrix& t);

// Each commodity splits over midpoints m (m = s is the plain shortest path);
// both legs follow ECMP. Split fractions are optimised to minimise MLU.
MluResult two_sr_mlu(const Topology& topo, const TrafficMatrix& t,
                     const SolverBackend& backend = default_backend());

struct BruteForceOptions {
  std::int64_t max_candidates = 2'000'000;
};

struct BruteForceResult {
  ActivationSolution activation;
  std::int64_t value = 0;
  std::int64_t candidates_checked = 0;  // LP feasibility checks performed
};

// Exhaustive search for the minimum-sum activation routing rho * T_A; ties go
// to the lexicographically smallest vector. Throws RefusalError when the
// product of (c_e + 1) exceeds the candidate limit.
BruteForceResult brute_force_optimum(const Topology& topo, const RetentionRatio& rho,
                                     BruteForceOptions options = {},
                                     const SolverBackend& backend = default_backend());

struct Lemma1Report {
  bool holds = true;
  int h = 0;  // x*_e = c_e
  int l = 0;  // x*_e in (0, rho * c_e)
};

Lemma1Report lemma1_check(const FractionalSolution& sol, const Topology& topo,
                          const RetentionRatio& rho, double tol = kIntegralityTol);

}  // namespace toca
