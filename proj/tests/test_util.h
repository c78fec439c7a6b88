#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "toca/rational.h"
#include "toca/topology.h"
#include "toca/traffic.h"

namespace toca::testing {

std::string data_path(const std::string& name);

struct EdgeSpec {
  NodeId u;
  NodeId v;
  Rational capacity;
  int connections = 1;
  std::int64_t weight = 1;
};

Topology make_topology(int n, const std::vector<EdgeSpec>& edges, std::string name = "t");

// Edges s-a, a-v, v-c, c-t, s-t, s-v, v-t on nodes s=0, a=1, v=2, c=3, t=4.
Topology fig2_topology();
// (u, v) pairs of the solid edges and of the black edges.
std::vector<std::pair<NodeId, NodeId>> fig2_solid();
std::vector<std::pair<NodeId, NodeId>> fig2_black();
std::vector<std::pair<NodeId, NodeId>> active_pairs(const Topology& topo,
                                                    const ActivationSolution& act);

struct RandomSpec {
  int min_nodes = 3;
  int max_nodes = 8;
  int max_edges = 14;
  int max_capacity = 10;
  int max_connections = 5;
  int max_weight = 3;
  bool uniform_capacity = false;
  bool uniform_connections = false;
};

// Connected simple graph: random spanning tree plus random extra edges.
Topology random_topology(std::mt19937_64& rng, const RandomSpec& spec);

// Minimum utilisation with one commodity per ordered pair (no aggregation).
double oracle_mcf_mlu(const Topology& topo, const TrafficMatrix& t);

// LP relaxation optimum with one commodity per ordered demand pair and per-arc
// capacity rows. No symmetry constraints, no source aggregation.
double oracle_relaxation(const Topology& topo, const TrafficMatrix& demand);

// Minimum-sum feasible activation by plain enumeration, no pruning.
int oracle_optimum(const Topology& topo, const RetentionRatio& rho);

// ECMP fractions from Floyd-Warshall distances and recursive equal splits.
std::map<ArcId, Rational> oracle_ecmp(const Topology& topo, NodeId s, NodeId t);

}  // namespace toca::testing
