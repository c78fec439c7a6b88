#include "toca/optimize.h"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "test_util.h"
#include "toca/errors.h"
#include "toca/evaluate.h"

namespace toca {
namespace {

using testing::make_topology;

Instance oblivious(Topology t, Rational rho = Rational(1, 2)) {
  Instance inst;
  inst.topology = std::make_shared<const Topology>(std::move(t));
  inst.rho = RetentionRatio(rho);
  return inst;
}

Topology triangle() { return make_topology(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }
Topology single_edge() { return make_topology(2, {{0, 1, 10, 5}}); }

TEST(ParseAlgorithm, Names) {
  EXPECT_EQ(parse_algorithm("RND"), Algorithm::kRnd);
  EXPECT_EQ(parse_algorithm("dwn"), Algorithm::kDown);
  EXPECT_EQ(parse_algorithm("Down"), Algorithm::kDown);
  EXPECT_EQ(parse_algorithm("up"), Algorithm::kUp);
  EXPECT_EQ(parse_algorithm("exact"), Algorithm::kExact);
  EXPECT_EQ(parse_algorithm("uniform"), Algorithm::kUniform);
  EXPECT_THROW(parse_algorithm("greedy"), std::invalid_argument);
  EXPECT_STREQ(to_string(Algorithm::kDown), "DWN");
}

TEST(Rnd, SingleEdge) {
  AlgorithmRun r = rnd(oblivious(single_edge()));
  EXPECT_EQ(r.activation, ActivationSolution({3}));
  EXPECT_EQ(r.z, 3);
  EXPECT_EQ(*r.lp_objective, Rational(5, 2));
}

TEST(Rnd, UniformTriangle) {
  AlgorithmRun r = rnd(oblivious(triangle()));
  EXPECT_EQ(r.activation, ActivationSolution({1, 1, 1}));
  EXPECT_EQ(r.z, 3);
}

TEST(Rnd, Fig2RoundsEveryHalfUp) {
  AlgorithmRun r = rnd(oblivious(testing::fig2_topology()));
  EXPECT_EQ(*r.lp_objective, Rational(7, 2));
  EXPECT_EQ(r.z, 7);
}

TEST(HeurDown, SingleEdgeRollsBack) {
  AlgorithmRun r = heur_down(oblivious(single_edge()));
  EXPECT_EQ(r.z, 3);
  EXPECT_EQ(r.infeasible_rollbacks, 1);
  EXPECT_EQ(r.iterations, 1);
}

TEST(HeurDown, UniformTriangle) {
  AlgorithmRun r = heur_down(oblivious(triangle()));
  EXPECT_EQ(r.z, 2);
  EXPECT_EQ(r.infeasible_rollbacks, 0);
  EXPECT_EQ(r.activation, ActivationSolution({0, 1, 1}));
}

TEST(HeurDown, Fig2) { EXPECT_EQ(heur_down(oblivious(testing::fig2_topology())).z, 5); }

TEST(HeurUp, Examples) {
  EXPECT_EQ(heur_up(oblivious(triangle())).z, 2);
  EXPECT_EQ(heur_up(oblivious(single_edge())).z, 3);
  EXPECT_EQ(heur_up(oblivious(testing::fig2_topology())).z, 5);
}

TEST(HeurUp, IntegralLpNeedsNoIterations) {
  Topology t = make_topology(2, {{0, 1, 10, 4}});
  AlgorithmRun r = heur_up(oblivious(t));
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.activation, ActivationSolution({2}));
  EXPECT_EQ(heur_down(oblivious(t)).iterations, 0);
}

TEST(Exact, Examples) {
  EXPECT_EQ(exact(oblivious(triangle())).z, 2);
  AlgorithmRun f05 = exact(oblivious(testing::fig2_topology()));
  EXPECT_EQ(f05.z, 5);
  EXPECT_TRUE(f05.proven_optimal);
  EXPECT_EQ(f05.status, SolveStatus::kOptimal);
  EXPECT_EQ(exact(oblivious(testing::fig2_topology(), Rational(3, 5))).z, 6);
  EXPECT_EQ(exact(oblivious(testing::fig2_topology(), Rational(2, 3))).z, 6);
}

// The solid set at rho = 1/2 and the black set at rho in (1/2, 2/3] are
// optimal, but the search space has other optima with the same objective.
TEST(Exact, Fig2ReferenceSetsAreOptimalAndNotNested) {
  Topology topo = testing::fig2_topology();
  auto activation_of = [&](const std::vector<std::pair<NodeId, NodeId>>& pairs) {
    ActivationSolution act = ActivationSolution::none(topo);
    for (auto [u, v] : pairs) act[*topo.find_edge(u, v)] = 1;
    return act;
  };
  ActivationSolution solid = activation_of(testing::fig2_solid());
  ActivationSolution black = activation_of(testing::fig2_black());
  auto demand = [&](Rational rho) { return scale(worst_case_matrix(topo), rho); };
  EXPECT_TRUE(mcf_feasible(topo, solid, demand(Rational(1, 2))));
  EXPECT_FALSE(mcf_feasible(topo, solid, demand(Rational(3, 5))));
  EXPECT_TRUE(mcf_feasible(topo, black, demand(Rational(2, 3))));
  EXPECT_FALSE(mcf_feasible(topo, black, demand(Rational(7, 10))));
  EXPECT_EQ(solid.total(), 5);
  EXPECT_EQ(black.total(), 6);
  bool solid_in_black = true, black_in_solid = true;
  for (int e = 0; e < topo.edge_count(); ++e) {
    if (solid[e] > black[e]) solid_in_black = false;
    if (black[e] > solid[e]) black_in_solid = false;
  }
  EXPECT_FALSE(solid_in_black);
  EXPECT_FALSE(black_in_solid);
}

TEST(Exact, RespectsTimeLimitRecord) {
  SolveLimits limits;
  limits.time_limit_s = 60;
  AlgorithmRun r = exact(oblivious(testing::fig2_topology()), default_backend(), limits);
  EXPECT_NEAR(r.best_bound, 5, 1e-6);
  EXPECT_LE(r.mip_gap, 1e-9);
}

TEST(UniformClosedForm, Values) {
  Topology t = make_topology(3, {{0, 1, 7, 5}, {1, 2, 7, 3}, {0, 2, 7, 1}});
  AlgorithmRun r = uniform_closed_form(t, RetentionRatio(Rational(1, 2)));
  EXPECT_EQ(r.activation, ActivationSolution({3, 2, 1}));
  EXPECT_EQ(r.z, 6);
  EXPECT_FALSE(r.lp_objective);
  EXPECT_EQ(uniform_closed_form(t, RetentionRatio(Rational(2, 5))).activation,
            ActivationSolution({2, 2, 1}));
  EXPECT_THROW(uniform_closed_form(make_topology(3, {{0, 1, 1}, {1, 2, 2}}),
                                   RetentionRatio(Rational(1, 2))),
               ModelError);
}

// Equal capacities with unequal connection counts: the triangle with
// c = (5, 1, 1) at rho = 1/2 is served by the two unit bundles alone.
TEST(UniformClosedForm, UnequalConnectionCountsBreakTheClosedForm) {
  Topology t = make_topology(3, {{0, 1, 1, 5}, {1, 2, 1, 1}, {0, 2, 1, 1}});
  Instance inst = oblivious(t);
  EXPECT_EQ(uniform_closed_form(t, inst.rho).z, 5);
  AlgorithmRun ex = exact(inst);
  EXPECT_EQ(ex.z, 2);
  EXPECT_EQ(ex.activation, ActivationSolution({0, 1, 1}));
  EXPECT_EQ(testing::oracle_optimum(t, inst.rho), 2);
}

TEST(UniformClosedForm, MatchesRndOnUniformInstances) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    Topology t = testing::random_topology(
        rng, {.uniform_capacity = true, .uniform_connections = true});
    for (Rational rho : {Rational(3, 10), Rational(1, 2), Rational(7, 10)}) {
      Instance inst = oblivious(t, rho);
      AlgorithmRun r = rnd(inst);
      for (double x : r.initial_xstar) {
        EXPECT_NEAR(x, to_double(rho * t.edge(0).connections), 1e-9);
      }
      EXPECT_EQ(uniform_closed_form(t, inst.rho).activation, r.activation);
    }
  }
}

TEST(RatioBounds, Formulas) {
  RetentionRatio half(Rational(1, 2));
  EXPECT_EQ(approx_ratio_bound(half, 1), Rational(2));
  EXPECT_EQ(approx_ratio_bound(half, 5), Rational(7, 5));
  EXPECT_EQ(approx_ratio_bound(RetentionRatio(Rational(3, 10)), 1), Rational(10, 3));
  EXPECT_EQ(approx_ratio_bound(RetentionRatio(Rational(3, 10)), 3), Rational(2));
  EXPECT_EQ(uniform_ratio_bound(half, Rational(5)), Rational(6, 5));
  EXPECT_EQ(uniform_ratio_bound(half, Rational(1, 2)), Rational(2));
  EXPECT_EQ(uniform_ratio_bound(RetentionRatio(Rational(2, 3)), Rational(1)), Rational(3, 2));
  EXPECT_THROW(approx_ratio_bound(half, 0), std::invalid_argument);
}

TEST(RunAlgorithm, Dispatch) {
  Instance inst = oblivious(triangle());
  EXPECT_EQ(run_algorithm(Algorithm::kUniform, inst).z, 3);
  EXPECT_EQ(run_algorithm(Algorithm::kExact, inst).algorithm, Algorithm::kExact);
}

TEST(TrafficAware, SingleDemand) {
  Instance inst = oblivious(make_topology(3, {{0, 1, 10, 5}, {1, 2, 10, 5}, {0, 2, 10, 5}}));
  TrafficMatrix t(3);
  t.set(0, 1, Rational(4));
  inst.traffic = t;
  for (Algorithm a : {Algorithm::kRnd, Algorithm::kDown, Algorithm::kUp, Algorithm::kExact}) {
    AlgorithmRun r = run_algorithm(a, inst);
    EXPECT_EQ(r.variant, Variant::kTrafficAware);
    EXPECT_EQ(r.z, 1) << to_string(a);
    EXPECT_FALSE(r.lemma1);
  }
}

class RandomRuns : public ::testing::TestWithParam<int> {};

TEST_P(RandomRuns, InvariantsAgainstOracle) {
  std::mt19937_64 rng(900 + GetParam());
  Topology topo = testing::random_topology(rng, {.max_nodes = 5, .max_edges = 6,
                                                 .max_connections = 3});
  const Rational rho(std::uniform_int_distribution<int>(2, 8)(rng), 10);
  Instance inst = oblivious(topo, rho);
  const int opt = testing::oracle_optimum(topo, inst.rho);
  const TrafficMatrix demand = scale(worst_case_matrix(topo), inst.rho);
  const Rational bound = approx_ratio_bound(inst.rho, topo.min_connections());

  AlgorithmRun ex = exact(inst);
  EXPECT_EQ(ex.z, opt);
  for (Algorithm a : {Algorithm::kRnd, Algorithm::kDown, Algorithm::kUp}) {
    AlgorithmRun r = run_algorithm(a, inst);
    EXPECT_EQ(r.z, r.activation.total());
    EXPECT_GE(r.z, ceil(*r.lp_objective - Rational(1, 1000000)));
    EXPECT_LE(Rational(r.z), bound * opt) << to_string(a);
    EXPECT_LE(testing::oracle_mcf_mlu(reduce(topo, r.activation), demand), 1 + 1e-6);
    ASSERT_TRUE(r.lemma1);
    EXPECT_TRUE(r.lemma1->holds);
    if (a != Algorithm::kRnd) {
      EXPECT_LE(r.iterations, topo.edge_count());
      for (int e = 0; e < topo.edge_count(); ++e) {
        EXPECT_LE(std::floor(r.initial_xstar[e] + 1e-6), r.activation[e]);
        EXPECT_GE(std::ceil(r.initial_xstar[e] - 1e-6), r.activation[e]);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomRuns, ::testing::Range(0, 15));

}  // namespace
}  // namespace toca
