#include "toca/evaluate.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.h"
#include "toca/errors.h"
#include "toca/lp_model.h"
#include "toca/repetita.h"

namespace toca {
namespace {

using testing::make_topology;

TrafficMatrix single(int n, NodeId s, NodeId t, Rational v) {
  TrafficMatrix m(n);
  m.set(s, t, v);
  return m;
}

TEST(McfMlu, Basics) {
  Topology edge = make_topology(2, {{0, 1, 10}});
  EXPECT_NEAR(mcf_mlu(edge, single(2, 0, 1, 5)).mlu, 0.5, 1e-9);
  EXPECT_EQ(mcf_mlu(edge, TrafficMatrix(2)).mlu, 0);
  Topology tri = make_topology(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  EXPECT_NEAR(mcf_mlu(tri, single(3, 0, 1, 2)).mlu, 1, 1e-9);
  EXPECT_NEAR(mcf_mlu(tri, single(3, 0, 1, 3)).mlu, 1.5, 1e-9);
}

TEST(McfMlu, DisconnectedDemandIsInfinite) {
  Topology t = reduce(make_topology(3, {{0, 1, 1}, {1, 2, 1}}), ActivationSolution({1, 0}));
  MluResult r = mcf_mlu(t, single(3, 0, 2, 1));
  EXPECT_TRUE(std::isinf(r.mlu));
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(mcf_mlu(t, single(3, 0, 1, 1)).mlu, 1);
}

TEST(McfFeasible, Fig2Examples) {
  Topology topo = testing::fig2_topology();
  TrafficMatrix half = scale(worst_case_matrix(topo), Rational(1, 2));
  EXPECT_TRUE(mcf_feasible(topo, ActivationSolution::full(topo), half));
  EXPECT_FALSE(mcf_feasible(topo, ActivationSolution::none(topo), half));
  EXPECT_THROW(mcf_feasible(topo, ActivationSolution({1, 1}), half), UsageError);
}

TEST(Ecmp, SquareSplitsEvenly) {
  Topology sq = make_topology(4, {{0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, 1}});
  EcmpFractions f = ecmp_fractions(sq, 0);
  EXPECT_EQ(f.distance[3], 2);
  EXPECT_EQ(f.fraction[3].at(*sq.find_arc(0, 1)), Rational(1, 2));
  EXPECT_EQ(f.fraction[3].at(*sq.find_arc(2, 3)), Rational(1, 2));
  EXPECT_TRUE(f.fraction[0].empty());
  EXPECT_NEAR(spr_mlu(sq, single(4, 0, 3, 1)).mlu, 0.5, 1e-12);
}

TEST(Ecmp, DirectionalWeights) {
  Topology t = parse_topology(
      "NODES 3\nlabel x y\na 0 0\nb 0 0\nc 0 0\nEDGES 6\nlabel src dest weight bw delay\n"
      "e 0 1 1 10 0\ne 1 0 5 10 0\ne 1 2 1 10 0\ne 2 1 1 10 0\ne 0 2 3 10 0\ne 2 0 1 10 0\n");
  EXPECT_EQ(ecmp_fractions(t, 0).distance[2], 2);
  EXPECT_EQ(ecmp_fractions(t, 1).distance[0], 2);
  EXPECT_EQ(ecmp_fractions(t, 1).fraction[0].size(), 2u);
}

TEST(Ecmp, UnreachableAndZeroWeight) {
  Topology t = reduce(make_topology(3, {{0, 1, 1}, {1, 2, 1}}), ActivationSolution({1, 0}));
  EcmpFractions f = ecmp_fractions(t, 0);
  EXPECT_EQ(f.distance[2], -1);
  EXPECT_TRUE(f.fraction[2].empty());
  EXPECT_TRUE(std::isinf(spr_mlu(t, single(3, 0, 2, 1)).mlu));
  Topology zero = make_topology(2, {{0, 1, 1, 1, 0}});
  EXPECT_THROW(ecmp_fractions(zero, 0), ModelError);
}

TEST(Ecmp, MatchesOracleOnRandomGraphs) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    Topology topo = testing::random_topology(rng, {.max_nodes = 9, .max_edges = 16});
    for (NodeId s = 0; s < topo.node_count(); ++s) {
      EcmpFractions f = ecmp_fractions(topo, s);
      for (NodeId t = 0; t < topo.node_count(); ++t) {
        EXPECT_EQ(f.fraction[t], testing::oracle_ecmp(topo, s, t)) << s << "->" << t;
      }
    }
  }
}

TEST(TwoSr, DetourBeatsShortestPath) {
  // Shortest path 0-1 is the thin direct edge; a midpoint at 2 uses the wide detour.
  Topology t = make_topology(3, {{0, 1, 1, 1, 1}, {0, 2, 10, 1, 1}, {1, 2, 10, 1, 1}});
  TrafficMatrix d = single(3, 0, 1, 2);
  EXPECT_NEAR(spr_mlu(t, d).mlu, 2, 1e-12);
  EXPECT_NEAR(two_sr_mlu(t, d).mlu, 2.0 / 11.0, 1e-9);
  EXPECT_NEAR(mcf_mlu(t, d).mlu, 2.0 / 11.0, 1e-9);
}

TEST(TwoSr, Fig2FullNetwork) {
  Topology topo = testing::fig2_topology();
  TrafficMatrix d = scale(worst_case_matrix(topo), Rational(1, 2));
  EXPECT_NEAR(mcf_mlu(topo, d).mlu, 0.5, 1e-9);
  EXPECT_NEAR(two_sr_mlu(topo, d).mlu, 0.5, 1e-9);
  EXPECT_NEAR(spr_mlu(topo, d).mlu, 0.5, 1e-12);
}

TEST(Sandwich, RandomInstances) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Topology topo = testing::random_topology(rng, {.max_nodes = 7, .max_edges = 12});
    TrafficMatrix d = sample_routable_matrix(topo, trial);
    double m = mcf_mlu(topo, d).mlu;
    double two = two_sr_mlu(topo, d).mlu;
    double spr = spr_mlu(topo, d).mlu;
    EXPECT_NEAR(m, testing::oracle_mcf_mlu(topo, d), 1e-7 * std::max(1.0, m));
    EXPECT_LE(m, two + 1e-8 * std::max(1.0, two));
    EXPECT_LE(two, spr + 1e-8 * std::max(1.0, spr));
  }
}

TEST(BruteForce, Examples) {
  RetentionRatio half(Rational(1, 2));
  Topology tri = make_topology(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  BruteForceResult r = brute_force_optimum(tri, half);
  EXPECT_EQ(r.value, 2);
  EXPECT_EQ(r.activation, ActivationSolution({0, 1, 1}));
  EXPECT_EQ(brute_force_optimum(make_topology(2, {{0, 1, 10, 5}}), half).value, 3);
  EXPECT_EQ(brute_force_optimum(testing::fig2_topology(), half).value, 5);
  EXPECT_EQ(brute_force_optimum(testing::fig2_topology(), RetentionRatio(Rational(3, 5))).value, 6);
}

TEST(BruteForce, RefusesLargeInstances) {
  Topology t = load_topology(testing::data_path("repetita/Latnet.graph"));
  EXPECT_THROW(brute_force_optimum(t, RetentionRatio(Rational(1, 2))), RefusalError);
  EXPECT_THROW(brute_force_optimum(testing::fig2_topology(), RetentionRatio(Rational(1, 2)),
                                   {.max_candidates = 100}),
               RefusalError);
}

TEST(BruteForce, MatchesPlainEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    Topology topo = testing::random_topology(
        rng, {.max_nodes = 5, .max_edges = 6, .max_connections = 3});
    RetentionRatio rho(Rational(std::uniform_int_distribution<int>(2, 8)(rng), 10));
    BruteForceResult r = brute_force_optimum(topo, rho);
    EXPECT_EQ(r.value, testing::oracle_optimum(topo, rho));
    EXPECT_EQ(r.value, r.activation.total());
    EXPECT_TRUE(mcf_feasible(topo, r.activation, scale(worst_case_matrix(topo), rho)));
  }
}

TEST(BasicStructure, CountsOnBasicSolutions) {
  Topology topo = make_topology(2, {{0, 1, 10, 5}});
  RetentionRatio half(Rational(1, 2));
  TocaModel m = build_oblivious(std::make_shared<const Topology>(topo), half,
                                ModelMode::kLpRelaxation);
  FractionalSolution s = solve(m, default_backend());
  Lemma1Report rep = lemma1_check(s, topo, half);
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.h, 0);
  EXPECT_EQ(rep.l, 0);

  FractionalSolution fake = s;
  fake.xstar = {1.0};
  Lemma1Report bad = lemma1_check(fake, topo, half);
  EXPECT_FALSE(bad.holds);
  EXPECT_EQ(bad.l, 1);
  fake.xstar = {5.0};
  EXPECT_EQ(lemma1_check(fake, topo, half).h, 1);
}

TEST(RouterNames, Strings) {
  EXPECT_STREQ(to_string(Router::kMcf), "MCF");
  EXPECT_STREQ(to_string(Router::kTwoSr), "TWO_SR");
  EXPECT_STREQ(to_string(Router::kSpr), "SPR");
}

}  // namespace
}  // namespace toca
