#include "toca/lp_model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>

#include "test_util.h"
#include "toca/errors.h"
#include "toca/repetita.h"

namespace toca {
namespace {

using testing::make_topology;

const RetentionRatio kHalf{Rational(1, 2)};

std::shared_ptr<const Topology> shared(Topology t) {
  return std::make_shared<const Topology>(std::move(t));
}

std::shared_ptr<const Topology> triangle() {
  return shared(make_topology(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}));
}

TEST(BuildOblivious, SingleEdgeShape) {
  auto topo = shared(make_topology(2, {{0, 1, 10, 5}}));
  TocaModel m = build_oblivious(topo, kHalf, ModelMode::kLpRelaxation);
  EXPECT_EQ(m.commodity_count(), 1);
  EXPECT_EQ(m.commodities()[0].source, 0);
  ASSERT_EQ(m.commodities()[0].sinks.size(), 1u);
  EXPECT_EQ(m.commodities()[0].sinks[0].demand, Rational(5));
  EXPECT_EQ(m.program().col_count(), 1 + 2);
  EXPECT_EQ(m.program().col_upper[m.x_col(0)], 5);
  EXPECT_EQ(m.capacity_row_count(), 1);
  EXPECT_EQ(m.symmetry_row_count(), 0);
  EXPECT_FALSE(m.program().has_integers());
  EXPECT_TRUE(build_oblivious(topo, kHalf, ModelMode::kIlp).program().has_integers());
}

TEST(BuildOblivious, Fig2Shape) {
  auto topo = shared(testing::fig2_topology());
  TocaModel m = build_oblivious(topo, kHalf, ModelMode::kIlp);
  EXPECT_EQ(m.commodity_count(), 7);
  EXPECT_EQ(m.program().col_count(), 7 + 7 * 14);
  EXPECT_EQ(m.conservation_row_count(), 7 * 5);
  EXPECT_EQ(m.capacity_row_count(), 7);
  for (const auto& c : m.commodities()) {
    ASSERT_EQ(c.sinks.size(), 1u);
    EXPECT_LT(c.source, c.sinks[0].node);
  }
}

TEST(BuildOblivious, ExplicitSymmetryShape) {
  auto topo = shared(testing::fig2_topology());
  TocaModel full = build_oblivious(topo, kHalf, ModelMode::kLpRelaxation,
                                   FlowSymmetry::kExplicitRows);
  EXPECT_EQ(full.commodity_count(), 14);
  EXPECT_EQ(full.capacity_row_count(), 14);
  EXPECT_EQ(full.symmetry_row_count(), 7 * 14);
  TocaModel none = build_oblivious(topo, kHalf, ModelMode::kLpRelaxation, FlowSymmetry::kNone);
  EXPECT_EQ(none.symmetry_row_count(), 0);
}

TEST(BuildTrafficAware, CommoditiesFollowSupport) {
  auto topo = shared(testing::fig2_topology());
  TrafficMatrix t(5);
  t.set(0, 4, Rational(1));
  t.set(0, 3, Rational(1, 2));
  t.set(3, 1, Rational(2));
  TocaModel per_pair = build_traffic_aware(topo, t, kHalf, ModelMode::kLpRelaxation);
  EXPECT_EQ(per_pair.commodity_count(), 3);
  EXPECT_EQ(per_pair.symmetry_row_count(), 0);
  TocaModel agg = build_traffic_aware(topo, t, kHalf, ModelMode::kLpRelaxation,
                                      {.aggregate_by_source = true});
  EXPECT_EQ(agg.commodity_count(), 2);
  EXPECT_EQ(agg.commodities()[0].total(), Rational(3, 4));
  EXPECT_THROW(build_traffic_aware(topo, TrafficMatrix(4), kHalf, ModelMode::kIlp),
               UsageError);
}

TEST(ModelBounds, Validation) {
  auto topo = shared(make_topology(2, {{0, 1, 10, 5}}));
  TocaModel m = build_oblivious(topo, kHalf, ModelMode::kLpRelaxation);
  m.set_edge_bounds(0, 1, 4);
  EXPECT_EQ(m.edge_bounds(0), std::make_pair(1, 4));
  ASSERT_EQ(m.bounds().size(), 1u);
  m.fix_edge(0, 3);
  EXPECT_EQ(m.bounds().size(), 1u);
  EXPECT_EQ(m.bounds()[0].lower, 3);
  EXPECT_THROW(m.set_edge_bounds(0, -1, 2), UsageError);
  EXPECT_THROW(m.set_edge_bounds(0, 0, 6), UsageError);
  EXPECT_THROW(m.set_edge_bounds(0, 3, 2), UsageError);
}

TEST(Solve, SingleEdge) {
  auto topo = shared(make_topology(2, {{0, 1, 10, 5}}));
  TocaModel m = build_oblivious(topo, kHalf, ModelMode::kLpRelaxation);
  FractionalSolution s = solve(m, default_backend());
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_TRUE(s.is_basic);
  EXPECT_EQ(s.xstar_exact[0], Rational(5, 2));
  EXPECT_EQ(s.objective_exact, Rational(5, 2));
  EXPECT_NEAR(s.arc_load[0], 5, 1e-9);
  EXPECT_NEAR(s.arc_load[1], 5, 1e-9);
  verify_solution(m, s);
}

TEST(Solve, UniformTriangle) {
  TocaModel m = build_oblivious(triangle(), kHalf, ModelMode::kLpRelaxation);
  FractionalSolution s = solve(m, default_backend());
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_EQ(s.objective_exact, Rational(3, 2));
  for (const Rational& x : s.xstar_exact) EXPECT_EQ(x, Rational(1, 2));
}

TEST(Solve, Fig2Ilp) {
  auto topo = shared(testing::fig2_topology());
  for (auto [rho, z] : {std::pair{Rational(1, 2), 5}, {Rational(3, 5), 6}, {Rational(2, 3), 6}}) {
    TocaModel m = build_oblivious(topo, RetentionRatio(rho), ModelMode::kIlp);
    FractionalSolution s = solve(m, default_backend());
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_EQ(s.objective_exact, Rational(z)) << to_string(rho);
    for (double x : s.xstar) EXPECT_TRUE(is_integral(x));
    verify_solution(m, s);
  }
}

TEST(Solve, TrafficAwareExamples) {
  auto topo = shared(make_topology(2, {{0, 1, 10, 5}}));
  TrafficMatrix t(2);
  t.set(0, 1, Rational(4));
  TocaModel m = build_traffic_aware(topo, t, kHalf, ModelMode::kLpRelaxation);
  FractionalSolution s = solve(m, default_backend());
  EXPECT_EQ(s.objective_exact, Rational(1));

  TocaModel empty =
      build_traffic_aware(triangle(), TrafficMatrix(3), kHalf, ModelMode::kLpRelaxation);
  FractionalSolution e = solve(empty, default_backend());
  ASSERT_EQ(e.status, SolveStatus::kOptimal);
  EXPECT_EQ(e.objective_exact, Rational(0));
}

TEST(Solve, RestrictedModelCanBeInfeasible) {
  auto topo = shared(make_topology(2, {{0, 1, 10, 5}}));
  TocaModel m = build_oblivious(topo, kHalf, ModelMode::kLpRelaxation);
  m.fix_edge(0, 2);
  EXPECT_EQ(solve(m, default_backend()).status, SolveStatus::kInfeasible);
}

TEST(Solve, PersistentSessionResolves) {
  TocaModel m = build_oblivious(triangle(), kHalf, ModelMode::kLpRelaxation);
  TocaSolver solver(m, default_backend());
  EXPECT_EQ(solver.solve({}).objective_exact, Rational(3, 2));
  solver.fix_edge(0, 0);
  FractionalSolution s = solver.solve({});
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_EQ(s.objective_exact, Rational(2));
  EXPECT_EQ(m.edge_bounds(0), std::make_pair(0, 0));
}

TEST(Solve, WritesLpFile) {
  TocaModel m = build_oblivious(triangle(), kHalf, ModelMode::kIlp);
  TocaSolver solver(m, default_backend());
  auto path = std::filesystem::temp_directory_path() / "toca_lp_model_test.lp";
  solver.write_model(path.string());
  std::string text = read_file(path);
  EXPECT_NE(text.find("x_0_1"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(VerifySolution, RejectsTamperedFlow) {
  TocaModel m = build_oblivious(triangle(), kHalf, ModelMode::kLpRelaxation);
  FractionalSolution s = solve(m, default_backend());
  verify_solution(m, s);
  FractionalSolution bad = s;
  bad.xstar[0] = 0;
  EXPECT_THROW(verify_solution(m, bad), SolverError);
}

TEST(IsIntegral, Tolerance) {
  EXPECT_TRUE(is_integral(3.0000005));
  EXPECT_FALSE(is_integral(3.00001));
  EXPECT_TRUE(is_integral(-2e-7));
}

class RandomLp : public ::testing::TestWithParam<int> {};

TEST_P(RandomLp, BuildersAgreeWithIndependentLp) {
  std::mt19937_64 rng(100 + GetParam());
  auto topo = shared(testing::random_topology(rng, {}));
  RetentionRatio rho(Rational(std::uniform_int_distribution<int>(1, 9)(rng), 10));
  const double expected =
      testing::oracle_relaxation(*topo, scale(worst_case_matrix(*topo), rho));
  const double tol = 1e-8 * std::max(1.0, expected);

  for (FlowSymmetry sym :
       {FlowSymmetry::kIndexReduced, FlowSymmetry::kExplicitRows, FlowSymmetry::kNone}) {
    TocaModel m = build_oblivious(topo, rho, ModelMode::kLpRelaxation, sym);
    FractionalSolution s = solve(m, default_backend());
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_NEAR(s.objective, expected, tol);
    verify_solution(m, s);
    for (const auto& e : topo->edges()) {
      for (ArcId a : {Topology::forward_arc(e.id), Topology::backward_arc(e.id)}) {
        EXPECT_LE(s.arc_load[a], s.xstar[e.id] * to_double(e.ccap()) + 1e-6 * to_double(e.capacity));
      }
    }
  }
  for (bool agg : {false, true}) {
    TocaModel m = build_traffic_aware(topo, worst_case_matrix(*topo), rho,
                                      ModelMode::kLpRelaxation, {.aggregate_by_source = agg});
    FractionalSolution s = solve(m, default_backend());
    EXPECT_NEAR(s.objective, expected, tol);
  }
}

TEST_P(RandomLp, IlpBoundsRelaxation) {
  std::mt19937_64 rng(200 + GetParam());
  auto topo = shared(testing::random_topology(rng, {.max_nodes = 6, .max_edges = 9}));
  RetentionRatio rho(Rational(1, 2));
  TocaModel lp = build_oblivious(topo, rho, ModelMode::kLpRelaxation);
  TocaModel ilp = build_oblivious(topo, rho, ModelMode::kIlp);
  FractionalSolution a = solve(lp, default_backend());
  FractionalSolution b = solve(ilp, default_backend());
  ASSERT_EQ(b.status, SolveStatus::kOptimal);
  EXPECT_LE(a.objective, b.objective + 1e-9);
  EXPECT_GE(b.objective_exact, Rational(ceil(a.objective_exact)));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomLp, ::testing::Range(0, 12));

}  // namespace
}  // namespace toca
