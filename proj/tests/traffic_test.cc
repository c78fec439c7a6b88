#include "toca/traffic.h"

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"
#include "toca/errors.h"

namespace toca {
namespace {

TEST(TrafficMatrix, SetAddAndTotals) {
  TrafficMatrix t(3);
  t.set(0, 1, Rational(2));
  t.add(0, 1, Rational(1, 2));
  t.add(2, 0, Rational(1));
  EXPECT_EQ(t(0, 1), Rational(5, 2));
  EXPECT_EQ(t(1, 0), Rational(0));
  EXPECT_EQ(t.total(), Rational(7, 2));
  t.set(0, 1, Rational(0));
  EXPECT_EQ(t.support_size(), 1);
  EXPECT_THROW(t.set(1, 1, Rational(1)), UsageError);
  EXPECT_THROW(t.set(0, 3, Rational(1)), UsageError);
  EXPECT_THROW(t.set(0, 1, Rational(-1)), UsageError);
}

TEST(RetentionRatio, Validation) {
  EXPECT_EQ(RetentionRatio::parse("2/4").value(), Rational(1, 2));
  EXPECT_EQ(RetentionRatio::parse("0.6").p(), BigInt(3));
  EXPECT_EQ(RetentionRatio::parse("0.6").q(), BigInt(5));
  for (const char* bad : {"0", "1", "1.5", "-0.2", "x"}) {
    EXPECT_THROW(RetentionRatio::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(WorstCaseMatrix, OneEntryPerArc) {
  Topology topo = testing::make_topology(3, {{0, 1, 4, 2}, {1, 2, Rational(3, 2), 1}});
  TrafficMatrix t = worst_case_matrix(topo);
  EXPECT_EQ(t.support_size(), 4);
  EXPECT_EQ(t(0, 1), Rational(4));
  EXPECT_EQ(t(1, 0), Rational(4));
  EXPECT_EQ(t(2, 1), Rational(3, 2));
  EXPECT_EQ(t(0, 2), Rational(0));
  EXPECT_EQ(scale(t, RetentionRatio(Rational(1, 2)))(0, 1), Rational(2));
}

TEST(SampleRoutableMatrix, DeterministicInSeed) {
  Topology topo = testing::fig2_topology();
  EXPECT_EQ(sample_routable_matrix(topo, 5), sample_routable_matrix(topo, 5));
  EXPECT_NE(sample_routable_matrix(topo, 5), sample_routable_matrix(topo, 6));
}

TEST(SampleRoutableMatrix, RoutableByPerPairOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    Topology topo = testing::random_topology(rng, {});
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      TrafficMatrix t = sample_routable_matrix(topo, 1000 * trial + seed);
      EXPECT_FALSE(t.empty());
      EXPECT_LE(testing::oracle_mcf_mlu(topo, t), 1 + 1e-9) << topo.name() << " " << seed;
    }
  }
}

}  // namespace
}  // namespace toca
