#include "toca/topology.h"

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"
#include "toca/errors.h"
#include "toca/repetita.h"

namespace toca {
namespace {

using testing::make_topology;

const char* kTwoNodes =
    "NODES 2\n"
    "label x y\n"
    "a 0 0\n"
    "b 1 1\n"
    "\n"
    "EDGES 2\n"
    "label src dest weight bw delay\n"
    "e0 0 1 7 10000 3\n"
    "e1 1 0 9 10000 3\n";

TEST(ParseTopology, MinimalFile) {
  Topology t = parse_topology(kTwoNodes, 5, "two");
  EXPECT_EQ(t.name(), "two");
  ASSERT_EQ(t.node_count(), 2);
  ASSERT_EQ(t.edge_count(), 1);
  const BidirectedEdge& e = t.edge(0);
  EXPECT_EQ(e.u, 0);
  EXPECT_EQ(e.v, 1);
  EXPECT_EQ(e.capacity, Rational(10000));
  EXPECT_EQ(e.connections, 5);
  EXPECT_EQ(e.ccap(), Rational(2000));
  EXPECT_EQ(e.weight, 7);
  EXPECT_EQ(e.reverse_weight, 9);
  EXPECT_EQ(t.nodes()[1].label, "b");
  EXPECT_EQ(t.arc(0).weight, 7);
  EXPECT_EQ(t.arc(1).weight, 9);
  EXPECT_EQ(t.arc(1).tail, 1);
}

TEST(ParseTopology, Fig2Fixture) {
  Topology t = load_topology(testing::data_path("fig2.graph"), 1);
  EXPECT_EQ(t.name(), "fig2");
  EXPECT_EQ(t.node_count(), 5);
  ASSERT_EQ(t.edge_count(), 7);
  for (const auto& e : t.edges()) {
    EXPECT_EQ(e.capacity, Rational(1));
    EXPECT_EQ(e.connections, 1);
  }
}

TEST(ParseTopology, ReverseEdgeFirstKeepsOrientation) {
  Topology t = parse_topology(
      "NODES 2\nlabel x y\na 0 0\nb 0 0\nEDGES 2\nlabel src dest weight bw delay\n"
      "e0 1 0 4 5 0\ne1 0 1 2 5 0\n");
  EXPECT_EQ(t.edge(0).u, 0);
  EXPECT_EQ(t.edge(0).weight, 2);
  EXPECT_EQ(t.edge(0).reverse_weight, 4);
}

TEST(ParseTopology, DecimalAndScientificBandwidth) {
  Topology t = parse_topology(
      "NODES 3\nlabel x y\na 0 0\nb 0 0\nc 0 0\nEDGES 4\nlabel src dest weight bw delay\n"
      "e0 0 1 1 2.5 0\ne1 1 0 1 2.5 0\ne2 1 2 1 1e6 0\ne3 2 1 1 1e6 0\n");
  EXPECT_EQ(t.edge(0).capacity, Rational(5, 2));
  EXPECT_EQ(t.edge(1).capacity, Rational(1000000));
}

std::string edges_file(const std::string& edge_lines, int count) {
  return "NODES 6\nlabel x y\na 0 0\nb 0 0\nc 0 0\nd 0 0\ne 0 0\nf 0 0\n\nEDGES " +
         std::to_string(count) + "\nlabel src dest weight bw delay\n" + edge_lines;
}

TEST(ParseTopology, AsymmetricBandwidthIsModelError) {
  std::string text = edges_file(
      "x 0 1 1 10 0\nx 1 0 1 10 0\nx 1 2 1 10 0\nx 2 1 1 10 0\nx 2 3 1 10 0\n"
      "x 3 2 1 10 0\nx 3 5 1 100 0\nx 5 3 1 90 0\nx 3 4 1 10 0\nx 4 3 1 10 0\n",
      10);
  EXPECT_THROW(parse_topology(text), ModelError);
}

TEST(ParseTopology, MissingReverseIsModelError) {
  EXPECT_THROW(parse_topology("NODES 2\nlabel x y\na 0 0\nb 0 0\nEDGES 1\n"
                              "label src dest weight bw delay\ne0 0 1 1 5 0\n"),
               ModelError);
}

TEST(ParseTopology, SelfLoopIsModelError) {
  EXPECT_THROW(parse_topology("NODES 2\nlabel x y\na 0 0\nb 0 0\nEDGES 2\n"
                              "label src dest weight bw delay\ne0 0 0 1 5 0\ne1 0 0 1 5 0\n"),
               ModelError);
}

TEST(ParseTopology, DuplicateArcIsModelError) {
  EXPECT_THROW(parse_topology("NODES 2\nlabel x y\na 0 0\nb 0 0\nEDGES 3\n"
                              "label src dest weight bw delay\n"
                              "e0 0 1 1 5 0\ne1 1 0 1 5 0\ne2 0 1 1 5 0\n"),
               ModelError);
}

TEST(ParseTopology, DisconnectedIsModelError) {
  EXPECT_THROW(parse_topology("NODES 3\nlabel x y\na 0 0\nb 0 0\nc 0 0\nEDGES 2\n"
                              "label src dest weight bw delay\ne0 0 1 1 5 0\ne1 1 0 1 5 0\n"),
               ModelError);
}

int parse_error_line(const std::string& text) {
  try {
    parse_topology(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(ParseTopology, MalformedInputReportsLine) {
  EXPECT_EQ(parse_error_line("NODE 2\n"), 1);
  EXPECT_EQ(parse_error_line("NODES 2\nlabel x\n"), 2);
  EXPECT_EQ(parse_error_line("NODES 2\nlabel x y\na 0 0\nb zero 0\n"), 4);
  EXPECT_EQ(parse_error_line("NODES 2\nlabel x y\na 0 0\nb 0 0\n\nEDGES 2\n"
                             "label src dest weight bw delay\ne0 0 1 1 5 0\ne1 1 9 1 5 0\n"),
            9);
  EXPECT_EQ(parse_error_line("NODES 2\nlabel x y\na 0 0\nb 0 0\n\nEDGES 2\n"
                             "label src dest weight bw delay\ne0 0 1 1 5 0\n"),
            9);
  EXPECT_EQ(parse_error_line("NODES 2\nlabel x y\na 0 0\nb 0 0\nEDGES 2\n"
                             "label src dest weight bw delay\ne0 0 1 1 -5 0\ne1 1 0 1 -5 0\n"),
            7);
  EXPECT_EQ(parse_error_line("NODES 2\nlabel x y\na 0 0\nb 0 0\nEDGES 2\n"
                             "label src dest weight bw delay\ne0 0 1 1 5\n"),
            7);
  EXPECT_EQ(parse_error_line(kTwoNodes + std::string("junk\n")), 10);
}

TEST(ParseTopology, BadConnectionCount) {
  EXPECT_THROW(parse_topology(kTwoNodes, 0), UsageError);
}

TEST(ParseDemands, Basic) {
  TrafficMatrix t = parse_demands("DEMANDS 1\nlabel src dest bw\nd0 0 1 500\n", 3);
  EXPECT_EQ(t(0, 1), Rational(500));
  EXPECT_EQ(t(1, 0), Rational(0));
  EXPECT_EQ(t.support_size(), 1);
}

TEST(ParseDemands, RepeatedPairsAccumulate) {
  TrafficMatrix t =
      parse_demands("DEMANDS 2\nlabel src dest bw\nd0 2 1 300\nd1 2 1 200\n", 3);
  EXPECT_EQ(t(2, 1), Rational(500));
  EXPECT_EQ(t.support_size(), 1);
}

TEST(ParseDemands, Empty) {
  EXPECT_TRUE(parse_demands("DEMANDS 0\n", 4).empty());
  EXPECT_TRUE(parse_demands("DEMANDS 0\nlabel src dest bw\n", 4).empty());
}

TEST(ParseDemands, Errors) {
  EXPECT_THROW(parse_demands("DEMANDS 1\nlabel src dest bw\nd0 0 3 5\n", 3), ParseError);
  EXPECT_THROW(parse_demands("DEMANDS 1\nlabel src dest bw\nd0 0 1 -5\n", 3), ParseError);
  EXPECT_THROW(parse_demands("DEMANDS 1\nlabel src dest bw\nd0 1 1 5\n", 3), ParseError);
  EXPECT_THROW(parse_demands("DEMANDS 2\nlabel src dest bw\nd0 0 1 5\n", 3), ParseError);
  EXPECT_THROW(parse_demands("DEMANDS 1\nlabel src dest bw\nd0 0 1 5\nd1 0 2 5\n", 3),
               ParseError);
  EXPECT_THROW(parse_demands("DEMAND 1\n", 3), ParseError);
}

TEST(ParseDemands, DatasetFixturesLoad) {
  Topology topo = load_topology(testing::data_path("repetita/Latnet.graph"));
  TrafficMatrix t = load_demands(testing::data_path("repetita/Latnet.0000.demands"),
                                 topo.node_count());
  EXPECT_GT(t.support_size(), 0);
}

TEST(FormatRoundTrip, TopologyAndDemands) {
  Topology t = load_topology(testing::data_path("fig2.graph"), 3);
  Topology back = parse_topology(format_topology(t), 3, "fig2");
  ASSERT_EQ(back.edge_count(), t.edge_count());
  for (int i = 0; i < t.edge_count(); ++i) {
    EXPECT_EQ(back.edge(i).u, t.edge(i).u);
    EXPECT_EQ(back.edge(i).v, t.edge(i).v);
    EXPECT_EQ(back.edge(i).capacity, t.edge(i).capacity);
  }
  TrafficMatrix d = worst_case_matrix(t);
  EXPECT_EQ(parse_demands(format_demands(d), t.node_count()), d);
}

TEST(ActivationFile, RoundTripAndErrors) {
  Topology t = load_topology(testing::data_path("fig2.graph"), 2);
  ActivationSolution act({2, 0, 1, 2, 1, 0, 2});
  std::string text = format_activation(t, act);
  EXPECT_EQ(text.substr(0, 6), "0 1 2\n");
  EXPECT_EQ(parse_activation(text, t), act);
  EXPECT_THROW(parse_activation("0 1 2\n", t), ParseError);
  EXPECT_THROW(parse_activation(text + "0 1 1\n", t), ParseError);
  EXPECT_THROW(parse_activation("0 3 1\n", t), ParseError);
  std::string too_big = text;
  too_big[4] = '3';
  EXPECT_THROW(parse_activation(too_big, t), UsageError);
}

TEST(TopologyCreate, Validation) {
  EXPECT_THROW(make_topology(2, {{0, 1, Rational(0)}}), ModelError);
  EXPECT_THROW(make_topology(2, {{0, 1, Rational(1), 0}}), ModelError);
  EXPECT_THROW(make_topology(2, {{0, 1, 1}, {1, 0, 1}}), ModelError);
  EXPECT_THROW(make_topology(2, {{0, 2, 1}}), ModelError);
  EXPECT_THROW(make_topology(2, {{1, 1, 1}}), ModelError);
  Topology t = make_topology(3, {{2, 1, 4}, {0, 1, 4}});
  EXPECT_EQ(t.edge(0).u, 1);
  EXPECT_EQ(t.edge(0).v, 2);
  EXPECT_EQ(t.edge(1).id, 1);
}

TEST(TopologyQueries, ArcsAndLookups) {
  Topology t = testing::fig2_topology();
  for (ArcId a = 0; a < t.arc_count(); ++a) {
    Arc arc = t.arc(a);
    Arc rev = t.arc(Topology::reverse(a));
    EXPECT_EQ(arc.tail, rev.head);
    EXPECT_EQ(arc.head, rev.tail);
    EXPECT_EQ(t.arc_capacity(a), t.arc_capacity(Topology::reverse(a)));
    EXPECT_EQ(*t.find_arc(arc.tail, arc.head), a);
  }
  EXPECT_EQ(t.find_edge(4, 0), t.find_edge(0, 4));
  EXPECT_FALSE(t.find_edge(1, 3));
  EXPECT_EQ(t.out_arcs(2).size(), 4u);
  EXPECT_EQ(t.in_arcs(2).size(), 4u);
  EXPECT_TRUE(t.is_connected());
  EXPECT_TRUE(t.uniform_capacity());
  EXPECT_EQ(t.min_connections(), 1);
}

TEST(Reduce, Arithmetic) {
  Topology t = make_topology(2, {{0, 1, 10, 5}});
  Topology r = reduce(t, ActivationSolution({3}));
  ASSERT_EQ(r.edge_count(), 1);
  EXPECT_EQ(r.edge(0).capacity, Rational(6));
  EXPECT_EQ(r.edge(0).connections, 3);
  EXPECT_EQ(r.edge(0).ccap(), t.edge(0).ccap());
}

TEST(Reduce, ZeroRemovesEdge) {
  Topology t = make_topology(3, {{0, 1, 10, 5, 2}, {1, 2, 10, 5, 3}});
  Topology r = reduce(t, ActivationSolution({0, 5}));
  EXPECT_EQ(r.node_count(), 3);
  ASSERT_EQ(r.edge_count(), 1);
  EXPECT_EQ(r.edge(0).u, 1);
  EXPECT_EQ(r.edge(0).weight, 3);
  EXPECT_FALSE(r.is_connected());
}

TEST(Reduce, FullActivationIsIdentity) {
  Topology t = load_topology(testing::data_path("repetita/Uninett2011.graph"));
  Topology r = reduce(t, ActivationSolution::full(t));
  ASSERT_EQ(r.edge_count(), t.edge_count());
  for (int i = 0; i < t.edge_count(); ++i) {
    EXPECT_EQ(r.edge(i).capacity, t.edge(i).capacity);
    EXPECT_EQ(r.edge(i).weight, t.edge(i).weight);
  }
}

TEST(Reduce, DimensionMismatch) {
  Topology t = make_topology(2, {{0, 1, 10, 5}});
  EXPECT_THROW(reduce(t, ActivationSolution({1, 1})), UsageError);
  EXPECT_THROW(reduce(t, ActivationSolution({6})), UsageError);
  EXPECT_THROW(reduce(t, ActivationSolution({-1})), UsageError);
}

TEST(Reduce, Monotone) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Topology t = testing::random_topology(rng, {});
    std::vector<int> lo(t.edge_count()), hi(t.edge_count());
    for (const auto& e : t.edges()) {
      std::uniform_int_distribution<int> d(0, e.connections);
      int a = d(rng), b = d(rng);
      lo[e.id] = std::min(a, b);
      hi[e.id] = std::max(a, b);
    }
    Topology rl = reduce(t, ActivationSolution(lo));
    Topology rh = reduce(t, ActivationSolution(hi));
    for (const auto& e : rl.edges()) {
      auto other = rh.find_edge(e.u, e.v);
      ASSERT_TRUE(other);
      EXPECT_LE(e.capacity, rh.edge(*other).capacity);
    }
  }
}

TEST(WithConnections, OverridesCounts) {
  Topology t = with_connections(testing::fig2_topology(), 4);
  for (const auto& e : t.edges()) EXPECT_EQ(e.connections, 4);
  EXPECT_THROW(with_connections(t, 0), ModelError);
}

}  // namespace
}  // namespace toca
