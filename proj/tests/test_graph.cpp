#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "graph1l/errors.hpp"
#include "graph1l/gradient.hpp"
#include "graph1l/graph.hpp"
#include "graph1l/vec.hpp"
#include "test_support.hpp"

using namespace graph1l;

TEST_CASE("build_from_edge_list computes degrees on the triangle") {
  auto g = build_from_edge_list({{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}, 3);
  CHECK(g.num_edges() == 3);
  CHECK(g.degrees() == std::vector<double>{2, 2, 2});
}

TEST_CASE("build_from_edge_list single edge") {
  auto g = build_from_edge_list({{0, 1, 1}}, 2);
  CHECK(g.degrees() == std::vector<double>{1, 1});
}

TEST_CASE("build_from_edge_list rejects bad input") {
  CHECK_THROWS_AS(build_from_edge_list({{0, 1, 1}}, 3), IsolatedNode);
  CHECK_THROWS_AS(build_from_edge_list({{0, 3, 1}}, 3), BadIndex);
  CHECK_THROWS_AS(build_from_edge_list({{0, 0, 1}}, 2), BadIndex);
  CHECK_THROWS_AS(build_from_edge_list({{0, 1, 0.0}}, 2), NonPositiveWeight);
  CHECK_THROWS_AS(build_from_edge_list({{0, 1, -2.0}}, 2), NonPositiveWeight);
  try {
    build_from_edge_list({{0, 1, 1}, {1, 2, 1}}, 4);
    FAIL("expected IsolatedNode");
  } catch (const IsolatedNode& e) {
    CHECK(e.node == 3);
  }
}

TEST_CASE("duplicate (i,j)/(j,i) entries merge by summation") {
  auto g = build_from_edge_list({{1, 0, 0.5}, {0, 1, 0.25}, {1, 2, 1}}, 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.edges()[0].w == 0.75);
  CHECK(g.degree(0) == 0.75);
  CHECK(g.degree(1) == 1.75);
}

TEST_CASE("degrees equal row sums recomputed from the edge list exactly") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = testsup::random_connected_graph(2 + rng.uniform_u64(40), 1.5, rng);
    std::vector<double> d(g.num_nodes(), 0.0);
    for (const auto& e : g.edges()) {
      d[e.i] += e.w;
      d[e.j] += e.w;
    }
    CHECK(d == g.degrees());
  }
}

TEST_CASE("edges are stored once, sorted by (i,j)") {
  Rng rng(5);
  auto g = testsup::random_connected_graph(30, 2.0, rng);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    CHECK(ed.i < ed.j);
    CHECK(seen.insert({ed.i, ed.j}).second);
    if (e > 0) {
      const auto& prev = g.edges()[e - 1];
      CHECK((prev.i < ed.i || (prev.i == ed.i && prev.j < ed.j)));
    }
  }
}

TEST_CASE("knn: two identical rows give a unit weight edge") {
  auto g = build_knn_gaussian({{1.0, 2.0}, {1.0, 2.0}}, 1);
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edges()[0].w == 1.0);
}

TEST_CASE("knn: collinear points with fixed sigma") {
  auto g = build_knn_gaussian({{0.0}, {1.0}, {10.0}}, 1, SigmaRule::value(1.0));
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edges()[0].i == 0);
  CHECK(g.edges()[0].j == 1);
  CHECK(g.edges()[0].w == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(g.edges()[1].i == 1);
  CHECK(g.edges()[1].j == 2);
  CHECK(g.edges()[1].w == doctest::Approx(std::exp(-81.0)).epsilon(1e-12));
}

TEST_CASE("knn input validation") {
  CHECK_THROWS_AS(build_knn_gaussian({{1.0}}, 1), DegenerateFeatures);
  CHECK_THROWS_AS(build_knn_gaussian({{1.0}, {2.0}}, 2), BadIndex);
  CHECK_THROWS_AS(build_knn_gaussian({{1.0}, {2.0}}, 0), BadIndex);
}

TEST_CASE("knn output passes edge-list validation and is symmetric by storage") {
  Rng rng(17);
  std::vector<std::vector<double>> feats(40, std::vector<double>(3));
  for (auto& row : feats)
    for (auto& v : row) v = rng.normal();
  auto g = build_knn_gaussian(feats, 5);
  // rebuilding from its own edges must succeed bit-identically
  auto g2 = build_from_edge_list({g.edges().begin(), g.edges().end()}, g.num_nodes());
  CHECK(g2.degrees() == g.degrees());
  for (const auto& e : g.edges()) CHECK(e.w > 0.0);
}

TEST_CASE("apply_gradient matches the hand-computed examples") {
  auto pair = build_from_edge_list({{0, 1, 1}}, 2);
  GradientOperator op(pair);
  CHECK(op.apply(std::vector<double>{1, -1}) == std::vector<double>{2});

  auto tri = build_from_edge_list({{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}, 3);
  GradientOperator top(tri);
  // storage order is (0,1), (0,2), (1,2); per edge: 2, 1, -1
  CHECK(top.apply(std::vector<double>{2, -2, 0}) == std::vector<double>{2, 1, -1});
}

TEST_CASE("apply_gradient(d) is exactly zero") {
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = testsup::random_connected_graph(2 + rng.uniform_u64(40), 1.0, rng);
    GradientOperator op(g);
    for (double v : op.apply(g.degrees())) CHECK(v == 0.0);
  }
}

TEST_CASE("adjoint on the single edge") {
  auto pair = build_from_edge_list({{0, 1, 1}}, 2);
  GradientOperator op(pair);
  CHECK(op.adjoint(std::vector<double>{1}) == std::vector<double>{1, -1});
  CHECK(op.adjoint(std::vector<double>{0}) == std::vector<double>{0, 0});
}

TEST_CASE("adjoint identity <Ku,z> = <u,K^T z> on random graphs") {
  Rng rng(29);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = testsup::random_connected_graph(2 + rng.uniform_u64(48), 1.5, rng);
    GradientOperator op(g);
    const auto u = rng.normal_vector(g.num_nodes());
    const auto z = rng.normal_vector(g.num_edges());
    const double lhs = dot(op.apply(u), z);
    const double rhs = dot(u, op.adjoint(z));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("operator kernels agree with the serial reference") {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = testsup::random_connected_graph(5 + rng.uniform_u64(60), 2.0, rng);
    GradientOperator op(g);
    const auto u = rng.normal_vector(g.num_nodes());
    const auto z = rng.normal_vector(g.num_edges());
    CHECK(op.apply(u) == reference::apply_gradient(g, u));  // same per-edge arithmetic
    const auto a = op.adjoint(z);
    const auto ref = reference::apply_adjoint(g, z);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("dimension mismatches throw") {
  auto g = build_from_edge_list({{0, 1, 1}, {1, 2, 1}}, 3);
  GradientOperator op(g);
  std::vector<double> bad(5, 0.0);
  CHECK_THROWS_AS((void)op.apply(bad), DimensionMismatch);
  CHECK_THROWS_AS((void)op.adjoint(bad), DimensionMismatch);
}

TEST_CASE("operator_norm on the single unit edge") {
  auto pair = build_from_edge_list({{0, 1, 1}}, 2);
  GradientOperator op(pair);
  const double est = op.operator_norm(50);
  CHECK(est >= std::sqrt(2.0));
  CHECK(est <= 1.05 * std::sqrt(2.0) * (1 + 1e-12));
}

TEST_CASE("operator_norm is invariant under uniform weight doubling") {
  Rng rng(37);
  auto g = testsup::random_connected_graph(20, 2.0, rng);
  std::vector<Edge> doubled(g.edges().begin(), g.edges().end());
  for (auto& e : doubled) e.w *= 2.0;
  auto g2 = build_from_edge_list(std::move(doubled), g.num_nodes());
  GradientOperator op(g), op2(g2);
  CHECK(op.operator_norm(60) == doctest::Approx(op2.operator_norm(60)).epsilon(1e-12));
}

TEST_CASE("operator_norm dominates the dense SVD value within 5%") {
  Rng rng(41);
  for (int rep = 0; rep < 8; ++rep) {
    auto g = testsup::random_connected_graph(3 + rng.uniform_u64(12), 1.5, rng);
    GradientOperator op(g);
    const double est = op.operator_norm(200);
    const double truth =
        Eigen::JacobiSVD<Eigen::MatrixXd>(testsup::dense_K(g)).singularValues()(0);
    CHECK(est >= truth * (1 - 1e-9));
    CHECK(est <= 1.05 * truth * (1 + 1e-6));
  }
}

TEST_CASE("edge list file round trip with comments and blanks") {
  const std::string path = "test_edges_roundtrip.txt";
  {
    std::ofstream out(path);
    out << "# a comment\n\n0 1 0.5\n1 2 1.25\n 0 2 0.125 # trailing comment\n";
  }
  std::size_t n = 0;
  auto edges = load_edge_list(path, n);
  CHECK(n == 3);
  auto g = build_from_edge_list(std::move(edges), n);
  CHECK(g.num_edges() == 3);
  save_edge_list(path, g);
  std::size_t n2 = 0;
  auto edges2 = load_edge_list(path, n2);
  auto again = build_from_edge_list(std::move(edges2), n2);
  CHECK(again.degrees() == g.degrees());
  std::remove(path.c_str());
}

TEST_CASE("malformed inputs report the line") {
  const std::string path = "test_bad_input.txt";
  {
    std::ofstream out(path);
    out << "0 1 1.0\n0 2\n";
  }
  try {
    std::size_t n = 0;
    (void)load_edge_list(path, n);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  {
    std::ofstream out(path);
    out << "1.0,2.0\n1.0,oops\n";
  }
  try {
    (void)load_features_csv(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  std::remove(path.c_str());
}
