#include <cmath>

#include "doctest.h"
#include "graph1l/energy.hpp"
#include "graph1l/errors.hpp"
#include "graph1l/vec.hpp"
#include "test_support.hpp"

using namespace graph1l;

TEST_CASE("energy_J hand examples") {
  auto pair = build_from_edge_list({{0, 1, 1}}, 2);
  GradientOperator op(pair);
  CHECK(energy_J(op, std::vector<double>{1, -1}) == 2.0);

  auto tri = build_from_edge_list({{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}, 3);
  GradientOperator top(tri);
  CHECK(energy_J(top, std::vector<double>{2, -2, 0}) == 4.0);
}

TEST_CASE("energy_J vanishes on multiples of d") {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = testsup::random_connected_graph(3 + rng.uniform_u64(30), 1.0, rng);
    GradientOperator op(g);
    std::vector<double> u = g.degrees();
    for (double& v : u) v *= 2.0;  // exact scaling
    CHECK(energy_J(op, u) == 0.0);
  }
}

TEST_CASE("energy_Dp: p=2 on the unit edge") {
  auto pair = build_from_edge_list({{0, 1, 1}}, 2);
  CHECK(energy_Dp(pair, std::vector<double>{1, -1}, 2.0) == 4.0);
}

TEST_CASE("energy_Dp at p=1 equals energy_J") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = testsup::random_connected_graph(2 + rng.uniform_u64(40), 1.5, rng);
    GradientOperator op(g);
    const auto u = rng.normal_vector(g.num_nodes());
    CHECK(energy_Dp(g, u, 1.0) == doctest::Approx(energy_J(op, u)).epsilon(1e-12));
  }
}

TEST_CASE("energy_Dp p-homogeneity") {
  Rng rng(9);
  for (double p : {1.0, 1.5, 2.0}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto g = testsup::random_connected_graph(2 + rng.uniform_u64(30), 1.0, rng);
      const auto u = rng.normal_vector(g.num_nodes());
      const double alpha = rng.uniform_double(-10.0, 10.0);
      std::vector<double> au = u;
      for (double& v : au) v *= alpha;
      const double expect = std::pow(std::abs(alpha), p) * energy_Dp(g, u, p);
      CHECK(energy_Dp(g, au, p) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("subgradient_H selections") {
  CHECK(subgradient_H(std::vector<double>{3, 4}, Denominator::L2) ==
        std::vector<double>{0.6, 0.8});
  CHECK(subgradient_H(std::vector<double>{2, 0, -1}, Denominator::L1) ==
        std::vector<double>{1, 0, -1});
  CHECK(subgradient_H(std::vector<double>{1, 2, 3}, Denominator::L1_MEDIAN) ==
        std::vector<double>{-1, 0, 1});
  CHECK(subgradient_H(std::vector<double>{0, 0}, Denominator::L2) == std::vector<double>{0, 0});
}

TEST_CASE("<q,u> = H(u) for all three kinds, q sums to zero for the median") {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t len = 1 + rng.uniform_u64(20);
    auto u = rng.normal_vector(len);
    if (rep % 3 == 0)  // exercise repeated values and exact medians
      for (double& v : u) v = std::floor(3.0 * v);
    for (auto kind : {Denominator::L2, Denominator::L1, Denominator::L1_MEDIAN}) {
      const auto q = subgradient_H(u, kind);
      const double h = denominator_value(u, kind);
      if (kind == Denominator::L1) {
        CHECK(dot(q, u) == h);  // same summation order, sign(x)*x == |x|
      } else {
        CHECK(dot(q, u) == doctest::Approx(h).epsilon(1e-12));
      }
      if (kind == Denominator::L1_MEDIAN) {
        double s = 0.0;
        for (double v : q) {
          s += v;
          CHECK(std::abs(v) <= 1.0 + 1e-15);
        }
        CHECK(s == doctest::Approx(0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("one-homogeneity of H") {
  Rng rng(15);
  for (int rep = 0; rep < 100; ++rep) {
    const auto u = rng.normal_vector(2 + rng.uniform_u64(30));
    const double alpha = rng.uniform_double(-10.0, 10.0);
    std::vector<double> au = u;
    for (double& v : au) v *= alpha;
    for (auto kind : {Denominator::L2, Denominator::L1, Denominator::L1_MEDIAN}) {
      const double expect = std::abs(alpha) * denominator_value(u, kind);
      CHECK(denominator_value(au, kind) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("shifted subgradient examples and d-orthogonality") {
  const std::vector<double> d{1, 1};
  CHECK(shifted_subgradient(std::vector<double>{1, 0}, d) == std::vector<double>{0.5, -0.5});

  Rng rng(19);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t len = 2 + rng.uniform_u64(20);
    const auto q = rng.normal_vector(len);
    std::vector<double> dd(len);
    for (double& v : dd) v = 0.1 + rng.uniform_double();
    const auto s = shifted_subgradient(q, dd);
    CHECK(std::abs(dot(s, dd)) <= 1e-12 * norm2(s) * norm2(dd) + 1e-15);
  }
  // q already orthogonal to d stays fixed up to roundoff
  const std::vector<double> q{1, -1};
  const auto s = shifted_subgradient(q, d);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("ratio on the unit edge and the vanished convention") {
  auto pair = build_from_edge_list({{0, 1, 1}}, 2);
  GradientOperator op(pair);
  const auto rv = ratio(op, std::vector<double>{1, -1}, Denominator::L2);
  CHECK(rv.numerator == 2.0);
  CHECK(rv.denominator == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(rv.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(!rv.vanished);

  const auto rz = ratio(op, std::vector<double>{0, 0}, Denominator::L2);
  CHECK(rz.vanished);
  CHECK(rz.ratio == 0.0);
}

TEST_CASE("ratio is invariant under positive scaling") {
  Rng rng(21);
  auto g = testsup::random_connected_graph(10, 1.0, rng);
  GradientOperator op(g);
  const auto u = rng.normal_vector(10);
  for (auto kind : {Denominator::L2, Denominator::L1, Denominator::L1_MEDIAN}) {
    const double r1 = ratio(op, u, kind).ratio;
    std::vector<double> au = u;
    for (double& v : au) v *= 7.5;
    CHECK(ratio(op, au, kind).ratio == doctest::Approx(r1).epsilon(1e-12));
  }
}

TEST_CASE("verify_subgradient on the unit edge") {
  auto pair = build_from_edge_list({{0, 1, 1}}, 2);
  GradientOperator op(pair);
  const auto ok = verify_subgradient(op, std::vector<double>{1.0});
  CHECK(ok.p == std::vector<double>{1, -1});
  CHECK(ok.dual_feasible);
  CHECK(ok.d_inner == 0.0);

  const auto bad = verify_subgradient(op, std::vector<double>{1.5});
  CHECK(!bad.dual_feasible);
  CHECK(bad.p == std::vector<double>{1.5, -1.5});
}

TEST_CASE("subdifferential elements are d-orthogonal (1000 random duals)") {
  Rng rng(43);
  auto g = testsup::random_connected_graph(12, 2.0, rng);
  GradientOperator op(g);
  const auto& d = g.degrees();
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> z(g.num_edges());
    for (double& v : z) v = rng.uniform_double(-1.0, 1.0);
    const auto chk = verify_subgradient(op, z);
    CHECK(chk.dual_feasible);
    CHECK(std::abs(chk.d_inner) <= 1e-12 * norm2(chk.p) * norm2(d));
  }
}

TEST_CASE("J is attained by the sign dual certificate, exactly") {
  Rng rng(47);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = testsup::random_connected_graph(4 + rng.uniform_u64(20), 1.5, rng);
    GradientOperator op(g);
    const auto u = rng.normal_vector(g.num_nodes());
    const auto ku = op.apply(u);
    std::vector<double> sign(ku.size());
    for (std::size_t e = 0; e < ku.size(); ++e)
      sign[e] = ku[e] > 0.0 ? 1.0 : (ku[e] < 0.0 ? -1.0 : 0.0);
    CHECK(dot(sign, ku) == energy_J(op, u));
    for (int t = 0; t < 200; ++t) {
      std::vector<double> z(ku.size());
      for (double& v : z) v = rng.uniform_double(-1.0, 1.0);
      CHECK(dot(z, ku) <= energy_J(op, u) + 1e-12);
    }
  }
}
