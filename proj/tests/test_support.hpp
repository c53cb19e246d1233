// Shared generators and independent oracles for the test suites. Everything
// here rebuilds the dense objects from the edge list directly so the checks
// do not share code with the operator implementations they validate.
#ifndef GRAPH1L_TEST_SUPPORT_HPP
#define GRAPH1L_TEST_SUPPORT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "graph1l/graph.hpp"
#include "graph1l/rng.hpp"
#include "graph1l/state.hpp"

namespace testsup {

using graph1l::Edge;
using graph1l::Rng;
using graph1l::WeightedGraph;

// connected random graph: spanning tree plus extra random edges
inline WeightedGraph random_connected_graph(std::size_t n, double extra_edge_frac, Rng& rng) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const auto parent = static_cast<std::uint32_t>(rng.uniform_u64(i));
    edges.push_back({parent, static_cast<std::uint32_t>(i), 0.2 + rng.uniform_double()});
  }
  const auto extra = static_cast<std::size_t>(extra_edge_frac * static_cast<double>(n));
  for (std::size_t t = 0; t < extra; ++t) {
    const auto i = static_cast<std::uint32_t>(rng.uniform_u64(n));
    const auto j = static_cast<std::uint32_t>(rng.uniform_u64(n));
    if (i != j) edges.push_back({i, j, 0.2 + rng.uniform_double()});
  }
  return graph1l::build_from_edge_list(std::move(edges), n);
}

// two dense blocks with a weak bridge; the planted cut is nodes [0, size_a)
inline WeightedGraph planted_bipartition(std::size_t size_a, std::size_t size_b,
                                         double cross_weight, Rng& rng) {
  std::vector<Edge> edges;
  auto clique = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = i + 1; j < hi; ++j)
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                         0.8 + 0.4 * rng.uniform_double()});
  };
  clique(0, size_a);
  clique(size_a, size_a + size_b);
  edges.push_back({static_cast<std::uint32_t>(rng.uniform_u64(size_a)),
                   static_cast<std::uint32_t>(size_a + rng.uniform_u64(size_b)), cross_weight});
  return graph1l::build_from_edge_list(std::move(edges), size_a + size_b);
}

// K3 + K3 joined by one weak edge, unit clique weights
inline WeightedGraph two_clique_toy(double bridge = 0.01) {
  std::vector<Edge> edges = {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1},
                             {4, 5, 1}, {3, 5, 1}, {2, 3, bridge}};
  return graph1l::build_from_edge_list(std::move(edges), 6);
}

// dense m x n matrix of K = W D^-1 assembled straight from the edges
inline Eigen::MatrixXd dense_K(const WeightedGraph& g) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.num_edges()),
                                            static_cast<Eigen::Index>(g.num_nodes()));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    K(static_cast<Eigen::Index>(e), ed.i) = ed.w / g.degree(ed.i);
    K(static_cast<Eigen::Index>(e), ed.j) = -ed.w / g.degree(ed.j);
  }
  return K;
}

inline Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> from_eigen(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

// (1/2dt)|u-b|^2 + sum_l |K u^l|_1 evaluated densely
inline double prox_objective(const Eigen::MatrixXd& K, const Eigen::MatrixXd& u,
                             const Eigen::MatrixXd& b, double dt) {
  double obj = (u - b).squaredNorm() / (2.0 * dt);
  for (Eigen::Index l = 0; l < u.cols(); ++l) obj += (K * u.col(l)).lpNorm<1>();
  return obj;
}

enum class OracleConstraint { NONE, SUM_ZERO };

// Long-run projected gradient ascent on the dual of
//   min_{u in C} (1/2dt)|u - b|^2 + sum_l |K u^l|_1,
// an algorithm independent of the primal-dual solver under test.
// Returns the primal objective value at the recovered minimiser.
inline double brute_force_prox_objective(const Eigen::MatrixXd& K, const Eigen::MatrixXd& b,
                                         double dt, OracleConstraint mode,
                                         std::size_t iters = 1000000) {
  const Eigen::Index m = K.rows();
  const Eigen::Index L = b.cols();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(m, L);
  const double norm_k = Eigen::JacobiSVD<Eigen::MatrixXd>(K).singularValues()(0);
  const double step = 1.0 / (dt * norm_k * norm_k);
  Eigen::MatrixXd u(b.rows(), L);
  auto primal_of = [&](const Eigen::MatrixXd& zz) {
    Eigen::MatrixXd cand = b - dt * (K.transpose() * zz);
    if (mode == OracleConstraint::SUM_ZERO)
      cand.colwise() -= cand.rowwise().mean();
    return cand;
  };
  for (std::size_t t = 0; t < iters; ++t) {
    u = primal_of(z);
    z += step * (K * u);
    z = z.cwiseMax(-1.0).cwiseMin(1.0);
  }
  u = primal_of(z);
  return prox_objective(K, u, b, dt);
}

}  // namespace testsup

#endif
