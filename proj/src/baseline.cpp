#include "graph1l/baseline.hpp"

#include <cmath>

#include "graph1l/errors.hpp"

namespace graph1l {

namespace {

// node-major adjacency built from the unordered edge list
struct Adjacency {
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> nbr;
  std::vector<double> w;

  explicit Adjacency(const WeightedGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::size_t> count(n, 0);
    for (const auto& e : g.edges()) {
      ++count[e.i];
      ++count[e.j];
    }
    offset.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + count[i];
    nbr.resize(2 * g.num_edges());
    w.resize(2 * g.num_edges());
    std::vector<std::size_t> cur(offset.begin(), offset.end() - 1);
    for (const auto& e : g.edges()) {
      nbr[cur[e.i]] = e.j;
      w[cur[e.i]++] = e.w;
      nbr[cur[e.j]] = e.i;
      w[cur[e.j]++] = e.w;
    }
  }
};

MultiClassState one_hot(const LabelPrior& prior, std::size_t n) {
  MultiClassState y(n, prior.num_classes);
  for (const auto& [node, cls] : prior.assignments) y.at(node, static_cast<std::size_t>(cls)) = 1.0;
  return y;
}

Labeling decode_scores(const MultiClassState& f, const LabelPrior& prior) {
  Labeling out = decode_labels(f, &prior);
  return out;
}

}  // namespace

Labeling run_lgc(const WeightedGraph& g, const LabelPrior& prior, const DiffusionConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  const std::size_t n = g.num_nodes();
  prior.validate_nodes(n);
  const std::size_t L = prior.num_classes;
  const Adjacency adj(g);
  const auto& d = g.degrees();
  std::vector<double> inv_sqrt_d(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt_d[i] = 1.0 / std::sqrt(d[i]);

  const MultiClassState y = one_hot(prior, n);
  MultiClassState f = y;
  MultiClassState next(n, L);
  const double beta = 1.0 - cfg.alpha;

  double delta = 0.0;
  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    for (std::size_t l = 0; l < L; ++l) {
      auto fl = f.col(l);
      auto nl = next.col(l);
      auto yl = y.col(l);
#pragma omp parallel for schedule(static)
      for (long long xx = 0; xx < static_cast<long long>(n); ++xx) {
        const std::size_t x = static_cast<std::size_t>(xx);
        double s = 0.0;
        for (std::size_t t = adj.offset[x]; t < adj.offset[x + 1]; ++t)
          s += adj.w[t] * fl[adj.nbr[t]] * inv_sqrt_d[adj.nbr[t]];
        nl[x] = cfg.alpha * s * inv_sqrt_d[x] + beta * yl[x];
      }
    }
    delta = 0.0;
    for (std::size_t i = 0; i < f.flat().size(); ++i)
      delta = std::max(delta, std::abs(next.flat()[i] - f.flat()[i]));
    std::swap(f, next);
    if (delta <= cfg.tol) return decode_scores(f, prior);
  }
  throw NoConvergence(cfg.max_iter, delta);
}

Labeling run_label_propagation(const WeightedGraph& g, const LabelPrior& prior,
                               const DiffusionConfig& cfg) {
  const std::size_t n = g.num_nodes();
  prior.validate_nodes(n);
  const std::size_t L = prior.num_classes;
  const Adjacency adj(g);
  const auto& d = g.degrees();
  const std::vector<int> lab = prior.label_of(n);

  MultiClassState f = one_hot(prior, n);
  MultiClassState next = f;

  double delta = 0.0;
  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    for (std::size_t l = 0; l < L; ++l) {
      auto fl = f.col(l);
      auto nl = next.col(l);
#pragma omp parallel for schedule(static)
      for (long long xx = 0; xx < static_cast<long long>(n); ++xx) {
        const std::size_t x = static_cast<std::size_t>(xx);
        if (lab[x] >= 0) continue;  // labeled rows stay one-hot
        double s = 0.0;
        for (std::size_t t = adj.offset[x]; t < adj.offset[x + 1]; ++t)
          s += adj.w[t] * fl[adj.nbr[t]];
        nl[x] = s / d[x];
      }
    }
    delta = 0.0;
    for (std::size_t i = 0; i < f.flat().size(); ++i)
      delta = std::max(delta, std::abs(next.flat()[i] - f.flat()[i]));
    std::swap(f, next);
    if (delta <= cfg.tol) return decode_scores(f, prior);
  }
  throw NoConvergence(cfg.max_iter, delta);
}

}  // namespace graph1l
