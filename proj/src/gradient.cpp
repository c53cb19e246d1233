#include "graph1l/gradient.hpp"

#include <cmath>

#include "graph1l/errors.hpp"
#include "graph1l/vec.hpp"

namespace graph1l {

GradientOperator::GradientOperator(const WeightedGraph& g) : g_(&g) {
  const std::size_t n = g.num_nodes();
  const std::size_t m = g.num_edges();
  std::vector<std::size_t> count(n, 0);
  for (const auto& e : g.edges()) {
    ++count[e.i];
    ++count[e.j];
  }
  inc_offset_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) inc_offset_[i + 1] = inc_offset_[i] + count[i];
  inc_edge_.resize(2 * m);
  inc_sign_.resize(2 * m);
  std::vector<std::size_t> cursor(inc_offset_.begin(), inc_offset_.end() - 1);
  // edges are sorted by (i, j), so each node sees its incident edges in
  // ascending edge order; the gather below is order-fixed and reproducible
  for (std::size_t e = 0; e < m; ++e) {
    const auto& ed = g.edges()[e];
    inc_edge_[cursor[ed.i]] = static_cast<std::uint32_t>(e);
    inc_sign_[cursor[ed.i]++] = 1.0f;
    inc_edge_[cursor[ed.j]] = static_cast<std::uint32_t>(e);
    inc_sign_[cursor[ed.j]++] = -1.0f;
  }
  cached_norm_ = operator_norm(100);
}

void GradientOperator::apply(std::span<const double> u, std::span<double> out) const {
  const std::size_t n = g_->num_nodes();
  const std::size_t m = g_->num_edges();
  if (u.size() != n) throw DimensionMismatch(n, u.size());
  if (out.size() != m) throw DimensionMismatch(m, out.size());
  const auto& edges = g_->edges();
  const auto& d = g_->degrees();
  // divide once per node before differencing; u = d then maps to exactly zero
  std::vector<double> v(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    v[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] / d[static_cast<std::size_t>(i)];
#pragma omp parallel for schedule(static)
  for (long long e = 0; e < static_cast<long long>(m); ++e) {
    const auto& ed = edges[static_cast<std::size_t>(e)];
    out[static_cast<std::size_t>(e)] = ed.w * (v[ed.i] - v[ed.j]);
  }
}

std::vector<double> GradientOperator::apply(std::span<const double> u) const {
  std::vector<double> out(g_->num_edges());
  apply(u, out);
  return out;
}

void GradientOperator::adjoint(std::span<const double> z, std::span<double> out) const {
  const std::size_t n = g_->num_nodes();
  const std::size_t m = g_->num_edges();
  if (z.size() != m) throw DimensionMismatch(m, z.size());
  if (out.size() != n) throw DimensionMismatch(n, out.size());
  const auto& edges = g_->edges();
  const auto& d = g_->degrees();
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    double s = 0.0;
    for (std::size_t t = inc_offset_[i]; t < inc_offset_[i + 1]; ++t)
      s += inc_sign_[t] * edges[inc_edge_[t]].w * z[inc_edge_[t]];
    out[i] = s / d[i];
  }
}

std::vector<double> GradientOperator::adjoint(std::span<const double> z) const {
  std::vector<double> out(g_->num_nodes());
  adjoint(z, out);
  return out;
}

double GradientOperator::operator_norm(std::size_t iters) const {
  const std::size_t n = g_->num_nodes();
  const auto& d = g_->degrees();
  const double dd = dot(d, d);

  auto deflate = [&](std::vector<double>& v) {
    const double c = dot(v, d) / dd;
    for (std::size_t i = 0; i < n; ++i) v[i] -= c * d[i];
  };
  std::vector<double> v(n, 1.0);
  deflate(v);
  if (norm2(v) < 1e-12 * std::sqrt(static_cast<double>(n))) {
    // all-ones is proportional to d (regular graph); alternate signs instead
    for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
    deflate(v);
    if (norm2(v) < 1e-12 * std::sqrt(static_cast<double>(n)))
      for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  double inv = 1.0 / norm2(v);
  scale(v, inv);

  std::vector<double> z(g_->num_edges()), w(n);
  double sigma = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    apply(v, z);
    sigma = norm2(z);  // |Kv| with |v| = 1
    adjoint(z, w);
    const double nw = norm2(w);
    if (nw == 0.0) break;  // v in the null space; sigma = 0 on this component
    inv = 1.0 / nw;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] * inv;
  }
  return 1.05 * sigma;
}

namespace reference {

std::vector<double> apply_gradient(const WeightedGraph& g, std::span<const double> u) {
  std::vector<double> out(g.num_edges());
  const auto& d = g.degrees();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    out[e] = ed.w * (u[ed.i] / d[ed.i] - u[ed.j] / d[ed.j]);
  }
  return out;
}

std::vector<double> apply_adjoint(const WeightedGraph& g, std::span<const double> z) {
  std::vector<double> out(g.num_nodes(), 0.0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edges()[e];
    out[ed.i] += ed.w * z[e];
    out[ed.j] -= ed.w * z[e];
  }
  const auto& d = g.degrees();
  for (std::size_t i = 0; i < g.num_nodes(); ++i) out[i] /= d[i];
  return out;
}

}  // namespace reference

}  // namespace graph1l
