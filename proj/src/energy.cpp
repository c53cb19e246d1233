#include "graph1l/energy.hpp"

#include <algorithm>
#include <cmath>

#include "graph1l/errors.hpp"
#include "graph1l/vec.hpp"

namespace graph1l {

double energy_J(const GradientOperator& g, std::span<const double> u) {
  const auto& edges = g.graph().edges();
  const auto& d = g.graph().degrees();
  if (u.size() != d.size()) throw DimensionMismatch(d.size(), u.size());
  return detail::blocked_sum(edges.size(), [&](std::size_t e) {
    const auto& ed = edges[e];
    return ed.w * std::abs(u[ed.i] / d[ed.i] - u[ed.j] / d[ed.j]);
  });
}

double energy_Dp(const WeightedGraph& g, std::span<const double> u, double p) {
  if (u.size() != g.num_nodes()) throw DimensionMismatch(g.num_nodes(), u.size());
  const auto& edges = g.edges();
  const auto& d = g.degrees();
  if (p == 1.0) {
    return detail::blocked_sum(edges.size(), [&](std::size_t e) {
      const auto& ed = edges[e];
      return ed.w * std::abs(u[ed.i] / d[ed.i] - u[ed.j] / d[ed.j]);
    });
  }
  const double ip = 1.0 / p;
  return detail::blocked_sum(edges.size(), [&](std::size_t e) {
    const auto& ed = edges[e];
    const double diff = u[ed.i] / std::pow(d[ed.i], ip) - u[ed.j] / std::pow(d[ed.j], ip);
    return ed.w * std::pow(std::abs(diff), p);
  });
}

namespace {

double lower_median(std::vector<double> v) {
  const std::size_t k = (v.size() - 1) / 2;  // lower median for even length
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

}  // namespace

double denominator_value(std::span<const double> u, Denominator kind) {
  switch (kind) {
    case Denominator::L2:
      return norm2(u);
    case Denominator::L1:
      return norm1(u);
    case Denominator::L1_MEDIAN: {
      if (u.empty()) return 0.0;
      const double med = lower_median({u.begin(), u.end()});
      return detail::blocked_sum(u.size(), [&](std::size_t i) { return std::abs(u[i] - med); });
    }
  }
  return 0.0;
}

std::vector<double> subgradient_H(std::span<const double> u, Denominator kind) {
  std::vector<double> q(u.size(), 0.0);
  switch (kind) {
    case Denominator::L2: {
      const double nrm = norm2(u);
      if (nrm > 0.0)
        for (std::size_t i = 0; i < u.size(); ++i) q[i] = u[i] / nrm;
      break;
    }
    case Denominator::L1: {
      for (std::size_t i = 0; i < u.size(); ++i)
        q[i] = u[i] > 0.0 ? 1.0 : (u[i] < 0.0 ? -1.0 : 0.0);
      break;
    }
    case Denominator::L1_MEDIAN: {
      if (u.empty()) break;
      const double med = lower_median({u.begin(), u.end()});
      // sign pattern off the median; the median-valued coordinates share the
      // mass that makes q sum to zero, so q stays a subgradient of
      // min_c |u - c|_1 and <q, u> = H(u) holds exactly
      long long pos = 0, neg = 0, zero = 0;
      for (double v : u) {
        if (v > med)
          ++pos;
        else if (v < med)
          ++neg;
        else
          ++zero;
      }
      const double at_median = zero > 0 ? static_cast<double>(neg - pos) / static_cast<double>(zero) : 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        q[i] = u[i] > med ? 1.0 : (u[i] < med ? -1.0 : at_median);
      break;
    }
  }
  return q;
}

std::vector<double> shifted_subgradient(std::span<const double> q, std::span<const double> d) {
  if (q.size() != d.size()) throw DimensionMismatch(d.size(), q.size());
  const double c = dot(d, q) / dot(d, d);
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = q[i] - c * d[i];
  return out;
}

RatioValue ratio(const GradientOperator& g, std::span<const double> u, Denominator kind,
                 double vanish_tol) {
  RatioValue r;
  r.numerator = energy_J(g, u);
  r.denominator = denominator_value(u, kind);
  if (norm2(u) < vanish_tol || r.denominator <= vanish_tol) {
    r.vanished = true;
    r.ratio = 0.0;
  } else {
    r.ratio = r.numerator / r.denominator;
  }
  return r;
}

SubgradientCheck verify_subgradient(const GradientOperator& g, std::span<const double> z,
                                    double tol) {
  SubgradientCheck out;
  out.p = g.adjoint(z);  // the adjoint realises D^-1 W^T directly
  out.dual_feasible = norm_inf(z) <= 1.0 + tol;
  const auto& d = g.graph().degrees();
  out.d_inner = dot(out.p, d);
  return out;
}

}  // namespace graph1l
