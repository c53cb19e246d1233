#include "graph1l/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graph1l/errors.hpp"

namespace graph1l {

ConstraintSpec ConstraintSpec::transductive(std::vector<std::vector<std::size_t>> sets,
                                            double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("transductive epsilon must be > 0");
  ConstraintSpec c;
  c.mode = CouplingMode::TRANSDUCTIVE;
  c.labeled_sets = std::move(sets);
  c.epsilon = eps;
  return c;
}

std::vector<int> ConstraintSpec::label_of(std::size_t n) const {
  std::vector<int> lab(n, -1);
  for (std::size_t l = 0; l < labeled_sets.size(); ++l)
    for (std::size_t x : labeled_sets[l]) {
      if (x >= n) throw BadIndex("labeled node " + std::to_string(x));
      if (lab[x] != -1)
        throw std::invalid_argument("node " + std::to_string(x) + " labeled twice");
      lab[x] = static_cast<int>(l);
    }
  return lab;
}

namespace {

void project_sum_zero_row(MultiClassState& u, std::size_t x) {
  const std::size_t L = u.cols();
  double mean = 0.0;
  for (std::size_t l = 0; l < L; ++l) mean += u.at(x, l);
  mean /= static_cast<double>(L);
  for (std::size_t l = 0; l < L; ++l) u.at(x, l) -= mean;
}

void project_rows(MultiClassState& u, const std::vector<int>& lab, double eps) {
  const std::size_t n = u.rows();
  const std::size_t L = u.cols();
#pragma omp parallel for schedule(static)
  for (long long xx = 0; xx < static_cast<long long>(n); ++xx) {
    const std::size_t x = static_cast<std::size_t>(xx);
    const int c = lab.empty() ? -1 : lab[x];
    if (c < 0) {
      project_sum_zero_row(u, x);
    } else {
      for (std::size_t l = 0; l < L; ++l) {
        if (static_cast<int>(l) == c)
          u.at(x, l) = std::max(u.at(x, l), eps);
        else
          u.at(x, l) = std::min(u.at(x, l), -eps);
      }
    }
  }
}

}  // namespace

void project_coupling(MultiClassState& u, const ConstraintSpec& constraint) {
  switch (constraint.mode) {
    case CouplingMode::NONE:
      return;
    case CouplingMode::SUM_ZERO:
      project_rows(u, {}, 0.0);
      return;
    case CouplingMode::TRANSDUCTIVE:
      project_rows(u, constraint.label_of(u.rows()), constraint.epsilon);
      return;
  }
}

namespace {

constexpr std::size_t kGapCheckEvery = 16;

// One Chambolle-Pock solve of
//   min_{u in C} sum_l (1/2dt)|u^l - b^l|^2 + |K u^l|_1
// with tau = sigma = step_ratio/|K| and over-relaxation 1. The quadratic is
// absorbed in the primal proximal step together with the exact projection
// onto C; the dual prox is the box clamp.
ProxResult solve_prox(const GradientOperator& g, const MultiClassState& u_start,
                      const MultiClassState& b, double dt, const ConstraintSpec& constraint,
                      const InnerConfig& cfg, const MultiClassState* warm_dual) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (cfg.max_iter < 1 || !(cfg.rel_tol > 0.0) || !(cfg.gap_tol > 0.0) ||
      !(cfg.step_ratio > 0.0 && cfg.step_ratio <= 1.0))
    throw std::invalid_argument("invalid InnerConfig");

  const std::size_t n = g.num_nodes();
  const std::size_t m = g.num_edges();
  const std::size_t L = u_start.cols();
  const double normK = g.cached_norm();
  // accelerated steps driven by the 1/dt strong convexity of the quadratic;
  // tau_n sigma_n |K|^2 = step_ratio^2 stays invariant under the update
  double tau = cfg.step_ratio / normK;
  double sigma = cfg.step_ratio / normK;
  const double gamma = 1.0 / dt;

  const std::vector<int> lab = constraint.mode == CouplingMode::TRANSDUCTIVE
                                   ? constraint.label_of(n)
                                   : std::vector<int>{};
  auto project = [&](MultiClassState& s) {
    if (constraint.mode == CouplingMode::SUM_ZERO)
      project_rows(s, {}, 0.0);
    else if (constraint.mode == CouplingMode::TRANSDUCTIVE)
      project_rows(s, lab, constraint.epsilon);
  };

  MultiClassState u = u_start;
  project(u);  // feasible start
  MultiClassState u_prev = u;
  MultiClassState ubar = u;
  MultiClassState z(m, L);
  if (warm_dual && warm_dual->rows() == m && warm_dual->cols() == L) {
    z = *warm_dual;
    for (double& v : z.flat()) v = std::clamp(v, -1.0, 1.0);
  }
  MultiClassState adj(n, L);   // K^T z per class
  MultiClassState uhat(n, L);  // dual-side primal candidate for the gap
  std::vector<double> ku(m);

  double gap = std::numeric_limits<double>::infinity();
  double objective = 0.0;
  bool gap_certified = false;
  std::size_t it = 0;

  for (it = 1; it <= cfg.max_iter; ++it) {
    // dual ascent + box clamp
    for (std::size_t l = 0; l < L; ++l) {
      g.apply(ubar.col(l), ku);
      auto zl = z.col(l);
#pragma omp parallel for schedule(static)
      for (long long e = 0; e < static_cast<long long>(m); ++e) {
        const auto i = static_cast<std::size_t>(e);
        zl[i] = std::clamp(zl[i] + sigma * ku[i], -1.0, 1.0);
      }
    }
    // primal proximal step, written incrementally around b so that a
    // fixed point with K^T z = 0 and u = b is reproduced bit-exactly
    const double shrink = dt / (dt + tau);
    u_prev = u;
    for (std::size_t l = 0; l < L; ++l) {
      g.adjoint(z.col(l), adj.col(l));
      auto ul = u.col(l);
      auto bl = b.col(l);
      auto al = adj.col(l);
#pragma omp parallel for schedule(static)
      for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const auto x = static_cast<std::size_t>(i);
        ul[x] = bl[x] + shrink * (ul[x] - bl[x] - tau * al[x]);
      }
    }
    project(u);
    const double theta = 1.0 / std::sqrt(1.0 + 2.0 * gamma * tau);
    tau *= theta;
    sigma /= theta;
    // ubar = u + theta (u - u_prev)
    {
      auto ub = ubar.flat();
      auto uc = u.flat();
      auto up = u_prev.flat();
#pragma omp parallel for schedule(static)
      for (long long i = 0; i < static_cast<long long>(uc.size()); ++i) {
        const auto x = static_cast<std::size_t>(i);
        ub[x] = uc[x] + theta * (uc[x] - up[x]);
      }
    }

    const double change = frobenius_dist(u, u_prev);
    const double unorm = u.joint_norm();
    const bool rel_stop = change <= cfg.rel_tol * std::max(unorm, 1e-300);

    // the gap costs one extra gradient pass per class, so it is sampled;
    // adj still holds K^T z for the dual side
    if (rel_stop || it % kGapCheckEvery == 0 || it == cfg.max_iter) {
      double primal = 0.0, dual = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        g.apply(u.col(l), ku);
        primal += norm1(ku);
        auto ul = u.col(l);
        auto bl = b.col(l);
        primal += detail::blocked_sum(n,
                                      [&](std::size_t x) {
                                        const double dlt = ul[x] - bl[x];
                                        return dlt * dlt;
                                      }) /
                  (2.0 * dt);
      }
      {
        auto uh = uhat.flat();
        auto bf = b.flat();
        auto af = adj.flat();
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(uh.size()); ++i) {
          const auto x = static_cast<std::size_t>(i);
          uh[x] = bf[x] - dt * af[x];
        }
        project(uhat);
        for (std::size_t l = 0; l < L; ++l) {
          auto uhl = uhat.col(l);
          auto bl = b.col(l);
          auto al = adj.col(l);
          dual += detail::blocked_sum(n, [&](std::size_t x) {
            const double dlt = uhl[x] - bl[x];
            return al[x] * uhl[x] + dlt * dlt / (2.0 * dt);
          });
        }
      }
      gap = primal - dual;
      objective = primal;
      if (gap <= cfg.gap_tol) {
        gap_certified = true;
        break;
      }
    }
    if (rel_stop) break;
  }
  if (it > cfg.max_iter) {
    it = cfg.max_iter;
    if (gap > 10.0 * cfg.gap_tol) throw NoConvergence(it, gap);
  }

  ProxResult out;
  out.u_half = std::move(u);
  out.dual = std::move(z);
  out.iterations = it;
  out.gap = gap;
  out.gap_certified = gap_certified;
  out.objective = objective;
  return out;
}

MultiClassState column_state(std::span<const double> v) {
  MultiClassState s(v.size(), 1);
  std::copy(v.begin(), v.end(), s.col(0).begin());
  return s;
}

}  // namespace

ProxResult prox_step_binary(const GradientOperator& g, std::span<const double> u_k, double R_k,
                            std::span<const double> q_shifted, double dt, const InnerConfig& cfg,
                            const MultiClassState* warm_dual) {
  if (u_k.size() != g.num_nodes()) throw DimensionMismatch(g.num_nodes(), u_k.size());
  if (q_shifted.size() != g.num_nodes()) throw DimensionMismatch(g.num_nodes(), q_shifted.size());
  MultiClassState u0 = column_state(u_k);
  MultiClassState b = u0;
  {
    auto bc = b.col(0);
    const double step = dt * R_k;
    for (std::size_t i = 0; i < bc.size(); ++i) bc[i] += step * q_shifted[i];
  }
  return solve_prox(g, u0, b, dt, ConstraintSpec::none(), cfg, warm_dual);
}

ProxResult prox_step_multiclass(const GradientOperator& g, const MultiClassState& u_k,
                                const std::vector<double>& R_k, const MultiClassState& q_shifted,
                                double dt, const ConstraintSpec& constraint,
                                const InnerConfig& cfg, const MultiClassState* warm_dual) {
  if (u_k.rows() != g.num_nodes()) throw DimensionMismatch(g.num_nodes(), u_k.rows());
  if (!u_k.same_shape(q_shifted)) throw DimensionMismatch(u_k.cols(), q_shifted.cols());
  if (R_k.size() != u_k.cols()) throw DimensionMismatch(u_k.cols(), R_k.size());
  if (constraint.mode == CouplingMode::NONE)
    throw std::invalid_argument("multi-class prox requires SUM_ZERO or TRANSDUCTIVE coupling");
  MultiClassState b = u_k;
  for (std::size_t l = 0; l < u_k.cols(); ++l) {
    auto bl = b.col(l);
    auto ql = q_shifted.col(l);
    const double step = dt * R_k[l];
    for (std::size_t i = 0; i < bl.size(); ++i) bl[i] += step * ql[i];
  }
  return solve_prox(g, u_k, b, dt, constraint, cfg, warm_dual);
}

ChiResidualReport chi_subgradient_residual(const GradientOperator& g,
                                           const MultiClassState& u_before,
                                           const MultiClassState& u_after,
                                           const std::vector<double>& R_k,
                                           const MultiClassState& q_shifted, double dt,
                                           const MultiClassState& dual,
                                           const ConstraintSpec& constraint) {
  const std::size_t n = u_before.rows();
  const std::size_t L = u_before.cols();
  MultiClassState r(n, L);
  std::vector<double> p(n);
  for (std::size_t l = 0; l < L; ++l) {
    g.adjoint(dual.col(l), p);
    auto rb = r.col(l);
    auto ub = u_before.col(l);
    auto ua = u_after.col(l);
    auto ql = q_shifted.col(l);
    for (std::size_t x = 0; x < n; ++x)
      rb[x] = (ub[x] - ua[x]) / dt + R_k[l] * ql[x] - p[x];
  }
  const std::vector<int> lab = constraint.mode == CouplingMode::TRANSDUCTIVE
                                   ? constraint.label_of(n)
                                   : std::vector<int>{};
  ChiResidualReport rep;
  rep.alpha.resize(n);
  rep.deviation.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    double mean = 0.0;
    for (std::size_t l = 0; l < L; ++l) mean += r.at(x, l);
    mean /= static_cast<double>(L);
    double dev = 0.0;
    for (std::size_t l = 0; l < L; ++l) dev = std::max(dev, std::abs(r.at(x, l) - mean));
    rep.alpha[x] = mean;
    rep.deviation[x] = dev;
    const bool unlabeled = lab.empty() || lab[x] < 0;
    if (unlabeled) rep.max_unlabeled_deviation = std::max(rep.max_unlabeled_deviation, dev);
  }
  return rep;
}

}  // namespace graph1l
