#ifndef GRAPH1L_PROX_HPP
#define GRAPH1L_PROX_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "graph1l/energy.hpp"
#include "graph1l/state.hpp"

namespace graph1l {

struct InnerConfig {
  std::size_t max_iter = 2000;
  double rel_tol = 1e-8;
  double gap_tol = 1e-7;
  double step_ratio = 0.99;  // tau*sigma*|K|^2 = step_ratio^2 <= 1
};

enum class CouplingMode { NONE, SUM_ZERO, TRANSDUCTIVE };

/// The coupling constraint C: per-node zero sum across classes, optionally
/// with labeled nodes clamped to u^l(x) >= eps (own class) and <= -eps
/// (other classes).
struct ConstraintSpec {
  CouplingMode mode = CouplingMode::NONE;
  std::vector<std::vector<std::size_t>> labeled_sets;  // per class, TRANSDUCTIVE only
  double epsilon = 1e-4;

  static ConstraintSpec none() { return {}; }
  static ConstraintSpec sum_zero() { return {CouplingMode::SUM_ZERO, {}, 0.0}; }
  static ConstraintSpec transductive(std::vector<std::vector<std::size_t>> sets, double eps);

  /// class index per node, -1 for unlabeled; sized n
  std::vector<int> label_of(std::size_t n) const;
};

/// Exact Euclidean projection onto C. SUM_ZERO subtracts the per-node class
/// mean; TRANSDUCTIVE additionally clamps labeled nodes (the box is
/// separable per coordinate). Idempotent; identity for mode NONE.
void project_coupling(MultiClassState& u, const ConstraintSpec& constraint);

struct ProxResult {
  MultiClassState u_half;
  MultiClassState dual;  // m x L, feasible |z|_inf <= 1
  std::size_t iterations = 0;
  double gap = 0.0;
  bool gap_certified = false;  // stopped on the gap criterion
  double objective = 0.0;      // (1/2dt)|u-b|^2 + sum_l J(u^l) at u_half
};

/// Minimises F_k over u: (1/2dt)|u - u_k|^2 - R_k <q_shifted, u> + J(u),
/// i.e. u = prox_{dt J}(u_k + dt R_k q_shifted), with a first-order
/// primal-dual scheme. warm_dual, when given, seeds the dual variable.
/// Throws NoConvergence when max_iter is hit with gap > 10*gap_tol.
ProxResult prox_step_binary(const GradientOperator& g, std::span<const double> u_k, double R_k,
                            std::span<const double> q_shifted, double dt, const InnerConfig& cfg,
                            const MultiClassState* warm_dual = nullptr);

/// Multi-class version of the same subproblem with the coupling constraint
/// entering through its exact projection inside the primal proximal step.
/// The J and quadratic terms separate per class; classes couple only
/// through C. The returned state satisfies the constraint exactly.
ProxResult prox_step_multiclass(const GradientOperator& g, const MultiClassState& u_k,
                                const std::vector<double>& R_k, const MultiClassState& q_shifted,
                                double dt, const ConstraintSpec& constraint,
                                const InnerConfig& cfg, const MultiClassState* warm_dual = nullptr);

struct ChiResidualReport {
  std::vector<double> alpha;         // per-node constraint multiplier (class mean)
  std::vector<double> deviation;     // per-node max |r^l - alpha| over classes
  double max_unlabeled_deviation = 0.0;
};

/// Recovers the implicit constraint multiplier per node from the optimality
/// residual r^l(x) = (u_k - u_half)/dt + R_k q_shifted - K^T z of one
/// prox_step_multiclass invocation; on unlabeled nodes it must be
/// class-uniform.
ChiResidualReport chi_subgradient_residual(const GradientOperator& g,
                                           const MultiClassState& u_before,
                                           const MultiClassState& u_after,
                                           const std::vector<double>& R_k,
                                           const MultiClassState& q_shifted, double dt,
                                           const MultiClassState& dual,
                                           const ConstraintSpec& constraint);

}  // namespace graph1l

#endif
