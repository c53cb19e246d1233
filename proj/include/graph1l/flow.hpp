#ifndef GRAPH1L_FLOW_HPP
#define GRAPH1L_FLOW_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graph1l/prox.hpp"

namespace graph1l {

struct FlowConfig {
  double dt = 1.0;
  std::size_t max_outer = 500;
  double outer_tol = 1e-6;
  Denominator kind = Denominator::L2;
  double epsilon = 1e-4;  // transductive clamp margin
  InnerConfig inner;
  std::uint64_t seed = 1;
};

enum class FlowStatus { Converged, MaxOuterReached };

/// Per-iteration diagnostics. State rows (ratios, denominators,
/// d_orthogonality, constraint_violation) cover iterates u_0..u_K and are one
/// longer than step rows (residuals, inner_iters, half_norms).
struct FlowTrace {
  std::vector<std::vector<double>> ratios;        // R(u^l_k) per class
  std::vector<std::vector<double>> denominators;  // H(u^l_k) per class
  std::vector<std::vector<double>> d_orthogonality;  // <u^l_k, d> per class
  std::vector<double> constraint_violation;       // max node |sum_l u^l| over unlabeled
  std::vector<double> norms;                      // joint |u_k|_2 per state
  std::vector<double> residuals;                  // |u_{k+1} - u_k|_2
  std::vector<std::size_t> inner_iters;
  std::vector<double> half_norms;                 // |u_{k+1/2}|_2 per step
  FlowStatus status = FlowStatus::MaxOuterReached;

  std::size_t steps() const { return residuals.size(); }
  std::string to_json() const;
};

/// Partial ground truth: sparse node -> class assignments plus the class
/// count. Every class must have at least one labeled node.
struct LabelPrior {
  std::size_t num_classes = 0;
  std::vector<std::pair<std::size_t, int>> assignments;  // (node, class), sorted by node

  void validate(std::size_t n) const;
  /// bounds and duplicates only; classes may be unlabeled (diffusion
  /// baselines accept such priors, the anchored flow does not)
  void validate_nodes(std::size_t n) const;
  std::vector<int> label_of(std::size_t n) const;  // -1 for unlabeled
  std::vector<std::vector<std::size_t>> class_sets() const;
  std::size_t count() const { return assignments.size(); }
};

struct Labeling {
  std::vector<int> hard;
  MultiClassState soft;  // nonnegative rows summing to 1
};

struct BinaryFlowResult {
  std::vector<double> u;
  std::vector<bool> partition;  // u > 0
  FlowTrace trace;
};

struct MultiClassFlowResult {
  MultiClassState u;
  FlowTrace trace;
};

struct TransductiveResult {
  MultiClassState u;
  Labeling labeling;
  FlowTrace trace;
};

/// Binary partition flow. u0, when given, must satisfy <u0, d> = 0 and
/// |u0|2 = 1 within 1e-10; otherwise a seeded random start is projected and
/// normalised. Throws ConstantLimit when the steady state has entries of
/// only one sign beyond 1e-10.
BinaryFlowResult run_binary(const GradientOperator& g, const FlowConfig& cfg,
                            const std::vector<double>* u0 = nullptr);

/// Coupled flow for L classes under the per-node zero-sum constraint with
/// joint renormalisation. u0, when given, must satisfy the constraint and
/// per-class d-orthogonality with joint norm 1. Non-convergence is reported
/// in the trace; the partial result is still returned.
MultiClassFlowResult run_multiclass(const GradientOperator& g, std::size_t num_classes,
                                    const FlowConfig& cfg, const MultiClassState* u0 = nullptr);

/// Label-clamped flow: same outer loop with the transductive constraint,
/// decoding labels on convergence. Labeled nodes keep their prior class.
TransductiveResult run_transductive(const GradientOperator& g, const LabelPrior& prior,
                                    const FlowConfig& cfg);

/// hard = argmax (ties to the lowest class index); soft weights spread over
/// the nonnegative classes, uniform when they carry no mass.
Labeling decode_labels(const MultiClassState& u, const LabelPrior* prior = nullptr);

/// Feasible start for the transductive flow: labeled rows get (L-1, -1,..)
/// patterns, unlabeled rows small zero-sum noise, jointly normalised.
/// Throws InfeasibleEpsilon when the clamp margin cannot survive
/// normalisation.
MultiClassState init_transductive(const GradientOperator& g, const LabelPrior& prior,
                                  double epsilon, std::uint64_t seed);

}  // namespace graph1l

#endif
