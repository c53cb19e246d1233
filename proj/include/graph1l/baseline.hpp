#ifndef GRAPH1L_BASELINE_HPP
#define GRAPH1L_BASELINE_HPP

#include "graph1l/flow.hpp"

namespace graph1l {

struct DiffusionConfig {
  double alpha = 0.99;  // in (0, 1)
  std::size_t max_iter = 20000;
  double tol = 1e-7;  // sup-norm change per sweep
};

/// Local-and-global-consistency diffusion: F <- alpha S F + (1-alpha) Y with
/// S = D^-1/2 A D^-1/2, Y one-hot on labeled rows, F0 = Y. Throws
/// NoConvergence.
Labeling run_lgc(const WeightedGraph& g, const LabelPrior& prior, const DiffusionConfig& cfg);

/// Harmonic label propagation: unlabeled rows of F replaced by (D^-1 A F),
/// labeled rows reset to one-hot each sweep. Throws NoConvergence.
Labeling run_label_propagation(const WeightedGraph& g, const LabelPrior& prior,
                               const DiffusionConfig& cfg);

}  // namespace graph1l

#endif
