#ifndef GRAPH1L_GRADIENT_HPP
#define GRAPH1L_GRADIENT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "graph1l/graph.hpp"

namespace graph1l {

/// The edge-difference operator K = W D^-1 mapping node values to edge
/// values, (Ku)_e = w_ij (u_i/d_i - u_j/d_j) with +w on the lower index,
/// and its exact adjoint K^T = D^-1 W^T.
///
/// apply() is parallel over edges; adjoint() gathers per node over a fixed
/// incidence order, so both are bit-reproducible for any thread count.
class GradientOperator {
 public:
  explicit GradientOperator(const WeightedGraph& g);

  const WeightedGraph& graph() const { return *g_; }
  std::size_t num_edges() const { return g_->num_edges(); }
  std::size_t num_nodes() const { return g_->num_nodes(); }

  /// out (length m) = K u. Throws DimensionMismatch.
  void apply(std::span<const double> u, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> u) const;

  /// out (length n) = K^T z. Throws DimensionMismatch.
  void adjoint(std::span<const double> z, std::span<double> out) const;
  std::vector<double> adjoint(std::span<const double> z) const;

  /// Largest singular value of K estimated by power iteration on K^T K,
  /// returned with a 5% safety inflation. Deterministic: starts from the
  /// all-ones vector with the d-direction removed (alternating signs when
  /// that degenerates, as it does on regular graphs).
  double operator_norm(std::size_t iters = 100) const;

  /// operator_norm(100), computed once at construction; the inner solver's
  /// step sizes come from this.
  double cached_norm() const { return cached_norm_; }

 private:
  const WeightedGraph* g_;
  // node-major incidence: for node i, the edges touching it and the sign of
  // its endpoint (+ for the lower index)
  std::vector<std::size_t> inc_offset_;
  std::vector<std::uint32_t> inc_edge_;
  std::vector<float> inc_sign_;
  double cached_norm_ = 0.0;
};

/// Straight-line serial kernels used to cross-check the operator and by the
/// benchmark. The adjoint scatters over edges instead of gathering per node.
namespace reference {
std::vector<double> apply_gradient(const WeightedGraph& g, std::span<const double> u);
std::vector<double> apply_adjoint(const WeightedGraph& g, std::span<const double> z);
}  // namespace reference

}  // namespace graph1l

#endif
