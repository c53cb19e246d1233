#ifndef GRAPH1L_GRAPH_HPP
#define GRAPH1L_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace graph1l {

struct Edge {
  std::uint32_t i;  // lower endpoint
  std::uint32_t j;  // upper endpoint, i < j
  double w;         // > 0
};

/// Undirected weighted graph with degree-normalised differences in mind:
/// every unordered edge is stored once, sorted by (i, j), and the degree
/// vector d is the exact row sum of the edge weights. Immutable once built.
class WeightedGraph {
 public:
  std::size_t num_nodes() const { return d_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& degrees() const { return d_; }
  double degree(std::size_t i) const { return d_[i]; }

  double total_volume() const;

  friend WeightedGraph build_from_edge_list(std::vector<Edge> edges, std::size_t n);

 private:
  WeightedGraph() = default;
  std::vector<Edge> edges_;
  std::vector<double> d_;
};

/// Validates, merges duplicate (i,j)/(j,i) entries by weight summation,
/// sorts by (i, j) and computes degrees.
/// Throws BadIndex, NonPositiveWeight, IsolatedNode.
WeightedGraph build_from_edge_list(std::vector<Edge> edges, std::size_t n);

/// Bandwidth rule for the Gaussian kernel: self-tuning uses the distance to
/// the k-th neighbour per node, fixed uses one global sigma.
struct SigmaRule {
  bool self_tuning = true;
  double fixed = 1.0;
  static SigmaRule self() { return {true, 1.0}; }
  static SigmaRule value(double s) { return {false, s}; }
};

/// Exact k-NN graph under Euclidean distance, w = exp(-dist^2 / (sigma_i*sigma_j)),
/// symmetrised by keeping the max weight per unordered pair.
/// features is row-major n x dim.
WeightedGraph build_knn_gaussian(const std::vector<std::vector<double>>& features,
                                 std::size_t k, SigmaRule sigma = SigmaRule::self());

// --- file formats ---------------------------------------------------------

/// "i j w" per line, 0-based, '#' comments and blank lines ignored.
std::vector<Edge> load_edge_list(const std::string& path, std::size_t& n_out);
void save_edge_list(const std::string& path, const WeightedGraph& g);

/// CSV, one row per node, no header, all numeric.
std::vector<std::vector<double>> load_features_csv(const std::string& path);

/// One integer class per line.
std::vector<int> load_labels(const std::string& path);

}  // namespace graph1l

#endif
