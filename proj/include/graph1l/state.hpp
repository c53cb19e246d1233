#ifndef GRAPH1L_STATE_HPP
#define GRAPH1L_STATE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "graph1l/vec.hpp"

namespace graph1l {

/// Column-major dense matrix; one column per class keeps the per-class
/// operator applications contiguous.
class MultiClassState {
 public:
  MultiClassState() = default;
  MultiClassState(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t r, std::size_t c) { return a_[c * rows_ + r]; }
  double at(std::size_t r, std::size_t c) const { return a_[c * rows_ + r]; }

  std::span<double> col(std::size_t c) { return {a_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const { return {a_.data() + c * rows_, rows_}; }

  std::span<double> flat() { return a_; }
  std::span<const double> flat() const { return a_; }

  /// Joint (Frobenius) two-norm over all classes.
  double joint_norm() const { return norm2(flat()); }

  bool same_shape(const MultiClassState& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

inline double frobenius_dist(const MultiClassState& a, const MultiClassState& b) {
  const auto x = a.flat();
  const auto y = b.flat();
  const double s = detail::blocked_sum(x.size(), [&](std::size_t i) {
    const double d = x[i] - y[i];
    return d * d;
  });
  return std::sqrt(s);
}

}  // namespace graph1l

#endif
