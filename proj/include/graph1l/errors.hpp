#ifndef GRAPH1L_ERRORS_HPP
#define GRAPH1L_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graph1l {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IsolatedNode : GraphError {
  std::size_t node;
  explicit IsolatedNode(std::size_t i)
      : GraphError("isolated node " + std::to_string(i) + " (zero degree)"), node(i) {}
};

struct BadIndex : GraphError {
  explicit BadIndex(const std::string& what) : GraphError("bad index: " + what) {}
};

struct NonPositiveWeight : GraphError {
  explicit NonPositiveWeight(const std::string& what)
      : GraphError("non-positive weight: " + what) {}
};

struct DegenerateFeatures : GraphError {
  explicit DegenerateFeatures(const std::string& what)
      : GraphError("degenerate features: " + what) {}
};

struct DimensionMismatch : std::invalid_argument {
  DimensionMismatch(std::size_t expected, std::size_t got)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

struct NoConvergence : std::runtime_error {
  std::size_t iterations;
  double final_gap;
  NoConvergence(std::size_t iters, double gap)
      : std::runtime_error("inner solver did not converge after " + std::to_string(iters) +
                           " iterations (gap " + std::to_string(gap) + ")"),
        iterations(iters),
        final_gap(gap) {}
};

struct ConstantLimit : std::runtime_error {
  ConstantLimit()
      : std::runtime_error("flow limit has entries of a single sign; "
                           "expected a sign change in the steady state") {}
};

struct InfeasibleEpsilon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooFewSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  std::string file;
  std::size_t line;
  ParseError(std::string f, std::size_t l, const std::string& what)
      : std::runtime_error(f + ":" + std::to_string(l) + ": " + what),
        file(std::move(f)),
        line(l) {}
};

}  // namespace graph1l

#endif
