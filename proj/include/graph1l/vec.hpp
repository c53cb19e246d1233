#ifndef GRAPH1L_VEC_HPP
#define GRAPH1L_VEC_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace graph1l {

// Reductions are blocked with a fixed block size and the per-block partials
// are combined in block order. The result is therefore bit-identical for any
// thread count, including a serial build.
inline constexpr std::size_t kReductionBlock = 4096;

namespace detail {

template <typename Term>
double blocked_sum(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (nblocks == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = lo + kReductionBlock < n ? lo + kReductionBlock : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace detail

inline double dot(std::span<const double> x, std::span<const double> y) {
  return detail::blocked_sum(x.size(), [&](std::size_t i) { return x[i] * y[i]; });
}

inline double norm2_sq(std::span<const double> x) {
  return detail::blocked_sum(x.size(), [&](std::size_t i) { return x[i] * x[i]; });
}

inline double norm2(std::span<const double> x) { return std::sqrt(norm2_sq(x)); }

inline double norm1(std::span<const double> x) {
  return detail::blocked_sum(x.size(), [&](std::size_t i) { return std::abs(x[i]); });
}

inline double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline void scale(std::span<double> x, double a) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(x.size()); ++i) x[static_cast<std::size_t>(i)] *= a;
}

// y += a*x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(x.size()); ++i)
    y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
}

inline double dist2(std::span<const double> x, std::span<const double> y) {
  return std::sqrt(detail::blocked_sum(x.size(), [&](std::size_t i) {
    const double d = x[i] - y[i];
    return d * d;
  }));
}

// Plain single-pass kernels kept as the reference the OpenMP paths are
// checked against.
namespace reference {

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double norm1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

}  // namespace reference

}  // namespace graph1l

#endif
