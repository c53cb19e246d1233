#ifndef GRAPH1L_ENERGY_HPP
#define GRAPH1L_ENERGY_HPP

#include <span>
#include <vector>

#include "graph1l/gradient.hpp"

namespace graph1l {

/// Denominators H of the Rayleigh quotient. All are absolutely
/// one-homogeneous; the null set is u = 0 for L2/L1 and constants for
/// L1_MEDIAN.
enum class Denominator { L2, L1, L1_MEDIAN };

inline constexpr double kVanishTol = 1e-12;

struct RatioValue {
  double numerator = 0.0;    // J(u)
  double denominator = 0.0;  // H(u)
  double ratio = 0.0;        // J/H, or 0 when vanished
  bool vanished = false;
};

/// J(u) = sum over edges of w_ij |u_i/d_i - u_j/d_j|, each unordered edge once.
double energy_J(const GradientOperator& g, std::span<const double> u);

/// D_p(u) = sum over edges of w_ij |u_i/d_i^(1/p) - u_j/d_j^(1/p)|^p, p >= 1.
/// D_1 coincides with energy_J.
double energy_Dp(const WeightedGraph& g, std::span<const double> u, double p);

double denominator_value(std::span<const double> u, Denominator kind);

/// A subgradient q of H at u selected so that <q, u> = H(u) holds exactly.
/// L2: u/|u|2 (0 at 0). L1: sign(u) with sign(0) = 0. L1_MEDIAN: sign of
/// u - median with the median-valued coordinates sharing the balancing mass
/// that makes q sum to zero (lower median for even length).
std::vector<double> subgradient_H(std::span<const double> u, Denominator kind);

/// q - (<d,q>/<d,d>) d, orthogonal to d.
std::vector<double> shifted_subgradient(std::span<const double> q, std::span<const double> d);

/// J(u)/H(u) with the vanished convention: R = 0 when |u|2 < vanish_tol or
/// the denominator itself vanishes.
RatioValue ratio(const GradientOperator& g, std::span<const double> u, Denominator kind,
                 double vanish_tol = kVanishTol);

struct SubgradientCheck {
  std::vector<double> p;       // D^-1 W^T z
  bool dual_feasible = false;  // |z|_inf <= 1 + tol
  double d_inner = 0.0;        // <p, d>, zero for every element of the subdifferential
};

/// Realises p = D^-1 W^T z and checks the subdifferential characterisation:
/// the boolean is |z|_inf <= 1 + tol, and <p, d> = 0 within tol*|p||d| is
/// asserted on the result.
SubgradientCheck verify_subgradient(const GradientOperator& g, std::span<const double> z,
                                    double tol = 1e-12);

}  // namespace graph1l

#endif
