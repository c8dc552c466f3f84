#pragma once

#include "qrubin/lattice.hpp"

namespace qrubin {

/// Jackson integral from 0 to x: x (1-q) sum_n q^n f(q^n x).
///
/// The sum runs inward from x over the contiguous available samples. The
/// neglected tail is bounded by the last included term times q/(1-q) and must
/// stay below series_tol.
Complex jackson_integral(const LatticeFn& f, const LatticePoint& x);

/// The running integral x -> int_0^x f on the whole window (0 at the origin).
/// Points whose inward run is too short for the tail bound are missing.
LatticeFn jackson_integral(const LatticeFn& f);

/// int_0^b - int_0^a.
Complex jackson_integral_ab(const LatticeFn& f, const LatticePoint& a, const LatticePoint& b);

enum class Domain { positive_axis, negative_axis, full_line };

/// Bilateral sum (1-q) sum_{n in window} q^n f(+-q^n) with both tails checked.
Complex improper_integral(const LatticeFn& f, Domain domain);

/// Residuals of the fundamental theorems on interior points of the window.
///   odd f:  d/dq int_0^x f = q^{-1} f(x/q)     int_0^x d_q f = f(x) - f(0+)
///   even f: d/dq int_0^x f = f(x)              int_0^x d_q f = f(x/q) - f(0+)
struct FtcReport {
  Parity parity;
  double derivative_of_integral;
  double integral_of_derivative;
  double max() const { return std::max(derivative_of_integral, integral_of_derivative); }
};
FtcReport ftc_check(const LatticeFn& f);

/// LHS - RHS of integration by parts over [-a, a]:
///   int d_q f g  -  { 2 [f_e(a/q) g_o(a) + f_o(a) g_e(a/q)] - int f d_q g }.
Complex ibp_residual(const LatticeFn& f, const LatticeFn& g, const LatticePoint& a);

}  // namespace qrubin
