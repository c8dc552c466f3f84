#pragma once

#include "qrubin/ivp.hpp"
#include "qrubin/lattice.hpp"

namespace qrubin {

/// q-Wronskian by parity:
///   (even, odd)   y1(x) dq y2(x) - q y2(x) dq y1(qx)
///   (odd, odd)    y1(x) dq y2(x) - y2(x) dq y1(x)
///   (even, even)  q y1(x) dq y2(qx) - q y2(x) dq y1(qx)
///   (odd, even)   -W(y2, y1)
Complex wq(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x);

/// (y2(x) y1(qx) - y1(x) y2(qx)) / ((1-q) x); parity free.
Complex wq_ratio_form(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x);

/// W on the whole window. Declared parities use wq, general ones the ratio form;
/// the origin is the ring limit of the profile.
LatticeFn wronskian(const LatticeFn& y1, const LatticeFn& y2);

/// Rounding scale of W at x: the ratio-form terms (|y2(x) y1(qx)| + |y1(x) y2(qx)|)/((1-q)|x|).
double wq_magnitude(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x);

/// dq W in closed form:
///   opposite parity  y1(x) dq^2 y2(x) - y2(x) dq^2 y1(x)
///   same parity      q y1(qx) dq^2 y2(qx) - q y2(qx) dq^2 y1(qx)
Complex dq_wq(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x);

/// E(x) = (a1(x) + x (1-q) a2(x)) / a0(x).
Complex abel_E(const SecondOrderSpec& s, double x);
Complex abel_E(const SecondOrderSpec& s, const LatticePoint& x);

struct AbelResidual {
  double law;         // first-order law for dq W; NaN for general parity
  double recurrence;  // W(qx) = (1 + x(1-q) E(x)) W(x)
  double max() const { return std::isnan(law) ? recurrence : std::max(law, recurrence); }
};
AbelResidual abel_residual(const SecondOrderSpec& s, const LatticeFn& y1, const LatticeFn& y2);

/// w0 / prod_{k<n} (1 + x (1-q) q^k E(x q^k)).
Complex liouville_wq(const SecondOrderSpec& s, Complex w0, double x, int n_factors);
/// Same, with as many factors as the tail test requires.
Complex liouville_wq(const SecondOrderSpec& s, Complex w0, double x);

/// |W(0)| > tol.
bool is_fundamental(const LatticeFn& y1, const LatticeFn& y2, double fundamental_tol);
/// Default tol: 1e-8 times the largest W term magnitude over the reliable part of the window.
bool is_fundamental(const LatticeFn& y1, const LatticeFn& y2);
double default_fundamental_tol(const LatticeFn& y1, const LatticeFn& y2);

struct WronskianReport {
  LatticeFn w_values;
  Eigen::VectorXcd E_values;  // aligned with the lattice points
  double abel_residual;
  double liouville_residual;
  double fundamental_tol;
  bool fundamental;  // |W(0)| > fundamental_tol
  bool never_zero;   // min |W| > fundamental_tol over the reliable window
};
WronskianReport wronskian_report(const SecondOrderSpec& s, const LatticeFn& y1, const LatticeFn& y2);

}  // namespace qrubin
