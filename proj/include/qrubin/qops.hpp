#pragma once

#include "qrubin/lattice.hpp"

namespace qrubin {

/// Jackson derivative (f(x) - f(qx)) / ((1-q) x), x != 0.
Complex jackson_dq(const LatticeFn& f, const LatticePoint& x);

/// lim (f(q^n x) - f(0)) / (q^n x) along the probe's ray.
RingLimit jackson_dq_zero(const LatticeFn& f, const LatticePoint& probe);

/// n-th Jackson derivative through the alternating q-binomial sum over f(q^{n-k} x).
Complex jackson_dq_n(const LatticeFn& f, const LatticePoint& x, int n);

/// Rubin's five-point operator
///   [f(x/q) + f(-x/q) - f(qx) + f(-qx) - 2 f(-x)] / (2 (1-q) x),  x != 0.
Complex rubin_dq(const LatticeFn& f, const LatticePoint& x);

/// lim of rubin_dq(f, q^n probe) by ring extrapolation; NotQRegular if it does not settle.
RingLimit rubin_dq_zero(const LatticeFn& f, const LatticePoint& probe);

/// The operator on the whole window. Boundary rings become missing; the origin is
/// filled by extrapolation (missing if that fails). Parity flips.
LatticeFn rubin_dq(const LatticeFn& f);

LatticeFn rubin_dq_n(const LatticeFn& f, int n);
Complex rubin_dq_n(const LatticeFn& f, const LatticePoint& x, int n);

/// n-th Rubin derivative assembled from Jackson derivatives of the parity parts.
Complex rubin_via_parity(const LatticeFn& f, const LatticePoint& x, int n);

/// Derivative of the product f g by the parity-matched product rule.
Complex rubin_product(const LatticeFn& f, const LatticeFn& g, const LatticePoint& x);

/// Sum of the absolute five-point terms over 2(1-q)|x|: the scale against which
/// the rounding error of rubin_dq(f, x) is measured.
double rubin_dq_magnitude(const LatticeFn& f, const LatticePoint& x);

/// Five-point operator on a callable at an arbitrary nonzero x.
template <typename F, typename Scalar>
auto rubin_dq_at(F&& f, const Scalar& x, double q) {
  const auto num = f(x / q) + f(-x / q) - f(q * x) + f(-q * x) - 2.0 * f(-x);
  return num / (2.0 * (1.0 - q) * x);
}

}  // namespace qrubin
