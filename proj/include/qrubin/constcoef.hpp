#pragma once

#include <functional>

#include "qrubin/ivp.hpp"
#include "qrubin/qfun.hpp"

namespace qrubin {

/// Power-series solution of a dq^2 y + b y = 0 from the coefficient recurrence,
/// normalised by a_0 = 1 (even) or a_1 = 1 (odd). num_coeffs counts powers 0..n-1.
QSeries series_solution(Complex a, Complex b, Parity parity, int num_coeffs, const QContext& ctx);

/// The same coefficients from their closed form
///   a_{2p}   = (-1)^p q^{p(p+1)} (b/a)^p (1-q)^{2p}   / (q;q)_{2p}
///   a_{2p+1} = (-1)^p q^{p(p+1)} (b/a)^p (1-q)^{2p+1} / (q;q)_{2p+1}.
QSeries series_closed_form(Complex a, Complex b, Parity parity, int num_coeffs, const QContext& ctx);

/// Smallest count for which the terms are below series_tol out to |x| = radius.
int default_num_coeffs(Complex a, Complex b, double radius, const QContext& ctx);

struct ClosedFormPair {
  std::function<Complex(Complex)> y1;  // cos(lambda x)
  std::function<Complex(Complex)> y2;  // sin(lambda x) / lambda
  Complex lambda;                      // principal sqrt(b/a)
};
ClosedFormPair closed_form_pair(Complex a, Complex b, const QContext& ctx);

/// Coefficients whose reduced system integrates a dq^2 y + b y = 0: a0 = a/q, a1 = 0, a2 = b.
SecondOrderSpec constcoef_spec(Complex a, Complex b, const QLattice& lattice, Complex b1 = 1.0,
                               Complex b2 = 0.0);
/// The first-order-in-W rewriting: a0 = a/q, a1 = -b (1-q) x, a2 = b, for which E = 0.
SecondOrderSpec constcoef_shifted_spec(Complex a, Complex b, const QLattice& lattice);

enum class OddVariant {
  derived,    // a dq^2 y(qx) - b (1-q) x dq y(x)  + b y(x)
  displayed,  // a dq^2 y(qx) - b (1-q) x dq y(qx) + b y(x)
};

/// Max residual (over its rounding scale) of the rewritten equation; even y uses
/// a dq^2 y(qx) - b q (1-q) x dq y(qx) + b y(x).
double rewritten_form_residual(Complex a, Complex b, const LatticeFn& y,
                               OddVariant variant = OddVariant::derived);

/// q-Wronskian of the closed-form pair at x.
Complex wq_constcoef(Complex a, Complex b, double x, const QContext& ctx);

}  // namespace qrubin
