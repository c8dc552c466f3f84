#include "qrubin/wronskian.hpp"

#include <cmath>
#include <limits>

#include "qrubin/qops.hpp"

namespace qrubin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Complex dq_at(const LatticeFn& y, const LatticePoint& p) {
  if (p.is_zero()) return rubin_dq_zero(y, {1, y.lattice().k_min()}).value;
  return rubin_dq(y, p);
}

void require_same(const LatticeFn& a, const LatticeFn& b) {
  if (!(a.lattice() == b.lattice())) throw DomainError("Wronskian of functions on different lattices");
}

Parity w_parity(Parity a, Parity b) {
  if (a == Parity::general || b == Parity::general) return Parity::general;
  return a == b ? Parity::odd : Parity::even;
}

// points where the 1/x amplification keeps W's rounding error below 1e-10 of its terms
bool reliable(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& p, double& mag) {
  if (p.is_zero() || !y1.has(p) || !y2.has(p) || !y1.has(p.inward()) || !y2.has(p.inward()))
    return false;
  mag = wq_magnitude(y1, y2, p);
  const double amp = std::numeric_limits<double>::epsilon() /
                     ((1.0 - y1.lattice().q()) * std::abs(y1.lattice().x(p)));
  return amp <= 1e-10;
}

}  // namespace

Complex wq(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x) {
  require_same(y1, y2);
  const Parity p1 = y1.parity(), p2 = y2.parity();
  if (p1 == Parity::general || p2 == Parity::general)
    throw ParityError("wq needs declared even/odd functions");
  const double q = y1.lattice().q();
  if (p1 == Parity::odd && p2 == Parity::even) return -wq(y2, y1, x);
  if (p1 == Parity::even && p2 == Parity::odd)
    return y1(x) * dq_at(y2, x) - q * y2(x) * dq_at(y1, x.inward());
  if (p1 == Parity::odd) return y1(x) * dq_at(y2, x) - y2(x) * dq_at(y1, x);
  return q * y1(x) * dq_at(y2, x.inward()) - q * y2(x) * dq_at(y1, x.inward());
}

Complex wq_ratio_form(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x) {
  require_same(y1, y2);
  if (x.is_zero()) throw DomainError("wq_ratio_form is undefined at x = 0");
  const double q = y1.lattice().q();
  const LatticePoint xi = x.inward();
  return (y2(x) * y1(xi) - y1(x) * y2(xi)) / ((1.0 - q) * y1.lattice().x(x));
}

double wq_magnitude(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x) {
  if (x.is_zero()) throw DomainError("wq_magnitude is undefined at x = 0");
  const double q = y1.lattice().q();
  const LatticePoint xi = x.inward();
  return (std::abs(y2(x)) * std::abs(y1(xi)) + std::abs(y1(x)) * std::abs(y2(xi))) /
         ((1.0 - q) * std::abs(y1.lattice().x(x)));
}

LatticeFn wronskian(const LatticeFn& y1, const LatticeFn& y2) {
  require_same(y1, y2);
  const QLattice& lat = y1.lattice();
  const bool dispatch = y1.parity() != Parity::general && y2.parity() != Parity::general;
  Eigen::VectorXcd v(lat.size());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    if (p.is_zero()) continue;
    try {
      v[i] = dispatch ? wq(y1, y2, p) : wq_ratio_form(y1, y2, p);
    } catch (const MissingValue&) {
      v[i] = missing();
    }
  }
  v[lat.zero_index()] = missing();
  // origin: ring limit of the profile itself
  const LatticeFn provisional(lat, v, w_parity(y1.parity(), y2.parity()));
  if (provisional.q_regular()) v[lat.zero_index()] = provisional.value_at_zero();
  return LatticeFn(lat, std::move(v), provisional.parity());
}

Complex dq_wq(const LatticeFn& y1, const LatticeFn& y2, const LatticePoint& x) {
  require_same(y1, y2);
  const Parity p1 = y1.parity(), p2 = y2.parity();
  if (p1 == Parity::general || p2 == Parity::general)
    throw ParityError("dq_wq needs declared even/odd functions");
  const LatticeFn d1 = rubin_dq_n(y1, 2), d2 = rubin_dq_n(y2, 2);
  const double q = y1.lattice().q();
  if (p1 != p2) return y1(x) * d2(x) - y2(x) * d1(x);
  const LatticePoint xi = x.inward();
  return q * y1(xi) * d2(xi) - q * y2(xi) * d1(xi);
}

Complex abel_E(const SecondOrderSpec& s, double x) {
  const double q = s.interval.q();
  const Complex a0 = s.a0(x);
  if (a0 == Complex(0.0)) throw DomainError("abel_E: a0 vanishes at x = " + format_real(x));
  const Complex a1 = s.a1 ? s.a1(x) : Complex(0.0);
  const Complex a2 = s.a2 ? s.a2(x) : Complex(0.0);
  return (a1 + x * (1.0 - q) * a2) / a0;
}

Complex abel_E(const SecondOrderSpec& s, const LatticePoint& x) {
  return abel_E(s, s.interval.x(x));
}

AbelResidual abel_residual(const SecondOrderSpec& s, const LatticeFn& y1, const LatticeFn& y2) {
  require_same(y1, y2);
  const QLattice& lat = y1.lattice();
  const double q = lat.q();
  const LatticeFn W = wronskian(y1, y2);
  const bool typed = y1.parity() != Parity::general && y2.parity() != Parity::general;
  const bool opposite = typed && y1.parity() != y2.parity();

  // magnitude profile of W for the rounding scale of dq W
  Eigen::VectorXcd mv(lat.size());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    if (p.is_zero()) {
      mv[i] = W.has(p) ? Complex(std::abs(W(p))) : missing();
    } else {
      mv[i] = (y1.has(p.inward()) && y2.has(p.inward())) ? Complex(wq_magnitude(y1, y2, p)) : missing();
    }
  }
  const LatticeFn Wm(lat, mv, Parity::even);
  const LatticeFn dW = rubin_dq(W);

  AbelResidual r{typed ? 0.0 : kNaN, 0.0};
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    if (p.is_zero()) continue;
    const double x = lat.x(p);
    const Complex E = abel_E(s, x);
    if (W.has(p) && W.has(p.inward()) && Wm.has(p) && Wm.has(p.inward())) {
      const Complex f = 1.0 + x * (1.0 - q) * E;
      const double scale = std::max(1.0, std::abs(Wm(p.inward())) + std::abs(f) * std::abs(Wm(p)));
      r.recurrence = std::max(r.recurrence, std::abs(W(p.inward()) - f * W(p)) / scale);
    }
    if (!typed || !dW.has(p)) continue;
    const LatticePoint m = p.negated();
    if (!(Wm.has(p.outward()) && Wm.has(m.outward()) && Wm.has(p.inward()) && Wm.has(m.inward()) &&
          Wm.has(m)))
      continue;
    const double dscale = rubin_dq_magnitude(Wm, p);
    Complex law;
    double scale;
    if (opposite) {
      const LatticePoint po = p.outward();
      const Complex Eo = abel_E(s, lat.x(po));
      law = dW(p) + Eo * W(po) / q;
      scale = dscale + std::abs(Eo) * std::abs(Wm(po)) / q;
    } else {
      law = dW(p) + E * W(p);
      scale = dscale + std::abs(E) * std::abs(Wm(p));
    }
    r.law = std::max(r.law, std::abs(law) / std::max(1.0, scale));
  }
  return r;
}

Complex liouville_wq(const SecondOrderSpec& s, Complex w0, double x, int n_factors) {
  if (n_factors < 1) throw DomainError("liouville_wq needs at least one factor");
  if (x == 0.0) return w0;
  const double q = s.interval.q(), tol = s.interval.context().series_tol();
  Complex prod = 1.0;
  double xk = x;
  for (int k = 0; k < n_factors; ++k, xk *= q) {
    const Complex f = 1.0 + xk * (1.0 - q) * abel_E(s, xk);
    if (f == Complex(0.0))
      throw SingularFactor("Liouville factor vanishes at x = " + format_real(xk));
    prod *= f;
  }
  if (std::abs(xk * (1.0 - q) * abel_E(s, xk)) >= tol)
    throw TailNotNegligible("Liouville product tail still above series_tol after " +
                            std::to_string(n_factors) + " factors");
  return w0 / prod;
}

Complex liouville_wq(const SecondOrderSpec& s, Complex w0, double x) {
  if (x == 0.0) return w0;
  const double q = s.interval.q(), tol = s.interval.context().series_tol();
  double xk = x;
  for (int n = 0; n < s.interval.context().max_terms(); ++n, xk *= q)
    if (std::abs(xk * (1.0 - q) * abel_E(s, xk)) < tol) return liouville_wq(s, w0, x, std::max(n, 1));
  throw TailNotNegligible("Liouville product did not settle within max_terms factors");
}

double default_fundamental_tol(const LatticeFn& y1, const LatticeFn& y2) {
  const QLattice& lat = y1.lattice();
  double m = 0.0;
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    double mag = 0.0;
    if (reliable(y1, y2, lat.point_at(i), mag)) m = std::max(m, mag);
  }
  return 1e-8 * m;
}

bool is_fundamental(const LatticeFn& y1, const LatticeFn& y2, double fundamental_tol) {
  const LatticeFn W = wronskian(y1, y2);
  const LatticePoint z = LatticePoint::zero();
  if (!W.has(z)) throw NotQRegular("W(0) could not be extrapolated from the window");
  return std::abs(W(z)) > fundamental_tol;
}

bool is_fundamental(const LatticeFn& y1, const LatticeFn& y2) {
  return is_fundamental(y1, y2, default_fundamental_tol(y1, y2));
}

WronskianReport wronskian_report(const SecondOrderSpec& s, const LatticeFn& y1, const LatticeFn& y2) {
  const QLattice& lat = y1.lattice();
  LatticeFn W = wronskian(y1, y2);
  Eigen::VectorXcd E(lat.size());
  for (Eigen::Index i = 0; i < lat.size(); ++i) E[i] = abel_E(s, lat.points()[i]);
  const AbelResidual ar = abel_residual(s, y1, y2);
  const double tol = default_fundamental_tol(y1, y2);
  const LatticePoint z = LatticePoint::zero();
  const Complex w0 = W.has(z) ? W(z) : missing();
  double lres = 0.0, wmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    double mag = 0.0;
    if (!W.has(p) || p.is_zero() || !reliable(y1, y2, p, mag)) continue;
    wmin = std::min(wmin, std::abs(W(p)));
    if (!is_missing(w0)) {
      const Complex lw = liouville_wq(s, w0, lat.x(p));
      lres = std::max(lres, std::abs(W(p) - lw) / std::max(1.0, mag));
    }
  }
  const bool fundamental = !is_missing(w0) && std::abs(w0) > tol;
  return {std::move(W), std::move(E), ar.max(), lres, tol, fundamental, wmin > tol};
}

}  // namespace qrubin
