#include "qrubin/qint.hpp"

#include <algorithm>
#include <cmath>

#include "qrubin/qops.hpp"

namespace qrubin {

namespace {

struct RaySums {
  // suffix[j] = sum_{i >= j} q^{k_j} f(sign s q^{k_j}) over the contiguous run ending
  // at the innermost available ring, indexed by ring offset from k_min.
  std::vector<Complex> suffix;
  std::vector<bool> ok;  // tail bound satisfied
};

RaySums ray_sums(const LatticeFn& f, int sign) {
  const QLattice& lat = f.lattice();
  const double q = lat.q(), tol = lat.context().series_tol();
  const int r = lat.rings();
  RaySums s{std::vector<Complex>(r, missing()), std::vector<bool>(r, false)};
  Complex acc = 0.0;
  bool have = false;
  double tail = 0.0;  // bound on the neglected part of x (1-q) sum, per unit of the run
  for (int j = r - 1; j >= 0; --j) {
    const LatticePoint p{sign, lat.k_min() + j};
    if (!f.has(p)) {
      acc = 0.0;
      have = false;
      continue;
    }
    const double w = (1.0 - q) * std::abs(lat.x(p));
    const Complex term = w * f(p);
    if (!have) {
      tail = std::abs(term) * q / (1.0 - q);
      have = true;
    }
    acc += term;
    s.suffix[j] = acc;
    s.ok[j] = tail < tol;
  }
  return s;
}

}  // namespace

Complex jackson_integral(const LatticeFn& f, const LatticePoint& x) {
  const QLattice& lat = f.lattice();
  if (x.is_zero()) return 0.0;
  const int j = x.k - lat.k_min();
  if (!lat.contains(x) || !f.has(x)) throw MissingValue("jackson_integral: no sample at x");
  // accumulate inward from the innermost end of the run so the result matches the whole-window form
  const RaySums s = ray_sums(f, x.sign);
  if (!s.ok[j])
    throw TailNotNegligible("Jackson sum tail beyond the innermost ring exceeds series_tol at x = " +
                            format_real(lat.x(x)));
  return double(x.sign) * s.suffix[j];
}

LatticeFn jackson_integral(const LatticeFn& f) {
  const QLattice& lat = f.lattice();
  Eigen::VectorXcd v(lat.size());
  v[lat.zero_index()] = 0.0;
  for (int sign : {-1, 1}) {
    const RaySums s = ray_sums(f, sign);
    for (int j = 0; j < lat.rings(); ++j) {
      const LatticePoint p{sign, lat.k_min() + j};
      v[lat.index(p)] = s.ok[j] ? double(sign) * s.suffix[j] : missing();
    }
  }
  return LatticeFn(lat, std::move(v), flipped(f.parity()));
}

Complex jackson_integral_ab(const LatticeFn& f, const LatticePoint& a, const LatticePoint& b) {
  if (a == b) return 0.0;
  return jackson_integral(f, b) - jackson_integral(f, a);
}

Complex improper_integral(const LatticeFn& f, Domain domain) {
  const QLattice& lat = f.lattice();
  const double q = lat.q(), tol = lat.context().series_tol();
  auto ray = [&](int sign) {
    Complex acc = 0.0;
    for (int k = lat.k_max(); k >= lat.k_min(); --k) {
      const LatticePoint p{sign, k};
      acc += (1.0 - q) * std::abs(lat.x(p)) * f(p);
    }
    const double inner = (1.0 - q) * std::abs(lat.x({sign, lat.k_max()})) * std::abs(f({sign, lat.k_max()}));
    const double outer = (1.0 - q) * std::abs(lat.x({sign, lat.k_min()})) * std::abs(f({sign, lat.k_min()}));
    if (inner * q / (1.0 - q) >= tol)
      throw TailNotNegligible("small-x tail of the bilateral sum exceeds series_tol");
    // outward terms grow by 1/q in the weight; a negligible outer tail needs f to die there
    if (outer / (1.0 - q) >= tol)
      throw TailNotNegligible("large-x tail of the bilateral sum exceeds series_tol");
    return acc;
  };
  switch (domain) {
    case Domain::positive_axis: return ray(1);
    case Domain::negative_axis: return ray(-1);
    default: return ray(1) + ray(-1);
  }
}

FtcReport ftc_check(const LatticeFn& f) {
  if (f.parity() == Parity::general) throw ParityError("ftc_check needs an even or odd function");
  const QLattice& lat = f.lattice();
  const double q = lat.q();
  const bool odd = f.parity() == Parity::odd;
  const LatticeFn F = jackson_integral(f);
  const LatticeFn df = rubin_dq(f);
  const LatticeFn Idf = jackson_integral(df);
  const Complex f0 = f.value_at_zero();
  FtcReport rep{f.parity(), 0.0, 0.0};
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint x = lat.point_at(i);
    if (x.is_zero() || !lat.contains(x.outward()) || !lat.contains(x.inward())) continue;
    const LatticePoint m = x.negated();
    if (F.has(x.outward()) && F.has(m.outward()) && F.has(x.inward()) && F.has(m.inward()) &&
        F.has(m)) {
      const Complex lhs = rubin_dq(F, x);
      const Complex rhs = odd ? f(x.outward()) / q : f(x);
      rep.derivative_of_integral = std::max(rep.derivative_of_integral, std::abs(lhs - rhs));
    }
    if (Idf.has(x)) {
      const Complex rhs = (odd ? f(x) : f(x.outward())) - f0;
      rep.integral_of_derivative = std::max(rep.integral_of_derivative, std::abs(Idf(x) - rhs));
    }
  }
  return rep;
}

Complex ibp_residual(const LatticeFn& f, const LatticeFn& g, const LatticePoint& a) {
  if (a.is_zero() || a.sign < 0) throw DomainError("ibp_residual needs a > 0");
  const auto [fe, fo] = parity_decompose(f);
  const auto [ge, go] = parity_decompose(g);
  const LatticeFn lhs_integrand = rubin_dq(f) * g;
  const LatticeFn rhs_integrand = f * rubin_dq(g);
  const LatticePoint ma = a.negated();
  const Complex lhs = jackson_integral_ab(lhs_integrand, ma, a);
  const Complex boundary = 2.0 * (fe(a.outward()) * go(a) + fo(a) * ge(a.outward()));
  const Complex rhs = boundary - jackson_integral_ab(rhs_integrand, ma, a);
  return lhs - rhs;
}

}  // namespace qrubin
