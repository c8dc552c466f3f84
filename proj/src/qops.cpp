#include "qrubin/qops.hpp"

#include <cmath>
#include <vector>

namespace qrubin {

namespace {

constexpr double kZeroLimitTol = 1e-6;

void require_nonzero(const LatticePoint& x, const char* op) {
  if (x.is_zero()) throw DomainError(std::string(op) + " is undefined at x = 0; use its _zero form");
}

RingLimit settle(const std::vector<Complex>& seq, double q, const char* what) {
  const RingLimit r = extrapolate_geometric(seq, q);
  if (!(r.error <= kZeroLimitTol * std::max(1.0, std::abs(r.value))))
    throw NotQRegular(std::string(what) + " does not settle (error estimate " +
                      format_real(r.error) + ")");
  return r;
}

Complex origin_value(const LatticeFn& f) {
  const Complex f0 = f.values()[f.lattice().zero_index()];
  return is_missing(f0) ? f.value_at_zero() : f0;
}

}  // namespace

Complex jackson_dq(const LatticeFn& f, const LatticePoint& x) {
  require_nonzero(x, "jackson_dq");
  const double xv = f.lattice().x(x);
  return (f(x) - f(x.inward())) / ((1.0 - f.lattice().q()) * xv);
}

RingLimit jackson_dq_zero(const LatticeFn& f, const LatticePoint& probe) {
  require_nonzero(probe, "jackson_dq_zero probe");
  const Complex f0 = origin_value(f);
  std::vector<Complex> seq;
  for (LatticePoint p = probe; f.has(p); p = p.inward())
    seq.push_back((f(p) - f0) / f.lattice().x(p));
  return settle(seq, f.lattice().q(), "Jackson difference quotient at zero");
}

Complex jackson_dq_n(const LatticeFn& f, const LatticePoint& x, int n) {
  if (n < 0) throw DomainError("jackson_dq_n: negative order");
  if (n == 0) return f(x);
  require_nonzero(x, "jackson_dq_n");
  const QContext& ctx = f.lattice().context();
  const double q = ctx.q();
  Complex sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double c = q_binomial(n, k, ctx) * std::pow(q, 0.5 * k * (k - 1));
    sum += (k % 2 ? -c : c) * f(x.scaled(n - k));
  }
  const double xv = f.lattice().x(x);
  const double pre = (n % 2 ? -1.0 : 1.0) * std::pow(q, -0.5 * n * (n - 1)) /
                     std::pow((1.0 - q) * xv, n);
  return pre * sum;
}

Complex rubin_dq(const LatticeFn& f, const LatticePoint& x) {
  require_nonzero(x, "rubin_dq");
  const double q = f.lattice().q();
  const double xv = f.lattice().x(x);
  const LatticePoint m = x.negated();
  const Complex num = f(x.outward()) + f(m.outward()) - f(x.inward()) + f(m.inward()) - 2.0 * f(m);
  return num / (2.0 * (1.0 - q) * xv);
}

double rubin_dq_magnitude(const LatticeFn& f, const LatticePoint& x) {
  require_nonzero(x, "rubin_dq_magnitude");
  const double q = f.lattice().q();
  const LatticePoint m = x.negated();
  const double s = std::abs(f(x.outward())) + std::abs(f(m.outward())) + std::abs(f(x.inward())) +
                   std::abs(f(m.inward())) + 2.0 * std::abs(f(m));
  return s / (2.0 * (1.0 - q) * std::abs(f.lattice().x(x)));
}

RingLimit rubin_dq_zero(const LatticeFn& f, const LatticePoint& probe) {
  require_nonzero(probe, "rubin_dq_zero probe");
  std::vector<Complex> seq;
  for (LatticePoint p = probe; f.lattice().contains(p.inward()); p = p.inward()) {
    const LatticePoint m = p.negated();
    if (!(f.has(p.outward()) && f.has(m.outward()) && f.has(p.inward()) && f.has(m.inward()) &&
          f.has(m))) {
      if (seq.empty()) continue;
      break;
    }
    seq.push_back(rubin_dq(f, p));
  }
  return settle(seq, f.lattice().q(), "Rubin difference quotient at zero");
}

LatticeFn rubin_dq(const LatticeFn& f) {
  const QLattice& lat = f.lattice();
  Eigen::VectorXcd v(lat.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    if (p.is_zero()) continue;
    const LatticePoint m = p.negated();
    const bool ok = f.has(p.outward()) && f.has(m.outward()) && f.has(p.inward()) &&
                    f.has(m.inward()) && f.has(m);
    v[i] = ok ? rubin_dq(f, p) : missing();
  }
  Complex z = missing();
  try {
    z = rubin_dq_zero(f, {1, lat.k_min()}).value;
  } catch (const NotQRegular&) {
  } catch (const MissingValue&) {
  }
  v[lat.zero_index()] = z;
  return LatticeFn(lat, std::move(v), flipped(f.parity()));
}

LatticeFn rubin_dq_n(const LatticeFn& f, int n) {
  if (n < 0) throw DomainError("rubin_dq_n: negative order");
  LatticeFn g = f;
  for (int i = 0; i < n; ++i) g = rubin_dq(g);
  return g;
}

Complex rubin_dq_n(const LatticeFn& f, const LatticePoint& x, int n) {
  return rubin_dq_n(f, n)(x);
}

Complex rubin_via_parity(const LatticeFn& f, const LatticePoint& x, int n) {
  if (n < 0) throw DomainError("rubin_via_parity: negative order");
  if (n == 0) return f(x);
  require_nonzero(x, "rubin_via_parity");
  const auto [fe, fo] = parity_decompose(f);
  const double q = f.lattice().q();
  const int m = n / 2;
  if (n % 2 == 0) {
    return std::pow(q, -m * (m + 1.0)) * jackson_dq_n(fe, x.scaled(-m), n) +
           std::pow(q, -double(m) * m) * jackson_dq_n(fo, x.scaled(-m), n);
  }
  return std::pow(q, -(m + 1.0) * (m + 1.0)) * jackson_dq_n(fe, x.scaled(-(m + 1)), n) +
         std::pow(q, -m * (m + 1.0)) * jackson_dq_n(fo, x.scaled(-m), n);
}

Complex rubin_product(const LatticeFn& f, const LatticeFn& g, const LatticePoint& x) {
  if (f.parity() == Parity::general || g.parity() == Parity::general)
    throw ParityError("rubin_product needs declared even/odd factors");
  require_nonzero(x, "rubin_product");
  const double q = f.lattice().q();
  if (f.parity() != g.parity()) {
    const LatticeFn& e = f.parity() == Parity::even ? f : g;
    const LatticeFn& o = f.parity() == Parity::even ? g : f;
    return e(x) * rubin_dq(o, x) + q * o(x.inward()) * rubin_dq(e, x.inward());
  }
  if (f.parity() == Parity::even) return g(x.outward()) * rubin_dq(f, x) + f(x) * rubin_dq(g, x);
  return (g(x.outward()) * rubin_dq(f, x.outward()) + f(x) * rubin_dq(g, x.outward())) / q;
}

}  // namespace qrubin
