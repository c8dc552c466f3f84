#include "qrubin/constcoef.hpp"

#include <cmath>

#include "qrubin/qops.hpp"
#include "qrubin/wronskian.hpp"

namespace qrubin {

namespace {

void require_typed(Parity p) {
  if (p == Parity::general) throw ParityError("series solutions are even or odd");
}

}  // namespace

QSeries series_solution(Complex a, Complex b, Parity parity, int num_coeffs, const QContext& ctx) {
  if (a == Complex(0.0)) throw DomainError("series_solution needs a != 0");
  if (num_coeffs < 1) throw DomainError("series_solution needs num_coeffs >= 1");
  require_typed(parity);
  const double q = ctx.q();
  const Complex r = b / a;
  QSeries s;
  s.coefficients.assign(num_coeffs, 0.0);
  const int first = parity == Parity::even ? 0 : 1;
  if (first < num_coeffs) s.coefficients[first] = 1.0;
  for (int n = first + 2; n < num_coeffs; n += 2) {
    // n = 2p (even) or 2p+1 (odd); both factors are 1 - q^n and 1 - q^{n-1}
    const int p2 = parity == Parity::even ? n : n - 1;
    const double f = std::pow(q, p2) * (1.0 - q) * (1.0 - q) /
                     ((1.0 - std::pow(q, n)) * (1.0 - std::pow(q, n - 1)));
    s.coefficients[n] = -r * f * s.coefficients[n - 2];
  }
  return s;
}

QSeries series_closed_form(Complex a, Complex b, Parity parity, int num_coeffs, const QContext& ctx) {
  if (a == Complex(0.0)) throw DomainError("series_closed_form needs a != 0");
  require_typed(parity);
  const double q = ctx.q();
  const Complex r = b / a;
  QSeries s;
  s.coefficients.assign(num_coeffs, 0.0);
  const int first = parity == Parity::even ? 0 : 1;
  for (int n = first, p = 0; n < num_coeffs; n += 2, ++p) {
    const double sign = p % 2 ? -1.0 : 1.0;
    s.coefficients[n] = sign * std::pow(q, double(p) * (p + 1)) * std::pow(r, p) *
                        std::pow(1.0 - q, n) / q_pochhammer(q, n, ctx);
  }
  return s;
}

int default_num_coeffs(Complex a, Complex b, double radius, const QContext& ctx) {
  if (a == Complex(0.0)) throw DomainError("default_num_coeffs needs a != 0");
  const double r = std::abs(b / a), q = ctx.q();
  // |a_n| radius^n through the ratio of successive terms
  double t = 1.0;
  for (int n = 2; n < ctx.max_terms(); n += 2) {
    t *= r * radius * radius * std::pow(q, n) * (1.0 - q) * (1.0 - q) /
         ((1.0 - std::pow(q, n)) * (1.0 - std::pow(q, n - 1)));
    if (t < ctx.series_tol() && n > 4) return n + 2;
  }
  throw TruncationNotConverged("default_num_coeffs: series does not settle");
}

ClosedFormPair closed_form_pair(Complex a, Complex b, const QContext& ctx) {
  if (a == Complex(0.0) || b == Complex(0.0)) throw DomainError("closed_form_pair needs a, b != 0");
  const Complex lambda = std::sqrt(b / a);
  return {[lambda, ctx](Complex x) { return q_cos(lambda * x, ctx); },
          [lambda, ctx](Complex x) { return q_sin(lambda * x, ctx) / lambda; }, lambda};
}

SecondOrderSpec constcoef_spec(Complex a, Complex b, const QLattice& lattice, Complex b1, Complex b2) {
  const double q = lattice.q();
  return SecondOrderSpec{[a, q](double) { return a / q; }, [](double) { return Complex(0.0); },
                         [b](double) { return b; }, [](double) { return Complex(0.0); },
                         b1, b2, lattice};
}

SecondOrderSpec constcoef_shifted_spec(Complex a, Complex b, const QLattice& lattice) {
  const double q = lattice.q();
  // a1 is written as -(x (1-q)) b so that a1 + x (1-q) a2 cancels exactly
  return SecondOrderSpec{[a, q](double) { return a / q; },
                         [b, q](double x) { return -(x * (1.0 - q) * b); },
                         [b](double) { return b; }, [](double) { return Complex(0.0); },
                         1.0, 0.0, lattice};
}

double rewritten_form_residual(Complex a, Complex b, const LatticeFn& y, OddVariant variant) {
  if (y.parity() == Parity::general) throw ParityError("rewritten_form_residual needs an even or odd y");
  const QLattice& lat = y.lattice();
  if (y.parity() == Parity::even || variant == OddVariant::derived)
    return equation_residual(constcoef_shifted_spec(a, b, lat), y, EquationForm::shifted);
  const double q = lat.q();
  const LatticeFn z = rubin_dq(y), z2 = rubin_dq(z);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    if (p.is_zero()) continue;
    const LatticePoint pin = p.inward();
    if (!(z2.has(pin) && z.has(pin) && y.has(p))) continue;
    const double x = lat.x(p);
    const Complex r = a * z2(pin) - b * (1.0 - q) * x * z(pin) + b * y(p);
    const double mag = std::abs(a) * rubin_dq_magnitude(z, pin) +
                       std::abs(b) * (1.0 - q) * std::abs(x) * std::abs(z(pin)) + std::abs(b * y(p));
    worst = std::max(worst, std::abs(r) / std::max(1.0, mag));
  }
  return worst;
}

Complex wq_constcoef(Complex a, Complex b, double x, const QContext& ctx) {
  const ClosedFormPair pr = closed_form_pair(a, b, ctx);
  const double q = ctx.q();
  if (x == 0.0) {
    // dq y2(0) = 1, dq y1(0) = 0 (the initial data of the pair)
    return pr.y1(0.0) * 1.0 - q * pr.y2(0.0) * 0.0;
  }
  const Complex dy2 = rubin_dq_at(pr.y2, Complex(x), q);
  const Complex dy1q = rubin_dq_at(pr.y1, Complex(q * x), q);
  return pr.y1(x) * dy2 - q * pr.y2(x) * dy1q;
}

}  // namespace qrubin
