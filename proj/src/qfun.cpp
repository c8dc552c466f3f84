#include "qrubin/qfun.hpp"

#include <cmath>

namespace qrubin {

Complex QSeries::evaluate(Complex x, const QContext& ctx) const {
  if (std::abs(x) > radius_hint)
    throw DomainError("QSeries evaluated outside its radius hint");
  Complex sum = 0.0, xn = 1.0;
  int small = 0;
  const int n = static_cast<int>(std::min<std::size_t>(coefficients.size(), ctx.max_terms()));
  for (int i = 0; i < n; ++i, xn *= x) {
    if (coefficients[i] == Complex(0.0)) continue;
    const Complex t = coefficients[i] * xn;
    sum += t;
    small = std::abs(t) < ctx.series_tol() * (1.0 + std::abs(sum)) ? small + 1 : 0;
    if (small >= 2) return sum;
  }
  return sum;  // a finite coefficient list is summed exactly
}

QSeries rubin_derivative(const QSeries& s, const QContext& ctx) {
  QSeries d;
  d.radius_hint = s.radius_hint;
  const double q = ctx.q();
  for (std::size_t m = 1; m < s.coefficients.size(); ++m) {
    const int mi = static_cast<int>(m);
    const double c = (m % 2 ? 1.0 : std::pow(q, -mi)) * q_bracket(mi, ctx);
    d.coefficients.push_back(c * s.coefficients[m]);
  }
  return d;
}

}  // namespace qrubin
