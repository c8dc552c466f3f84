#include "qrubin/qsymbols.hpp"

#include <algorithm>
#include <cmath>

namespace qrubin {

QContext::QContext(double q, double series_tol, int max_terms)
    : q_(q), series_tol_(series_tol), max_terms_(max_terms), spectral_(false) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0,1), got " + std::to_string(q));
  if (!(series_tol > 0.0)) throw DomainError("series_tol must be positive");
  if (max_terms < 1) throw DomainError("max_terms must be at least 1");
  const double r = std::log1p(-q) / std::log(q);
  spectral_ = std::abs(r - 2.0 * std::round(r / 2.0)) < 1e-9;
}

double q_bracket(int n, const QContext& ctx) {
  detail::require_nonnegative(n, "q_bracket");
  // the finite sum is exact to rounding and avoids cancellation as q -> 1
  double s = 0.0, qk = 1.0;
  for (int k = 0; k < n; ++k) {
    s += qk;
    qk *= ctx.q();
  }
  return s;
}

double q_factorial(int n, const QContext& ctx) {
  detail::require_nonnegative(n, "q_factorial");
  double p = 1.0;
  for (int m = 1; m <= n; ++m) p *= q_bracket(m, ctx);
  return p;
}

double q_binomial(int n, int k, const QContext& ctx) {
  detail::require_nonnegative(n, "q_binomial");
  detail::require_nonnegative(k, "q_binomial");
  if (k > n) throw DomainError("q_binomial: k > n");
  k = std::min(k, n - k);
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r *= q_bracket(n - k + j, ctx) / q_bracket(j, ctx);
  return r;
}

}  // namespace qrubin
