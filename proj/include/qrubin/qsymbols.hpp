#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "qrubin/errors.hpp"

namespace qrubin {

using Complex = std::complex<double>;

/// The deformation parameter together with the truncation policy shared by
/// every infinite series, product and Jackson sum.
class QContext {
 public:
  static constexpr double kDefaultSeriesTol = 1e-14;
  static constexpr int kDefaultMaxTerms = 100000;

  explicit QContext(double q, double series_tol = kDefaultSeriesTol,
                    int max_terms = kDefaultMaxTerms);

  double q() const noexcept { return q_; }
  double series_tol() const noexcept { return series_tol_; }
  int max_terms() const noexcept { return max_terms_; }

  /// ln(1-q)/ln(q) lies within 1e-9 of an even integer. Recorded, never enforced.
  bool spectral_condition_met() const noexcept { return spectral_; }

  bool operator==(const QContext&) const = default;

 private:
  double q_;
  double series_tol_;
  int max_terms_;
  bool spectral_;
};

namespace detail {
inline void require_nonnegative(int n, const char* what) {
  if (n < 0) throw DomainError(std::string(what) + ": negative order " + std::to_string(n));
}
}  // namespace detail

/// (a;q)_n = prod_{k<n} (1 - a q^k).
template <typename Scalar>
Scalar q_pochhammer(const Scalar& a, int n, const QContext& ctx) {
  detail::require_nonnegative(n, "q_pochhammer");
  Scalar prod(1);
  double qk = 1.0;
  for (int k = 0; k < n; ++k) {
    prod *= Scalar(1) - a * qk;
    qk *= ctx.q();
  }
  return prod;
}

/// (a;q)_inf, truncated once the factor increment |a q^k| drops below series_tol.
template <typename Scalar>
Scalar q_pochhammer_inf(const Scalar& a, const QContext& ctx) {
  using std::abs;
  Scalar prod(1);
  double qk = 1.0;
  for (int k = 0; k < ctx.max_terms(); ++k) {
    const Scalar inc = a * qk;
    if (abs(inc) < ctx.series_tol()) return prod;
    prod *= Scalar(1) - inc;
    qk *= ctx.q();
  }
  throw TruncationNotConverged("q_pochhammer_inf: factor increment still above series_tol after " +
                               std::to_string(ctx.max_terms()) + " factors");
}

/// [n]_q = (1 - q^n)/(1 - q).
double q_bracket(int n, const QContext& ctx);

/// [n]_q! = [1]_q [2]_q ... [n]_q.
double q_factorial(int n, const QContext& ctx);

/// Gauss binomial [n choose k]_q.
double q_binomial(int n, int k, const QContext& ctx);

}  // namespace qrubin
