#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "qrubin/qsymbols.hpp"

namespace qrubin {

/// Power series sum a_n x^n.
struct QSeries {
  std::vector<Complex> coefficients;
  double radius_hint = std::numeric_limits<double>::infinity();

  /// Forward summation; stops once two consecutive nonzero-coefficient terms fall
  /// below series_tol (1 + |partial sum|).
  Complex evaluate(Complex x, const QContext& ctx) const;
};

/// Coefficients of the Rubin derivative: x^m -> [m]_q x^{m-1} (m odd),
/// q^{-m} [m]_q x^{m-1} (m even).
QSeries rubin_derivative(const QSeries& s, const QContext& ctx);

/// b_n(x; q^2) = q^{h(h+1)} x^n / [n]_q!,  h = floor(n/2).
template <typename Scalar>
Scalar b_coeff(int n, const Scalar& x, const QContext& ctx) {
  detail::require_nonnegative(n, "b_coeff");
  const int h = n / 2;
  Scalar p(1);
  for (int i = 0; i < n; ++i) p *= x;
  return p * (std::pow(ctx.q(), double(h) * (h + 1)) / q_factorial(n, ctx));
}

namespace detail {

// Sum of the terms t_0, t_1, ... where t_{j+1} = t_j * ratio(j).
template <typename Scalar, typename Ratio>
Scalar sum_by_ratio(Scalar t, Ratio ratio, const QContext& ctx, const char* name) {
  using std::abs;
  Scalar sum = t;
  int small = abs(t) < ctx.series_tol() ? 1 : 0;
  for (int j = 0; j < ctx.max_terms(); ++j) {
    t *= ratio(j);
    sum += t;
    small = abs(t) < ctx.series_tol() * (1.0 + abs(sum)) ? small + 1 : 0;
    if (small >= 2) return sum;
  }
  throw TruncationNotConverged(std::string(name) + ": max_terms reached");
}

// [n]_q for n = 1, 2, ... generated on demand
class Brackets {
 public:
  explicit Brackets(double q) : q_(q) {}
  double operator()(int n) {
    while (static_cast<int>(v_.size()) < n) v_.push_back(1.0 + q_ * (v_.empty() ? 0.0 : v_.back()));
    return v_[n - 1];
  }

 private:
  double q_;
  std::vector<double> v_;
};

}  // namespace detail

/// cos(x; q^2) = sum (-1)^n b_{2n}(x; q^2).
template <typename Scalar>
Scalar q_cos(const Scalar& x, const QContext& ctx) {
  const double q = ctx.q();
  detail::Brackets br(q);
  const Scalar x2 = x * x;
  return detail::sum_by_ratio(
      Scalar(1),
      [&](int p) { return -x2 * (std::pow(q, 2.0 * (p + 1)) / (br(2 * p + 1) * br(2 * p + 2))); },
      ctx, "q_cos");
}

/// sin(x; q^2) = sum (-1)^n b_{2n+1}(x; q^2).
template <typename Scalar>
Scalar q_sin(const Scalar& x, const QContext& ctx) {
  const double q = ctx.q();
  detail::Brackets br(q);
  const Scalar x2 = x * x;
  return detail::sum_by_ratio(
      x, [&](int p) { return -x2 * (std::pow(q, 2.0 * (p + 1)) / (br(2 * p + 2) * br(2 * p + 3))); },
      ctx, "q_sin");
}

/// e(x; q^2) = sum b_n(x; q^2).
template <typename Scalar>
Scalar q_exp(const Scalar& x, const QContext& ctx) {
  const double q = ctx.q();
  detail::Brackets br(q);
  return detail::sum_by_ratio(
      Scalar(1),
      [&](int n) {
        // b_{n+1}/b_n: the q power only moves when n+1 is even
        const double qp = n % 2 ? std::pow(q, double(n + 1)) : 1.0;
        return x * (qp / br(n + 1));
      },
      ctx, "q_exp");
}

}  // namespace qrubin
