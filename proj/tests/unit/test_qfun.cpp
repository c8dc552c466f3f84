#include <doctest.h>

#include "oracles.hpp"
#include "qrubin/qfun.hpp"
#include "qrubin/qops.hpp"
#include "qrubin/verify.hpp"

using namespace qrubin;

TEST_CASE("b_coeff examples") {
  const QContext ctx(0.5);
  CHECK(b_coeff(0, Complex(3.0), ctx) == Complex(1.0));
  CHECK(b_coeff(1, Complex(0.7, 0.2), ctx) == Complex(0.7, 0.2));
  CHECK(std::abs(b_coeff(2, Complex(1.0), ctx) - 1.0 / 6.0) < 1e-16);
  CHECK_THROWS_AS(b_coeff(-1, 1.0, ctx), DomainError);
  for (int n = 0; n < 20; ++n)
    CHECK(std::abs(b_coeff(n, Complex(1.3), ctx) - Complex(oracle::b(n, 1.3L, 0.5L))) <
          1e-15 * std::max(1.0, std::abs(b_coeff(n, Complex(1.3), ctx))));
}

TEST_CASE("q_cos, q_sin, q_exp examples") {
  const QContext ctx(0.5);
  CHECK(q_cos(Complex(0.0), ctx) == Complex(1.0));
  CHECK(q_sin(Complex(0.0), ctx) == Complex(0.0));
  CHECK(q_exp(Complex(0.0), ctx) == Complex(1.0));
  CHECK(q_cos(Complex(-0.7), ctx) == q_cos(Complex(0.7), ctx));
  CHECK(q_sin(Complex(-0.7), ctx) == -q_sin(Complex(0.7), ctx));
  CHECK(std::abs(q_cos(Complex(1.0), ctx) - Complex(oracle::cos(1.0L, 0.5L, 50))) < 1e-15);
  CHECK(std::abs(q_sin(Complex(1.0), ctx) - Complex(oracle::sin(1.0L, 0.5L, 50))) < 1e-15);
  const Complex x(0.5, 0.25), mi(0.0, -1.0);
  const Complex lhs = q_exp(x, ctx), rhs = q_cos(mi * x, ctx) + Complex(0, 1) * q_sin(mi * x, ctx);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
}

TEST_CASE("q_exp approaches e^x as q -> 1") {
  const Complex got = q_exp(Complex(1.0), QContext(0.99));
  CHECK(std::abs(got - std::exp(1.0)) < 0.05);
  // the gap itself, from the long-sum oracle
  CHECK(std::abs(got - Complex(oracle::exp(1.0L, 0.99L, 200))) < 1e-13);
}

TEST_CASE("series against long-sum oracles across q and complex arguments") {
  for (double q : {0.3, 0.5, 0.9}) {
    const QContext ctx(q);
    for (Complex x : {Complex(0.3), Complex(-2.0), Complex(1.0, 1.0), Complex(0.0, -3.0), Complex(5.0)}) {
      const oracle::CLD xl(x.real(), x.imag());
      const Complex c(oracle::cos(xl, q)), s(oracle::sin(xl, q)), e(oracle::exp(xl, q));
      CHECK(std::abs(q_cos(x, ctx) - c) <= 1e-13 * std::max(1.0, std::abs(c)));
      CHECK(std::abs(q_sin(x, ctx) - s) <= 1e-13 * std::max(1.0, std::abs(s)));
      CHECK(std::abs(q_exp(x, ctx) - e) <= 1e-13 * std::max(1.0, std::abs(e)));
    }
  }
}

TEST_CASE("derivative identities on the lattice") {
  for (double q : {0.5, 0.9}) {
    const QContext ctx(q);
    const QLattice lat = build_lattice(ctx, 0, resolvable_k_max(q));
    for (double lam : {0.5, 1.0, 2.0}) {
      const LatticeFn c = sample([&](double x) { return q_cos(Complex(lam * x), ctx); }, lat, Parity::even);
      const LatticeFn s = sample([&](double x) { return q_sin(Complex(lam * x), ctx); }, lat, Parity::odd);
      const LatticeFn e = sample([&](double x) { return q_exp(Complex(lam * x), ctx); }, lat);
      CHECK(c.parity() == Parity::even);
      CHECK(s.parity() == Parity::odd);
      for (int k = 1; k < lat.k_max(); ++k)
        for (int sg : {-1, 1}) {
          const LatticePoint p{sg, k};
          CHECK(std::abs(rubin_dq(c, p) + lam * s(p)) < 1e-8);
          CHECK(std::abs(rubin_dq(s, p) - lam * c(p)) < 1e-8);
          CHECK(std::abs(rubin_dq(e, p) - lam * e(p)) < 1e-8);
        }
    }
  }
}

TEST_CASE("below the resolvable rings e(x) loses its odd part to rounding") {
  const QContext ctx(0.5);
  const QLattice lat = build_lattice(ctx, 0, 60);
  const LatticeFn e = sample([&](double x) { return q_exp(Complex(x), ctx); }, lat);
  // x = 2^-55: 1 + x rounds to 1 and the difference quotient collapses
  CHECK(e({1, 55}) == Complex(1.0));
  CHECK(std::abs(rubin_dq(e, {1, 55}) - 1.0) > 0.1);
}

TEST_CASE("QSeries evaluation and term-wise Rubin derivative") {
  const QContext ctx(0.5);
  QSeries s{{1.0, 2.0, 3.0}, 10.0};
  CHECK(s.evaluate(2.0, ctx) == Complex(17.0));
  const QSeries d = rubin_derivative(s, ctx);
  REQUIRE(d.coefficients.size() == 2);
  CHECK(d.coefficients[0] == Complex(2.0));
  CHECK(d.coefficients[1] == Complex(3.0 * 6.0));
  // the derivative of the cosine series is minus the sine series
  QSeries cs;
  for (int n = 0; n < 40; ++n) cs.coefficients.push_back(n % 2 ? 0.0 : b_coeff(n, Complex(1.0), ctx) * (n % 4 ? -1.0 : 1.0));
  const QSeries dc = rubin_derivative(cs, ctx);
  for (double x : {0.3, -1.2, 2.0}) CHECK(std::abs(dc.evaluate(x, ctx) + q_sin(Complex(x), ctx)) < 1e-13);
}

TEST_CASE("terms decay: one step when (1-q)|x| < 1, two steps always") {
  const QContext ctx(0.5);
  auto b = [&](int n, double x) { return std::abs(b_coeff(n, Complex(x), ctx)); };
  for (int n = 4; n < 60; ++n) CHECK(b(n + 1, 1.5) < b(n, 1.5));
  for (int n = 10; n < 60; ++n) CHECK(b(n + 2, 10.0) < b(n, 10.0));
  // for (1-q)|x| >= 1 the odd steps grow forever: b_{2m+1}/b_{2m} = x/[2m+1] > (1-q)x
  for (int m = 5; m < 30; ++m) CHECK(b(2 * m + 1, 10.0) > b(2 * m, 10.0));
}
