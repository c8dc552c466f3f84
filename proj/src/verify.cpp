#include "qrubin/verify.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "qrubin/constcoef.hpp"
#include "qrubin/ivp.hpp"
#include "qrubin/qfun.hpp"
#include "qrubin/qint.hpp"
#include "qrubin/qops.hpp"
#include "qrubin/wronskian.hpp"

namespace qrubin {

int resolvable_k_max(double q) { return static_cast<int>(std::floor(std::log(1e-6 / (1.0 - q)) / std::log(q))); }

int deep_k_max(double q) { return static_cast<int>(std::ceil(std::log(1e-17) / std::log(q))) + 2; }

namespace {

using Checks = std::vector<CheckResult>;

void add(Checks& out, std::string name, double value, double tol) {
  out.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

// polynomial with fixed pseudo-random coefficients
std::function<Complex(double)> poly(const std::vector<double>& c) {
  return [c](double x) {
    Complex s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
  };
}

Checks symbols(const QContext& ctx) {
  Checks out;
  double worst = 0.0;
  for (Complex a : {Complex(0.3), Complex(1.0), Complex(2.0, 1.0)})
    for (int n = 0; n <= 6; ++n) {
      Complex s = 0.0;
      for (int k = 0; k <= n; ++k)
        s += q_binomial(n, k, ctx) * std::pow(ctx.q(), 0.5 * k * (k - 1)) * std::pow(a, k);
      worst = std::max(worst, rel(q_pochhammer(-a, n, ctx), s));
    }
  add(out, "q-binomial theorem", worst, 1e-12);

  worst = 0.0;
  for (int n = 0; n <= 8; ++n) {
    double direct = 1.0;  // [n]_{1/q}! through its defining product
    for (int m = 1; m <= n; ++m) direct *= (1.0 - std::pow(1.0 / ctx.q(), m)) / (1.0 - 1.0 / ctx.q());
    worst = std::max(worst, rel(direct, std::pow(ctx.q(), -0.5 * n * (n - 1)) * q_factorial(n, ctx)));
  }
  add(out, "[n]_{1/q}! = q^{-n(n-1)/2} [n]_q!", worst, 1e-12);

  worst = 0.0;
  for (int n = 0; n <= 12; ++n)
    worst = std::max(worst, rel(q_factorial(n, ctx), q_pochhammer(ctx.q(), n, ctx) / std::pow(1 - ctx.q(), n)));
  add(out, "[n]! = (q;q)_n/(1-q)^n", worst, 1e-12);

  worst = 0.0;
  for (int n = 0; n <= 10; ++n)
    for (int k = 0; k <= n; ++k) worst = std::max(worst, rel(q_binomial(n, k, ctx), q_binomial(n, n - k, ctx)));
  add(out, "binomial symmetry", worst, 1e-12);

  const QContext near_one(0.999);
  worst = 0.0;
  for (int n = 1; n <= 10; ++n) worst = std::max(worst, std::abs(q_bracket(n, near_one) - n) / n);
  add(out, "[n] -> n as q -> 1 (q = 0.999)", worst, 0.01);
  return out;
}

Checks ops(const QContext& ctx) {
  Checks out;
  const double q = ctx.q();
  const QLattice lat = build_lattice(ctx, -3, 12);
  double worst = 0.0;
  for (int m = 0; m <= 8; ++m) {
    const LatticeFn f = sample([m](double x) { return Complex(std::pow(x, m)); }, lat,
                               m % 2 ? Parity::odd : Parity::even);
    const double c = m == 0 ? 0.0 : (m % 2 ? 1.0 : std::pow(q, -m)) * q_bracket(m, ctx);
    for (int k = lat.k_min() + 1; k < lat.k_max(); ++k)
      for (int s : {-1, 1}) {
        const LatticePoint p{s, k};
        const double x = lat.x(p);
        const Complex want = m == 0 ? 0.0 : c * std::pow(x, m - 1);
        const Complex got = rubin_dq(f, p);
        worst = std::max(worst, m == 0 ? std::abs(got) : rel(got, want));
      }
  }
  add(out, "monomial law for dq x^m", worst, 1e-12);

  const LatticeFn g = sample(poly({0.7, -1.3, 0.4, 2.1, -0.6, 0.9, 0.25}), lat);
  // n-fold Jackson difference built by recursion over shifted points, with the
  // matching sum of absolute values as its rounding scale
  std::function<std::pair<Complex, double>(int, LatticePoint)> iter = [&](int j, LatticePoint x) {
    if (j == 0) return std::pair<Complex, double>{g(x), std::abs(g(x))};
    const auto a = iter(j - 1, x), b = iter(j - 1, x.inward());
    const double w = (1.0 - q) * std::abs(lat.x(x));
    return std::pair<Complex, double>{(a.first - b.first) / w, (a.second + b.second) / w};
  };
  worst = 0.0;
  for (int n = 1; n <= 4; ++n)
    for (int k = lat.k_min(); k + n <= lat.k_max(); ++k) {
      const auto [it, mag] = iter(n, {1, k});
      worst = std::max(worst, std::abs(jackson_dq_n(g, {1, k}, n) - it) / std::max(std::abs(it), mag));
    }
  add(out, "Jackson n-th derivative sum = iterate", worst, 1e-10);

  worst = 0.0;
  const double gmax = g.values().cwiseAbs().maxCoeff();
  for (int n = 1; n <= 4; ++n) {
    const LatticeFn d = rubin_dq_n(g, n);
    for (int k = lat.k_min() + n + 1; k <= 3; ++k)
      for (int s : {-1, 1}) {
        // each stencil application amplifies rounding by at most 2/((1-q)|x q^j|)
        double mag = gmax;
        for (int j = 0; j < n; ++j) mag *= 2.0 / ((1.0 - q) * lat.x({1, k + j}));
        const Complex ref = d({s, k});
        worst = std::max(worst, std::abs(rubin_via_parity(g, {s, k}, n) - ref) / std::max(std::abs(ref), 1e-6 * mag));
      }
  }
  add(out, "parity formula = iterated dq", worst, 1e-10);

  worst = 0.0;
  const LatticeFn lg = shift(g, ShiftDirection::forward), bg = shift(g, ShiftDirection::backward);
  const LatticeFn dg = rubin_dq(g);
  for (int k = lat.k_min() + 2; k <= lat.k_max() - 2; ++k)
    for (int s : {-1, 1}) {
      const LatticePoint p{s, k};
      worst = std::max(worst, rel(rubin_dq(lg, p), q * dg(p.inward())));
      worst = std::max(worst, rel(rubin_dq(bg, p), dg(p.outward()) / q));
    }
  add(out, "shift commutation", worst, 1e-12);

  worst = 0.0;
  const LatticeFn fe = sample(poly({1.0, 0.0, -0.5, 0.0, 0.25}), lat, Parity::even);
  const LatticeFn fe2 = sample(poly({-0.3, 0.0, 1.5}), lat, Parity::even);
  const LatticeFn fo = sample(poly({0.0, 1.0, 0.0, 0.7}), lat, Parity::odd);
  const LatticeFn fo2 = sample(poly({0.0, -2.0, 0.0, 0.0, 0.0, 0.3}), lat, Parity::odd);
  for (auto [a, b] : {std::pair{&fe, &fo}, {&fe, &fe2}, {&fo, &fo2}, {&fo, &fe}}) {
    const LatticeFn prod = (*a) * (*b);
    for (int k = lat.k_min() + 2; k <= lat.k_max() - 2; ++k)
      worst = std::max(worst, std::abs(rubin_product(*a, *b, {1, k}) - rubin_dq(prod, {1, k})) /
                                  std::max(1.0, rubin_dq_magnitude(prod, {1, k})));
  }
  add(out, "product rules", worst, 1e-10);

  worst = 0.0;
  for (int k = lat.k_min() + 1; k < lat.k_max(); ++k)
    for (int s : {-1, 1}) worst = std::max(worst, rel(jackson_dq(fo2, {s, k}), rubin_dq(fo2, {s, k})));
  add(out, "Jackson and Rubin agree on odd functions", worst, 1e-12);

  // |dq f - f'| <= C (1-q): C fitted at q = 0.9 and 0.99, the law checked at q = 0.999
  auto f5 = [](Complex x) { return 0.3 + x * (-1.0 + x * (0.5 + x * (2.0 + x * (-0.7 + 0.4 * x)))); };
  auto f5p = [](double x) { return -1.0 + x * (1.0 + x * (6.0 + x * (-2.8 + 2.0 * x))); };
  const std::vector<double> xs{0.25, 0.5, 1.0, -0.75};
  double C = 0.0;
  for (double qq : {0.9, 0.99})
    for (double x : xs) C = std::max(C, std::abs(rubin_dq_at(f5, Complex(x), qq) - f5p(x)) / (1.0 - qq));
  double ratio = 0.0;
  for (double x : xs) ratio = std::max(ratio, std::abs(rubin_dq_at(f5, Complex(x), 0.999) - f5p(x)) / (C * 1e-3));
  add(out, "q -> 1: error at 0.999 over fitted C (1-q)", ratio, 1.0);
  return out;
}

Checks integration(const QContext& ctx) {
  Checks out;
  const QLattice lat = build_lattice(ctx, -2, deep_k_max(ctx.q()));
  std::vector<LatticeFn> fs;
  fs.push_back(sample(poly({0, 0, 0, 1}), lat, Parity::odd));
  fs.push_back(sample(poly({0, 0, 1}), lat, Parity::even));
  fs.push_back(sample(poly({0.5, 0, -1, 0, 0.3, 0, 0.1}), lat, Parity::even));
  fs.push_back(sample(poly({0, 1.2, 0, -0.4, 0, 0.05}), lat, Parity::odd));
  fs.push_back(sample([&](double x) { return q_sin(Complex(x), ctx); }, lat, Parity::odd));
  fs.push_back(sample([&](double x) { return q_cos(Complex(x), ctx); }, lat, Parity::even));
  double worst = 0.0;
  for (const auto& f : fs) worst = std::max(worst, ftc_check(f).max());
  add(out, "fundamental theorems", worst, 1e-10);

  worst = 0.0;
  const LatticeFn t = fs[3], u = sample(poly({1, 0.5, -0.25, 0.1}), lat);
  for (int k = 0; k <= 4; ++k) {
    worst = std::max(worst, std::abs(ibp_residual(t, u, {1, k})));
    worst = std::max(worst, std::abs(ibp_residual(u, fs[2], {1, k})));
  }
  add(out, "integration by parts", worst, 1e-10);

  worst = 0.0;
  const LatticeFn lin = Complex(2.0, -1.0) * fs[2] + Complex(0.5) * u;
  for (int k = lat.k_min(); k <= 10; ++k)
    for (int s : {-1, 1}) {
      const LatticePoint p{s, k};
      worst = std::max(worst, rel(jackson_integral(lin, p), Complex(2.0, -1.0) * jackson_integral(fs[2], p) +
                                                                Complex(0.5) * jackson_integral(u, p)));
    }
  add(out, "linearity", worst, 1e-13);

  // whole line: compactly supported samples
  const QLattice box = build_lattice(ctx, -2, 14);
  auto bump = [&](double shift_c) {
    return [&box, shift_c](double x) {
      const double a = std::abs(x);
      return (a <= box.x({1, 2}) * 1.000001 && a >= box.x({1, 8}) * 0.999999) ? Complex(x * x * x + shift_c + x) : Complex(0.0);
    };
  };
  const LatticeFn bf = sample(bump(0.5), box), bg = sample(bump(-1.0), box);
  // the derivative is undefined on the edge rings; the support keeps clear of them
  auto inner = [&](const LatticeFn& h) { return restrict_rings(h, box.k_min() + 1, box.k_max() - 1); };
  const Complex l = improper_integral(inner(rubin_dq(bf) * bg), Domain::full_line);
  const Complex r = improper_integral(inner(bf * rubin_dq(bg)), Domain::full_line);
  add(out, "whole-line integration by parts", std::abs(l + r) / std::max(1.0, std::abs(l)), 1e-10);

  // q = 0.99 against the Riemann integral on [0,1], in units of 2 (1-q) max|f'|
  const QContext c99(0.99);
  const QLattice l99 = build_lattice(c99, 0, deep_k_max(0.99));
  const LatticeFn p4 = sample(poly({0.2, 1.0, -3.0, 0.5, 2.0}), l99);
  const double exact = 0.2 + 0.5 - 1.0 + 0.125 + 0.4;
  double dmax = 0.0;
  for (double x = 0.0; x <= 1.0; x += 1e-3) dmax = std::max(dmax, std::abs(1.0 - 6.0 * x + 1.5 * x * x + 8.0 * x * x * x));
  add(out, "q -> 1: Jackson vs Riemann on [0,1]", std::abs(jackson_integral(p4, {1, 0}) - exact) / (2 * 0.01 * dmax), 1.0);
  return out;
}

Checks functions(const QContext& ctx) {
  Checks out;
  const QLattice lat = build_lattice(ctx, 0, resolvable_k_max(ctx.q()));
  double worst = 0.0;
  for (double lam : {0.5, 1.0, 2.0}) {
    auto c = sample([&](double x) { return q_cos(Complex(lam * x), ctx); }, lat, Parity::even);
    auto s = sample([&](double x) { return q_sin(Complex(lam * x), ctx); }, lat, Parity::odd);
    auto e = sample([&](double x) { return q_exp(Complex(lam * x), ctx); }, lat);
    for (int k = 1; k < lat.k_max(); ++k)
      for (int sg : {-1, 1}) {
        const LatticePoint p{sg, k};
        worst = std::max(worst, std::abs(rubin_dq(c, p) + lam * s(p)));
        worst = std::max(worst, std::abs(rubin_dq(s, p) - lam * c(p)));
        worst = std::max(worst, std::abs(rubin_dq(e, p) - lam * e(p)));
      }
  }
  add(out, "derivative identities of cos, sin, e", worst, 1e-8);

  worst = 0.0;
  for (Complex x : {Complex(0.5, 0.25), Complex(-1.0, 0.3), Complex(2.0, 0.0)}) {
    const Complex mi(0.0, -1.0);
    worst = std::max(worst, rel(q_exp(x, ctx), q_cos(mi * x, ctx) + Complex(0, 1) * q_sin(mi * x, ctx)));
  }
  add(out, "e(x) = cos(-ix) + i sin(-ix)", worst, 1e-12);

  const LatticeFn c = sample([&](double x) { return q_cos(Complex(x), ctx); }, lat, Parity::even);
  const LatticeFn s = sample([&](double x) { return q_sin(Complex(x), ctx); }, lat, Parity::odd);
  add(out, "cos even, sin odd", std::max(c.parity_defect(Parity::even), s.parity_defect(Parity::odd)), 1e-12);

  // |b_n(x)| strictly decreasing from some n on. Since [n] < 1/(1-q), the odd steps
  // x/[2m+1] only fall below 1 when (1-q)|x| < 1; the two-step ratio always decays.
  auto count_violations = [&](double x, int step) {
    auto b = [&](int n) { return std::abs(b_coeff(n, Complex(x), ctx)); };
    int n = 0, bad = 0;
    // both step ratios shrink with n, so two consecutive decreases start the tail
    while (n < 400 && !(b(n + step) < b(n) && b(n + 2 * step) < b(n + step))) ++n;
    for (; b(n) > ctx.series_tol() * 1e-3 && n < 400; ++n) bad += b(n + step) >= b(n);
    return static_cast<double>(bad);
  };
  double violations = 0.0;
  for (double x : {0.25, 0.5, 0.99 / (1.0 - ctx.q())}) violations += count_violations(x, 1);
  add(out, "b_n terms eventually decreasing, (1-q)|x| < 1", violations, 0.0);
  violations = 0.0;
  for (double x : {0.5, 3.0, 10.0}) violations += count_violations(x, 2);
  add(out, "b_{n+2} < b_n eventually, any x", violations, 0.0);
  return out;
}

Checks ivp_suite(const QContext& ctx) {
  Checks out;
  const QLattice lat = build_lattice(ctx, 0, deep_k_max(ctx.q()));
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
  FirstOrderProblem p{[](double, const Eigen::VectorXcd& y) { return y; }, {}, one,
                      RegionSpec{1.0, 1.0, 0.9, one}, {Parity::general}, lat};
  const Solution se = solve_first_order(p, 1e-14, 200);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < se.y().lattice().size(); ++i)
    worst = std::max(worst, std::abs(se.y()[i] - q_exp(Complex(se.y().lattice().points()[i]), ctx)));
  add(out, "dq y = y gives e(x)", worst, 1e-8);
  add(out, "integral characterization", se.integral_residual, 1e-10);

  const SecondOrderSpec s = constcoef_spec(1.0, 1.0, lat);
  const SecondOrderSolution sol = solve_second_order_linear(s, 1e-14);
  worst = 0.0;
  const QLattice& w = sol.even.y().lattice();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const Complex x = w.points()[i];
    worst = std::max(worst, std::abs(sol.even.y()[i] - q_cos(x, ctx)));
    worst = std::max(worst, std::abs(sol.odd.y()[i] - q_sin(x, ctx)));
  }
  add(out, "cos and sin from the solver", worst, 1e-8);
  add(out, "contraction certificate", sol.even.contraction_certified && sol.odd.contraction_certified && se.contraction_certified ? 0.0 : 1.0, 0.0);
  add(out, "equation residual", std::max(sol.even.residual, sol.odd.residual), 1e-10);

  const LatticeFn mix = Complex(2.0) * sol.even.y() + Complex(-3.0) * sol.even.y().with_parity(Parity::even);
  add(out, "superposition", equation_residual(s, mix), 5.0 * sol.even.residual + 1e-14);
  add(out, "identity initial data gives a fundamental pair", is_fundamental(sol.even.y(), sol.odd.y()) ? 0.0 : 1.0, 0.0);
  return out;
}

Checks wronskian_suite(const QContext& ctx) {
  Checks out;
  const QLattice lat = build_lattice(ctx, -2, 80);
  const LatticeFn c = sample([&](double x) { return q_cos(Complex(x), ctx); }, lat, Parity::even);
  const LatticeFn s = sample([&](double x) { return q_sin(Complex(x), ctx); }, lat, Parity::odd);
  const LatticeFn e2 = sample(poly({1.0, 0.0, 0.3, 0.0, -0.2}), lat, Parity::even);
  const LatticeFn o2 = sample(poly({0.0, 1.0, 0.0, -0.4}), lat, Parity::odd);
  const std::vector<std::pair<const LatticeFn*, const LatticeFn*>> pairs{{&c, &s}, {&s, &o2}, {&c, &e2}, {&o2, &c}};
  double disp = 0.0, anti = 0.0, par = 0.0;
  for (auto [a, b] : pairs) {
    for (int k = lat.k_min() + 1; k <= 20; ++k)
      for (int sg : {-1, 1}) {
        const LatticePoint p{sg, k};
        disp = std::max(disp, std::abs(wq(*a, *b, p) - wq_ratio_form(*a, *b, p)) /
                                  std::max(1.0, wq_magnitude(*a, *b, p)));
        anti = std::max(anti, std::abs(wq(*a, *b, p) + wq(*b, *a, p)));
      }
    const LatticeFn W = wronskian(*a, *b);
    par = std::max(par, W.parity_defect(W.parity()) * (W.values().cwiseAbs().maxCoeff() > 0));
  }
  add(out, "dispatch = ratio form", disp, 1e-10);
  add(out, "antisymmetry", anti, 1e-14);
  add(out, "parity of W", par, 1e-10);

  const char* names[] = {"closed-form dq W (even, odd)", "closed-form dq W (odd, odd)",
                         "closed-form dq W (even, even)"};
  int idx = 0;
  for (auto [a, b] : {std::pair{&c, &s}, {&s, &o2}, {&c, &e2}}) {
    const LatticeFn W = wronskian(*a, *b);
    const LatticeFn dW = rubin_dq(W);
    // rounding scale of W: its term magnitudes, carried through the stencil
    Eigen::VectorXcd m(lat.size());
    for (Eigen::Index i = 0; i < lat.size(); ++i) {
      const LatticePoint p = lat.point_at(i);
      m[i] = p.is_zero() || !a->has(p.inward()) ? missing() : Complex(wq_magnitude(*a, *b, p));
    }
    const LatticeFn M(lat, m, Parity::even);
    double worst = 0.0;
    for (int k = lat.k_min() + 3; k <= 12; ++k) {
      const Complex ref = dW({1, k});
      worst = std::max(worst, std::abs(dq_wq(*a, *b, {1, k}) - ref) /
                                  std::max(std::abs(ref), rubin_dq_magnitude(M, {1, k})));
    }
    add(out, names[idx++], worst, 1e-8);
  }

  const SecondOrderSpec sp{[](double) { return Complex(1.0); }, [](double) { return Complex(1.0); },
                           [](double) { return Complex(0.0); }, {}, 1.0, 0.0, lat};
  double worst = 0.0;
  for (int k = 0; k <= 6; ++k) {
    const double x = lat.x({1, k});
    const int n = deep_k_max(ctx.q());
    Complex unrolled = 1.0;
    double xk = x;
    for (int j = 0; j < n; ++j, xk *= ctx.q()) unrolled /= 1.0 + xk * (1.0 - ctx.q()) * abel_E(sp, xk);
    worst = std::max(worst, std::abs(liouville_wq(sp, 1.0, x, n) - unrolled));
  }
  add(out, "Liouville product = unrolled recurrence", worst, 1e-12);
  return out;
}

Checks constcoef_suite(const QContext& ctx) {
  Checks out;
  double worst = 0.0;
  for (Parity p : {Parity::even, Parity::odd}) {
    const QSeries a = series_solution(1.0, 1.0, p, 27, ctx), b = series_closed_form(1.0, 1.0, p, 27, ctx);
    for (std::size_t n = 0; n < a.coefficients.size(); ++n)
      if (b.coefficients[n] != Complex(0.0)) worst = std::max(worst, rel(a.coefficients[n], b.coefficients[n]));
  }
  add(out, "recurrence = closed form", worst, 1e-12);

  worst = 0.0;
  const Complex a = ctx.q(), bb = 1.0;
  const int nc = default_num_coeffs(a, bb, 4.0, ctx);
  for (Parity p : {Parity::even, Parity::odd}) {
    const QSeries y = series_solution(a, bb, p, nc, ctx);
    const QSeries d2 = rubin_derivative(rubin_derivative(y, ctx), ctx);
    for (double x : {0.1, 0.5, 1.0, -0.75})
      worst = std::max(worst, std::abs(a * d2.evaluate(x, ctx) + bb * y.evaluate(x, ctx)));
  }
  add(out, "series solve a dq^2 y + b y = 0", worst, 10 * ctx.series_tol() * 10);

  const QLattice lat = build_lattice(ctx, -1, deep_k_max(ctx.q()));
  const SecondOrderSpec sh = constcoef_shifted_spec(a, bb, lat);
  worst = 0.0;
  for (Eigen::Index i = 0; i < lat.size(); ++i) worst = std::max(worst, std::abs(abel_E(sh, lat.points()[i])));
  add(out, "E = 0 for the rewritten coefficients", worst, 0.0);

  const ClosedFormPair pr = closed_form_pair(a, bb, ctx);
  const LatticeFn y1 = sample([&](double x) { return pr.y1(x); }, lat, Parity::even);
  const LatticeFn y2 = sample([&](double x) { return pr.y2(x); }, lat, Parity::odd);
  add(out, "rewritten form (even)", rewritten_form_residual(a, bb, y1), 1e-8);
  add(out, "rewritten form (odd)", rewritten_form_residual(a, bb, y2), 1e-8);

  const SecondOrderSolution sol = solve_second_order_linear(constcoef_spec(a, bb, lat), 1e-14);
  worst = 0.0;
  const QLattice& w = sol.even.y().lattice();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    worst = std::max(worst, std::abs(sol.even.y()[i] - pr.y1(w.points()[i])));
    worst = std::max(worst, std::abs(sol.odd.y()[i] - pr.y2(w.points()[i])));
  }
  add(out, "closed form = Picard solution", worst, 1e-6);

  worst = 0.0;
  for (Complex ratio : {Complex(-1.0), Complex(2.0, 1.0), Complex(0.25)}) {
    const Complex lam = std::sqrt(ratio);
    for (double x : {0.3, -0.8, 1.5}) {
      worst = std::max(worst, std::abs(q_cos(lam * x, ctx) - q_cos(-lam * x, ctx)));
      worst = std::max(worst, std::abs(q_sin(lam * x, ctx) / lam - q_sin(-lam * x, ctx) / (-lam)));
    }
  }
  add(out, "square-root branch does not matter", worst, 1e-14);
  return out;
}

const std::map<std::string, std::function<Checks(const QContext&)>>& registry() {
  static const std::map<std::string, std::function<Checks(const QContext&)>> r{
      {"symbols", symbols},       {"ops", ops},
      {"int", integration},       {"fun", functions},
      {"ivp", ivp_suite},         {"wronskian", wronskian_suite},
      {"constcoef", constcoef_suite}};
  return r;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> n{"symbols", "ops", "int", "fun", "ivp", "wronskian", "constcoef", "all"};
  return n;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, const QContext& ctx) {
  if (suite == "all") {
    Checks all;
    for (const auto& name : verify_suite_names()) {
      if (name == "all") continue;
      for (auto& c : registry().at(name)(ctx)) {
        c.name = name + ": " + c.name;
        all.push_back(std::move(c));
      }
    }
    return all;
  }
  const auto it = registry().find(suite);
  if (it == registry().end()) throw DomainError("unknown suite '" + suite + "'");
  return it->second(ctx);
}

}  // namespace qrubin
