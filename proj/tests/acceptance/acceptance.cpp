// Acceptance run: one line per criterion, exit 0 iff every selected criterion passes.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrubin/coeff_expr.hpp"
#include "qrubin/constcoef.hpp"
#include "qrubin/ivp.hpp"
#include "qrubin/qfun.hpp"
#include "qrubin/qint.hpp"
#include "qrubin/qops.hpp"
#include "qrubin/qsymbols.hpp"
#include "qrubin/verify.hpp"
#include "qrubin/wronskian.hpp"

using namespace qrubin;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

LatticeFn monomial(const QLattice& lat, int m) {
  return sample([m](double x) { return Complex(std::pow(x, m)); }, lat, m % 2 ? Parity::odd : Parity::even);
}

LatticeFn poly(const QLattice& lat, const std::vector<double>& c, Parity p = Parity::general) {
  return sample(
      [c](double x) {
        double s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
        return Complex(s);
      },
      lat, p);
}

Coefficient constant(Complex c) {
  return [c](double) { return c; };
}

/// eps / ((1-q)|x|) <= 1e-10: points where a difference quotient keeps ten digits.
bool resolvable(const QLattice& lat, const LatticePoint& p) {
  return !p.is_zero() &&
         std::numeric_limits<double>::epsilon() / ((1.0 - lat.q()) * std::abs(lat.x(p))) <= 1e-10;
}

// 1. rubin_dq(x^m) = d(m) x^{m-1}, and the five-point value agrees with the parity form
Outcome criterion_1() {
  double worst = 0.0;
  for (double q : {0.3, 0.5, 0.9}) {
    const QLattice lat = build_lattice(QContext(q), -6, 10);
    for (int m = 0; m <= 8; ++m) {
      const LatticeFn f = monomial(lat, m);
      double bracket = 0.0;  // [m] = 1 + q + ... + q^{m-1}
      for (int j = 0; j < m; ++j) bracket += std::pow(q, j);
      const double d = (m % 2 ? 1.0 : std::pow(q, -m)) * bracket;
      for (int k = -5; k <= 9; ++k)
        for (int s : {-1, 1}) {
          const LatticePoint p{s, k};
          const double x = lat.x(p);
          const double law = m == 0 ? 0.0 : d * std::pow(x, m - 1);
          const Complex five = rubin_dq(f, p), par = rubin_via_parity(f, p, 1);
          const double scale = std::max(1.0, std::abs(law));
          worst = std::max({worst, std::abs(five - law) / scale, std::abs(par - law) / scale});
        }
    }
  }
  return {worst <= 1e-12, "max relative deviation " + fmt(worst) + " (tol 1e-12)"};
}

// 2. parity formula against the iterated operator on random degree-8 polynomials
Outcome criterion_2() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const QLattice lat = build_lattice(QContext(0.5), -6, 10);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(9);
    for (double& v : c) v = u(rng);
    const LatticeFn g = poly(lat, c);
    for (int n = 1; n <= 4; ++n) {
      const LatticeFn d = rubin_dq_n(g, n);
      // |x| >= 1/4: the n-fold quotient has not yet eaten the double precision budget
      for (int k = -6 + n; k <= 2; ++k)
        for (int s : {-1, 1}) {
          const Complex a = rubin_via_parity(g, {s, k}, n), b = d({s, k});
          worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
        }
    }
  }
  return {worst <= 1e-10, "max relative deviation " + fmt(worst) + " over |x| >= 1/4 (tol 1e-10)"};
}

// 3. derivative identities of cos, sin, e on |x| <= 1 at q = 0.5
Outcome criterion_3() {
  const double q = 0.5;
  const QContext ctx(q);
  const QLattice lat = build_lattice(ctx, 0, resolvable_k_max(q));
  double worst = 0.0;
  for (double lam : {0.5, 1.0, 2.0}) {
    const LatticeFn c = sample([&](double x) { return q_cos(Complex(lam * x), ctx); }, lat, Parity::even);
    const LatticeFn s = sample([&](double x) { return q_sin(Complex(lam * x), ctx); }, lat, Parity::odd);
    const LatticeFn e = sample([&](double x) { return q_exp(Complex(lam * x), ctx); }, lat);
    for (int k = 1; k < lat.k_max(); ++k)
      for (int sg : {-1, 1}) {
        const LatticePoint p{sg, k};
        worst = std::max({worst, std::abs(rubin_dq(c, p) + lam * s(p)), std::abs(rubin_dq(s, p) - lam * c(p)),
                          std::abs(rubin_dq(e, p) - lam * e(p))});
      }
  }
  return {worst < 1e-8, "max |residual| " + fmt(worst) + " on rings 1.." + std::to_string(lat.k_max() - 1) +
                            " (tol 1e-8)"};
}

// 4. fundamental theorems and integration by parts at q = 0.5
Outcome criterion_4() {
  const QContext ctx(0.5);
  const QLattice lat = build_lattice(ctx, -2, deep_k_max(0.5));
  std::vector<LatticeFn> fns;
  for (int m = 0; m <= 6; ++m) fns.push_back(monomial(lat, m));
  fns.push_back(poly(lat, {0.5, 0, -1, 0, 0.3, 0, 0.1}, Parity::even));
  fns.push_back(poly(lat, {0, 2, 0, -0.7, 0, 0.2}, Parity::odd));
  fns.push_back(sample([&](double x) { return q_sin(Complex(x), ctx); }, lat, Parity::odd));
  fns.push_back(sample([&](double x) { return q_cos(Complex(x), ctx); }, lat, Parity::even));
  double ftc = 0.0, ibp = 0.0;
  for (const LatticeFn& f : fns) ftc = std::max(ftc, ftc_check(f).max());
  const LatticeFn mixed = poly(lat, {1, -0.5, 0.25, 0.1, -0.3, 0.05, 0.02});
  fns.push_back(mixed);
  for (const LatticeFn& f : fns)
    for (const LatticeFn& g : fns)
      for (int k = -1; k <= 4; ++k) ibp = std::max(ibp, std::abs(ibp_residual(f, g, {1, k})));
  return {ftc < 1e-10 && ibp < 1e-10, "ftc " + fmt(ftc) + ", ibp " + fmt(ibp) + " (tol 1e-10)"};
}

// 5. Picard reproduces the constant-coefficient examples
Outcome criterion_5() {
  double worst = 0.0;
  bool certified = true;
  for (double q : {0.3, 0.5, 0.9}) {
    const QContext ctx(q);
    const QLattice lat = build_lattice(ctx, 0, deep_k_max(q));
    // a0 = 1/q: dq^2 y + y = 0 (cos, sin); a0 = 1: q dq^2 y + y = 0 (cos(x/sqrt q), sqrt q sin(x/sqrt q))
    for (double a0 : {1.0 / q, 1.0}) {
      const SecondOrderSpec s{constant(a0), constant(0.0), constant(1.0), constant(0.0), 1.0, 0.0, lat};
      const SecondOrderSolution sol = solve_second_order_linear(s, 1e-14);
      certified = certified && sol.even.contraction_certified && sol.odd.contraction_certified &&
                  sol.combined.contraction_certified;
      const double l = 1.0 / std::sqrt(q * a0);
      const QLattice& w = sol.even.y().lattice();
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double x = w.points()[i];
        worst = std::max({worst, std::abs(sol.even.y()[i] - q_cos(Complex(l * x), ctx)),
                          std::abs(sol.odd.y()[i] - q_sin(Complex(l * x), ctx) / l)});
      }
    }
  }
  return {worst < 1e-8 && certified,
          "sup deviation " + fmt(worst) + " (tol 1e-8), contraction certificate " + (certified ? "held" : "broken")};
}

// 6. W of the closed-form pairs equals 1 on the lattice
Outcome criterion_6() {
  double worst = 0.0, where = 0.0;
  for (double q : {0.3, 0.5, 0.9}) {
    const QContext ctx(q);
    const QLattice lat = build_lattice(ctx, 0, resolvable_k_max(q));
    for (Complex a : {Complex(1.0), Complex(q)}) {
      const ClosedFormPair pr = closed_form_pair(a, 1.0, ctx);
      const LatticeFn y1 = sample([&](double x) { return pr.y1(x); }, lat, Parity::even);
      const LatticeFn y2 = sample([&](double x) { return pr.y2(x); }, lat, Parity::odd);
      const LatticeFn W = wronskian(y1, y2);
      for (Eigen::Index i = 0; i < lat.size(); ++i)
        if (W.has(lat.point_at(i)) && std::abs(W[i] - 1.0) > worst) {
          worst = std::abs(W[i] - 1.0);
          where = lat.points()[i];
        }
    }
  }
  return {worst <= 1e-8, "max |W - 1| " + fmt(worst) + " at x = " + fmt(where) + " (tol 1e-8)"};
}

// 7. one-step recurrence and Liouville product on solver-produced pairs
Outcome criterion_7() {
  const double q = 0.5;
  const QLattice lat = build_lattice(QContext(q), 0, deep_k_max(q));
  const std::vector<std::pair<std::string, Coefficient>> a1s{
      {"0", constant(0.0)}, {"1", constant(1.0)}, {"x(1-q)", [q](double x) { return Complex(x * (1.0 - q)); }}};
  std::string detail;
  bool ok = true;
  for (const auto& [name, a1] : a1s) {
    const SecondOrderSpec s{constant(1.0), a1, constant(1.0), constant(0.0), 1.0, 0.0, lat};
    const SecondOrderSolution sol = solve_second_order_linear(s, 1e-14);
    const LatticeFn W = wronskian(sol.even.y(), sol.odd.y());
    const QLattice& w = W.lattice();
    const Complex w0 = W[w.zero_index()];
    double rec = 0.0, liou = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const LatticePoint p = w.point_at(i);
      if (!resolvable(w, p) || !W.has(p)) continue;
      const double x = w.x(p);
      const double scale = std::max(1.0, std::abs(W(p)));
      if (W.has(p.inward()) && resolvable(w, p.inward()))
        rec = std::max(rec, std::abs(W(p.inward()) - (1.0 + x * (1.0 - q) * abel_E(s, x)) * W(p)) / scale);
      liou = std::max(liou, std::abs(W(p) / w0 - liouville_wq(s, 1.0, x)));
    }
    ok = ok && rec <= 1e-6 && liou <= 1e-6;
    detail += (detail.empty() ? "" : "; ") + std::string("a1=") + name + ": recurrence " + fmt(rec) +
              ", Liouville " + fmt(liou);
  }
  return {ok, detail + " (tol 1e-6)"};
}

// 8. recurrence coefficients against the closed forms
Outcome criterion_8() {
  double worst = 0.0;
  for (double q : {0.3, 0.5, 0.9}) {
    const QContext ctx(q);
    for (Complex r : {Complex(1.0), Complex(1.0 / q), Complex(-2.0), Complex(0.5, 1.5)})
      for (Parity par : {Parity::even, Parity::odd}) {
        const QSeries a = series_solution(1.0, r, par, 26, ctx), b = series_closed_form(1.0, r, par, 26, ctx);
        for (int p = 0; p <= 12; ++p) {
          const int n = par == Parity::even ? 2 * p : 2 * p + 1;
          worst = std::max(worst, std::abs(a.coefficients[n] - b.coefficients[n]) / std::abs(b.coefficients[n]));
        }
      }
  }
  return {worst <= 1e-12, "max relative deviation " + fmt(worst) + " (tol 1e-12)"};
}

// 9. |dq f - f'| at x = 0.5 for f = x^3 + x, q = 0.9 against q = 0.99
Outcome criterion_9() {
  auto err = [](double q) {
    const QLattice lat = build_lattice(QContext(q), -2, 4, 0.5);
    const LatticeFn f = poly(lat, {0, 1, 0, 1}, Parity::odd);
    return std::abs(rubin_dq(f, {1, 0}) - (3 * 0.25 + 1));
  };
  const double e1 = err(0.9), e2 = err(0.99), ratio = e1 / e2;
  return {ratio >= 8 && ratio <= 12,
          "error " + fmt(e1) + " -> " + fmt(e2) + ", shrink factor " + fmt(ratio) + " (want [8, 12])"};
}

// 10. det(b_ij) and the never-zero W criterion agree
Outcome criterion_10() {
  const double q = 0.5;
  const QLattice lat = build_lattice(QContext(q), 0, deep_k_max(q));
  const std::vector<SecondOrderSpec> specs{
      {constant(1.0 / q), constant(0.0), constant(1.0), constant(0.0), 1.0, 0.0, lat},
      {constant(1.0), [](double x) { return Complex(0.5 * x); }, constant(1.0), constant(0.0), 1.0, 0.0, lat},
      {constant(1.0), constant(0.0), [](double x) { return Complex(1.0 + x * x); }, constant(0.0), 1.0, 0.0, lat},
      {constant(1.0), constant(1.0), constant(1.0), constant(0.0), 1.0, 0.0, lat}};
  const std::vector<std::array<double, 4>> mats{{1, 0, 0, 1}, {1, 1, 1, -1}, {2, 0.5, -1, 3},
                                               {1, 2, 2, 4},  {1, 0, 3, 0},  {0, 1, 0, -2}};
  int cases = 0, agree = 0;
  for (const SecondOrderSpec& s : specs) {
    const SecondOrderSolution sol = solve_second_order_linear(s, 1e-14);
    const LatticeFn& e = sol.even.y();
    const LatticeFn& o = sol.odd.y();
    for (const auto& m : mats) {
      const LatticeFn y1 = m[0] * e + m[1] * o, y2 = m[2] * e + m[3] * o;
      const bool det = m[0] * m[3] - m[1] * m[2] != 0.0;
      const WronskianReport r = wronskian_report(s, y1, y2);
      ++cases;
      agree += r.fundamental == det && r.never_zero == det;
    }
  }
  return {agree == cases, std::to_string(agree) + "/" + std::to_string(cases) + " pairs agree"};
}

// 11. the CLI run is deterministic and equals the library call
std::string run_cli(const std::string& args, int& code) {
  FILE* p = ::popen((std::string(QCALC_EXE) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) {
    code = -1;
    return {};
  }
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  code = ::pclose(p);
  return out;
}

Outcome criterion_11() {
  const std::string args = "solve --q 0.5 --a0 \"1/q\" --a1 0 --a2 1 --b 0 --b1 1 --b2 0";
  int c1 = 0, c2 = 0;
  const std::string out1 = run_cli(args, c1), out2 = run_cli(args, c2);
  if (c1 != 0 || c2 != 0) return {false, "qcalc exited with status " + std::to_string(c1)};

  // the same solve through the library, with the CLI defaults
  const double q = 0.5;
  const QContext ctx(q);
  auto coeff = [&](const char* text) -> Coefficient {
    const CoeffExpr e = CoeffExpr::parse(text, q);
    return [e](double x) { return e(x); };
  };
  const SecondOrderSpec s{coeff("1/q"), coeff("0"), coeff("1"), coeff("0"), 1.0, 0.0,
                          build_lattice(ctx, 0, deep_k_max(q))};
  const SecondOrderSolution sol = solve_second_order_linear(s, 1e-10, 500);
  const LatticeFn& y = sol.combined.y();
  const LatticeFn& dy = sol.combined.dy();
  const Eigen::VectorXd res = equation_residual_profile(s, y);

  std::stringstream ss(out1);
  std::string line;
  std::getline(ss, line);
  Eigen::Index i = 0, mismatches = 0;
  for (; std::getline(ss, line); ++i) {
    if (i >= y.lattice().size()) return {false, "CLI printed more rows than the library window"};
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    const LatticePoint p = y.lattice().point_at(i);
    const std::string k = p.is_zero() ? "zero" : std::to_string(p.k);
    const double lib[6] = {y.lattice().points()[i], y[i].real(), y[i].imag(), dy[i].real(), dy[i].imag(), res[i]};
    bool same = cells.size() == 7 && cells[0] == k;
    for (int j = 0; same && j < 6; ++j) {
      const double v = std::strtod(cells[j + 1].c_str(), nullptr);
      same = std::isnan(lib[j]) ? std::isnan(v) : v == lib[j];
    }
    mismatches += !same;
  }
  const bool identical = out1 == out2;
  const bool ok = identical && mismatches == 0 && i == y.lattice().size();
  return {ok, std::string(identical ? "byte-identical" : "outputs differ") + ", " + std::to_string(i) +
                  " rows, " + std::to_string(mismatches) + " differ from the library"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"operator exactness on monomials", criterion_1},
    {"parity formula equals iterated operator", criterion_2},
    {"derivative identities of cos, sin, e", criterion_3},
    {"fundamental theorems and integration by parts", criterion_4},
    {"Picard solver reproduces cos and sin", criterion_5},
    {"q-Wronskian of the closed-form pairs equals 1", criterion_6},
    {"Abel recurrence and Liouville product", criterion_7},
    {"series recurrence equals closed form", criterion_8},
    {"first-order convergence as q -> 1", criterion_9},
    {"fundamental-set detection", criterion_10},
    {"CLI determinism", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  // the a1 = 1 specs break parity on purpose; their warnings would split the report lines
  set_warning_handler([](const std::string&) {});

  bool all = true;
  for (std::size_t n = 1; n <= kCriteria.size(); ++n) {
    if (only != 0 && static_cast<std::size_t>(only) != n) continue;
    const auto& [name, run] = kCriteria[n - 1];
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all = all && o.passed;
    std::cout << (o.passed ? "[PASS] " : "[FAIL] ") << n << " " << name << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
