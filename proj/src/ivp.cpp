#include "qrubin/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "qrubin/qint.hpp"
#include "qrubin/qops.hpp"

namespace qrubin {

void RegionSpec::validate() const {
  if (!(alpha > 0.0)) throw DomainError("region alpha must be positive");
  if (!(beta > 0.0)) throw DomainError("region beta must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("region rho must lie in [0, 1)");
}

double contraction_radius(double L, double M, const RegionSpec& region) {
  if (!(L > 0.0)) throw DomainError("contraction_radius needs L > 0");
  if (M < 0.0) throw DomainError("contraction_radius needs M >= 0");
  region.validate();
  return std::min({region.alpha, region.beta / (L * region.beta + M), region.rho / L});
}

LipschitzEstimate estimate_lipschitz(const PointwiseRhs& f, const RegionSpec& region, int samples,
                                     std::uint64_t seed) {
  if (samples < 2) throw DomainError("estimate_lipschitz needs at least 2 samples");
  region.validate();
  const Eigen::Index d = region.y0.size();
  if (d == 0) throw DomainError("estimate_lipschitz: empty state vector");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0), unit(0.0, 1.0);
  auto ball_point = [&]() {
    Eigen::VectorXcd u(d);
    do {
      for (Eigen::Index c = 0; c < d; ++c) u[c] = Complex(sym(rng), sym(rng));
    } while (u.lpNorm<1>() == 0.0);
    return Eigen::VectorXcd(region.y0 + (region.beta * unit(rng) / u.lpNorm<1>()) * u);
  };
  auto eval = [&](double x, const Eigen::VectorXcd& y) {
    try {
      return Eigen::VectorXcd(f(x, y));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError(std::string("right-hand side failed: ") + e.what());
    }
  };
  LipschitzEstimate est{0.0, 0.0};
  for (int s = 0; s < samples; ++s) {
    const double x = region.alpha * sym(rng);
    const Eigen::VectorXcd y1 = ball_point(), y2 = ball_point();
    const Eigen::VectorXcd f1 = eval(x, y1), f2 = eval(x, y2);
    est.M = std::max({est.M, f1.lpNorm<1>(), f2.lpNorm<1>()});
    const double dy = (y1 - y2).lpNorm<1>();
    if (dy > 0.0) est.L = std::max(est.L, (f1 - f2).lpNorm<1>() / dy);
  }
  if (!std::isfinite(est.L) || !std::isfinite(est.M))
    throw EvaluationError("right-hand side is not finite on the region");
  return est;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

LatticeRhs pointwise_on_lattice(const PointwiseRhs& f) {
  return [f](const QLattice& w, const Eigen::MatrixXcd& Y) {
    Eigen::MatrixXcd F(Y.rows(), Y.cols());
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      const Eigen::VectorXcd fi = f(w.points()[i], Y.row(i).transpose());
      if (fi.size() != Y.cols()) throw DomainError("right-hand side returned the wrong dimension");
      F.row(i) = fi.transpose();
    }
    return F;
  };
}

LatticeRhs effective_rhs(const FirstOrderProblem& p) {
  return p.lattice_f ? p.lattice_f : pointwise_on_lattice(p.f);
}

// T Y = y0 + int_0^x F_e + int_0^{qx} F_o, accumulated inward-out along each ray
Eigen::MatrixXcd apply_picard(const QLattice& w, const Eigen::MatrixXcd& F,
                              const Eigen::VectorXcd& y0) {
  const double q = w.q(), tol = w.context().series_tol();
  const Eigen::MatrixXcd Fe = 0.5 * (F + F.colwise().reverse());
  const Eigen::MatrixXcd Fo = F - Fe;
  Eigen::MatrixXcd T(F.rows(), F.cols());
  T.row(w.zero_index()) = y0.transpose();
  for (int sign : {-1, 1}) {
    const Eigen::Index inner = w.index({sign, w.k_max()});
    const double w_inner = (1.0 - q) * std::abs(w.points()[inner]);
    if (w_inner * F.row(inner).lpNorm<1>() * q / (1.0 - q) >= tol)
      throw TailNotNegligible("Picard integral tail beyond the innermost ring exceeds series_tol; "
                              "deepen the window");
    Eigen::RowVectorXcd se = Eigen::RowVectorXcd::Zero(F.cols());
    Eigen::RowVectorXcd so_inner = Eigen::RowVectorXcd::Zero(F.cols());
    for (int k = w.k_max(); k >= w.k_min(); --k) {
      const Eigen::Index i = w.index({sign, k});
      const double wt = (1.0 - q) * std::abs(w.points()[i]);
      se += wt * Fe.row(i);
      T.row(i) = y0.transpose() + double(sign) * (se + so_inner);
      so_inner += wt * Fo.row(i);
    }
  }
  return T;
}

double sup_l1(const Eigen::MatrixXcd& D) {
  return D.rows() ? D.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
}

Parity checked_parity(const LatticeFn& f, Parity declared, int component) {
  if (declared == Parity::general) return declared;
  if (f.parity_defect(declared) > 1e-10) {
    warn("solution component " + std::to_string(component) + " is not " + to_string(declared) +
         "; reported as general");
    return Parity::general;
  }
  return declared;
}

bool interior(const QLattice& w, const LatticePoint& p) {
  return !p.is_zero() && w.contains(p.outward()) && w.contains(p.inward());
}

}  // namespace

std::vector<LatticeFn> picard_step(const LatticeRhs& f, const std::vector<LatticeFn>& y,
                                   const Eigen::VectorXcd& y0) {
  if (y.empty() || static_cast<Eigen::Index>(y.size()) != y0.size())
    throw DomainError("picard_step: state and initial value dimensions differ");
  const QLattice& w = y.front().lattice();
  Eigen::MatrixXcd Y(w.size(), y0.size());
  for (std::size_t c = 0; c < y.size(); ++c) {
    if (!(y[c].lattice() == w)) throw DomainError("picard_step: components on different lattices");
    Y.col(c) = y[c].values();
  }
  const Eigen::MatrixXcd T = apply_picard(w, f(w, Y), y0);
  std::vector<LatticeFn> out;
  for (std::size_t c = 0; c < y.size(); ++c) out.emplace_back(w, T.col(c), y[c].parity());
  return out;
}

std::vector<LatticeFn> picard_step(const PointwiseRhs& f, const std::vector<LatticeFn>& y,
                                   const Eigen::VectorXcd& y0) {
  return picard_step(pointwise_on_lattice(f), y, y0);
}

Solution solve_on_window(const FirstOrderProblem& p, const QLattice& w, double tol, int max_iter) {
  if (!(tol > 0.0)) throw DomainError("solver tolerance must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
  const Eigen::Index d = p.y0.size();
  if (d == 0) throw DomainError("empty initial value");
  const LatticeRhs rhs = effective_rhs(p);

  Solution sol;
  Eigen::MatrixXcd Y = p.y0.transpose().replicate(w.size(), 1);
  int bad = 0;
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::MatrixXcd Yn = apply_picard(w, rhs(w, Y), p.y0);
    const double inc = sup_l1(Yn - Y);
    Y = Yn;
    sol.iterations = it;
    sol.increments.push_back(inc);
    if (!std::isfinite(inc)) throw NotContracting("Picard iterates overflow");
    if (inc <= tol) {
      converged = true;
      break;
    }
    const double floor = 1e3 * kEps * std::max(1.0, Y.cwiseAbs().maxCoeff());
    const std::size_t n = sol.increments.size();
    if (n >= 2 && sol.increments[n - 2] > floor) {
      bad = inc >= sol.increments[n - 2] ? bad + 1 : 0;
      if (bad >= 5)
        throw NotContracting("Picard increments failed to decrease over 5 consecutive iterations");
    }
  }
  if (!converged)
    throw MaxIterations("Picard iteration did not reach tolerance within " +
                        std::to_string(max_iter) + " iterations");

  // contraction certificate on increments above the rounding floor
  const double floor = 1e3 * kEps * std::max(1.0, Y.cwiseAbs().maxCoeff());
  const double rho = p.region.rho;
  sol.contraction_certified = true;
  for (std::size_t n = 1; n < sol.increments.size(); ++n) {
    if (sol.increments[n - 1] <= floor || sol.increments[n] <= floor) continue;
    if (sol.increments[n] > rho * sol.increments[n - 1]) sol.contraction_certified = false;
  }

  for (Eigen::Index c = 0; c < d; ++c) {
    const Parity declared = c < static_cast<Eigen::Index>(p.parity.size()) ? p.parity[c] : Parity::general;
    LatticeFn yc(w, Y.col(c), declared);
    sol.components.push_back(yc.with_parity(checked_parity(yc, declared, static_cast<int>(c))));
  }

  const Eigen::MatrixXcd F = rhs(w, Y);
  for (Eigen::Index c = 0; c < d; ++c) {
    const LatticeFn& yc = sol.components[c];
    const LatticeFn dyc = rubin_dq(yc);
    const LatticeFn Fc(w, F.col(c), Parity::general);
    const LatticeFn Ic = jackson_integral(Fc);
    const auto [ye, yo] = parity_decompose(yc);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const LatticePoint x = w.point_at(i);
      if (!interior(w, x)) continue;
      if (dyc.has(x)) {
        const double scale = std::max(1.0, rubin_dq_magnitude(yc, x) + std::abs(F(i, c)));
        sol.residual = std::max(sol.residual, std::abs(dyc(x) - F(i, c)) / scale);
      }
      if (Ic.has(x)) {
        const Complex rhs_val = yo(x) + ye(x.outward()) - p.y0[c];
        const double scale = std::max(1.0, std::abs(yc(x)) + std::abs(yc(x.outward())));
        sol.integral_residual = std::max(sol.integral_residual, std::abs(Ic(x) - rhs_val) / scale);
      }
    }
  }
  sol.h_used = std::abs(w.x({1, w.k_min()}));
  return sol;
}

namespace {

double admissible_radius(const FirstOrderProblem& p, LipschitzEstimate* out = nullptr) {
  RegionSpec region = p.region;
  if (region.y0.size() == 0) region.y0 = p.y0;
  const LipschitzEstimate est = estimate_lipschitz(p.f, region, 256);
  if (out) *out = est;
  // L = 0 makes rho/L infinite; the smallest positive double keeps the min formula intact
  return contraction_radius(std::max(est.L, std::numeric_limits<double>::min()), est.M, region);
}

QLattice contraction_window(const QLattice& lattice, double h) {
  try {
    return lattice.restricted(h);
  } catch (const DomainError&) {
    throw NotContracting("contraction radius h = " + format_real(h) +
                         " lies inside the innermost lattice ring");
  }
}

}  // namespace

Solution solve_first_order(const FirstOrderProblem& p, double tol, int max_iter) {
  p.region.validate();
  LipschitzEstimate est{};
  const double h = admissible_radius(p, &est);
  Solution sol = solve_on_window(p, contraction_window(p.window, h), tol, max_iter);
  sol.h_used = h;
  sol.lipschitz = est.L;
  sol.bound = est.M;
  return sol;
}

namespace {

Complex eval_coeff(const Coefficient& c, double x, const char* name) {
  if (!c) return 0.0;
  Complex v;
  try {
    v = c(x);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("coefficient ") + name + " failed: " + e.what());
  }
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw DomainError(std::string("coefficient ") + name + " is not finite at x = " + format_real(x));
  return v;
}

struct Reduced {
  Complex A1, A2, B;
};

Reduced reduced_coefficients(const SecondOrderSpec& s, double x, double q) {
  const Complex a0 = eval_coeff(s.a0, x, "a0");
  if (a0 == Complex(0.0)) throw DomainError("a0 vanishes at x = " + format_real(x));
  const Complex qa0 = q * a0;
  return {-eval_coeff(s.a1, x, "a1") / qa0, -eval_coeff(s.a2, x, "a2") / qa0,
          eval_coeff(s.b, x, "b") / qa0};
}

enum class Shape { zero, even, odd, general };

Shape shape_of(const std::vector<Complex>& v) {
  double m = 0.0, de = 0.0, dodd = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, std::abs(v[i]));
    de = std::max(de, std::abs(v[i] - v[n - 1 - i]));
    dodd = std::max(dodd, std::abs(v[i] + v[n - 1 - i]));
  }
  if (m == 0.0) return Shape::zero;
  if (de <= 1e-12 * m) return Shape::even;
  if (dodd <= 1e-12 * m) return Shape::odd;
  return Shape::general;
}

}  // namespace

void SecondOrderSpec::validate() const {
  if (!a0) throw DomainError("coefficient a0 is required");
  const double q = interval.q();
  for (Eigen::Index i = 0; i < interval.size(); ++i) reduced_coefficients(*this, interval.points()[i], q);
  if (!std::isfinite(b1.real()) || !std::isfinite(b1.imag()) || !std::isfinite(b2.real()) ||
      !std::isfinite(b2.imag()))
    throw DomainError("initial data must be finite");
}

FirstOrderProblem reduce_second_order(const SecondOrderSpec& s) {
  s.validate();
  const QLattice& lat = s.interval;
  const double q = lat.q();

  std::vector<Complex> A1(lat.size()), A2(lat.size()), B(lat.size());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Reduced r = reduced_coefficients(s, lat.points()[i], q);
    A1[i] = r.A1, A2[i] = r.A2, B[i] = r.B;
  }
  // parity of y from its sources: y(0) drives an even part, dq y(0) an odd one, B its own
  Shape ys = Shape::zero;
  auto join = [&](Shape src) {
    if (src == Shape::zero) return;
    ys = ys == Shape::zero ? src : (ys == src ? ys : Shape::general);
  };
  if (s.b1 != Complex(0.0)) join(Shape::even);
  if (s.b2 != Complex(0.0)) join(Shape::odd);
  join(shape_of(B));
  const Shape s1 = shape_of(A1), s2 = shape_of(A2);
  if ((s1 != Shape::zero && s1 != Shape::even) || (s2 != Shape::zero && s2 != Shape::even))
    ys = Shape::general;
  Parity py = Parity::even;
  if (ys == Shape::odd) py = Parity::odd;
  if (ys == Shape::general) py = Parity::general;

  FirstOrderProblem p{
      [s, q](double x, const Eigen::VectorXcd& y) {
        const Reduced r = reduced_coefficients(s, x, q);
        Eigen::VectorXcd f(2);
        // the shifted read z_o(qx) can reach (1+q) sup|z|; the proxy carries that weight
        f << y[1], (1.0 + q) * r.A1 * y[1] + r.A2 * y[0] + r.B;
        return f;
      },
      [s, q](const QLattice& w, const Eigen::MatrixXcd& Y) {
        const Eigen::Index n = w.size(), z0 = w.zero_index();
        Eigen::MatrixXcd F(n, 2);
        F.col(0) = Y.col(1);
        for (Eigen::Index i = 0; i < n; ++i) {
          const LatticePoint p = w.point_at(i);
          const Reduced r = reduced_coefficients(s, w.points()[i], q);
          Complex ze, zo_in;
          if (p.is_zero()) {
            ze = Y(z0, 1);
            zo_in = 0.0;
          } else {
            const Eigen::Index mi = n - 1 - i;
            ze = 0.5 * (Y(i, 1) + Y(mi, 1));
            const LatticePoint pin = p.inward();
            if (w.contains(pin)) {
              const Eigen::Index a = w.index(pin), b = w.index(pin.negated());
              zo_in = Y(a, 1) - 0.5 * (Y(a, 1) + Y(b, 1));
            } else {
              // innermost ring: the odd part is linear to O(x^3) there
              zo_in = q * (Y(i, 1) - ze);
            }
          }
          F(i, 1) = r.A1 * (ze + q * zo_in) + r.A2 * Y(i, 0) + r.B;
        }
        return F;
      },
      (Eigen::VectorXcd(2) << s.b1, s.b2).finished(),
      RegionSpec{std::abs(lat.x({1, lat.k_min()})), 1.0, 0.9, (Eigen::VectorXcd(2) << s.b1, s.b2).finished()},
      {py, flipped(py)},
      lat};
  return p;
}

namespace {

LatticeFn combine(const std::vector<std::pair<Complex, const LatticeFn*>>& terms, const QLattice& w) {
  std::optional<LatticeFn> acc;
  for (const auto& [c, f] : terms) {
    if (c == Complex(0.0)) continue;
    LatticeFn t = c * *f;
    acc = acc ? *acc + t : t;
  }
  if (!acc) return LatticeFn(w, Eigen::VectorXcd::Zero(w.size()), Parity::even);
  return *acc;
}

}  // namespace

SecondOrderSolution solve_second_order_linear(const SecondOrderSpec& s, double tol, int max_iter) {
  s.validate();
  auto variant = [&](Complex c1, Complex c2, bool forcing) {
    SecondOrderSpec t = s;
    t.b1 = c1;
    t.b2 = c2;
    if (!forcing) t.b = nullptr;
    return t;
  };
  const SecondOrderSpec se = variant(1.0, 0.0, false), so = variant(0.0, 1.0, false),
                        sp = variant(0.0, 0.0, true);
  const FirstOrderProblem pe = reduce_second_order(se), po = reduce_second_order(so);
  bool forced = false;
  for (Eigen::Index i = 0; i < s.interval.size() && s.b; ++i)
    forced = forced || eval_coeff(s.b, s.interval.points()[i], "b") != Complex(0.0);
  std::optional<FirstOrderProblem> pp;
  if (forced) pp = reduce_second_order(sp);

  // one common window so the branches can be superposed point by point
  LipschitzEstimate est{};
  double h = admissible_radius(pe, &est);
  h = std::min(h, admissible_radius(po));
  if (pp) h = std::min(h, admissible_radius(*pp));
  const QLattice w = contraction_window(s.interval, h);

  auto run = [&](const FirstOrderProblem& p, const SecondOrderSpec& t) {
    Solution sol = solve_on_window(p, w, tol, max_iter);
    sol.h_used = h;
    sol.lipschitz = est.L;
    sol.bound = est.M;
    sol.residual = std::max(sol.residual, equation_residual(t, sol.y()));
    return sol;
  };
  SecondOrderSolution out{run(pe, se), run(po, so), Solution{}};
  std::optional<Solution> part;
  if (pp) part = run(*pp, sp);

  Solution& c = out.combined;
  const Complex one = 1.0;
  std::vector<std::pair<Complex, const LatticeFn*>> ty{{s.b1, &out.even.y()}, {s.b2, &out.odd.y()}};
  std::vector<std::pair<Complex, const LatticeFn*>> tz{{s.b1, &out.even.dy()}, {s.b2, &out.odd.dy()}};
  if (part) {
    ty.emplace_back(one, &part->y());
    tz.emplace_back(one, &part->dy());
  }
  c.components = {combine(ty, w), combine(tz, w)};
  if (c.components[1].parity() == c.components[0].parity() && c.components[0].parity() != Parity::general)
    c.components[1] = c.components[1].with_parity(flipped(c.components[0].parity()));
  c.iterations = std::max(out.even.iterations, out.odd.iterations);
  c.contraction_certified = out.even.contraction_certified && out.odd.contraction_certified;
  c.integral_residual = std::max(out.even.integral_residual, out.odd.integral_residual);
  if (part) {
    c.iterations = std::max(c.iterations, part->iterations);
    c.contraction_certified = c.contraction_certified && part->contraction_certified;
    c.integral_residual = std::max(c.integral_residual, part->integral_residual);
  }
  c.h_used = h;
  c.lipschitz = est.L;
  c.bound = est.M;
  c.residual = equation_residual(s, c.y());
  return out;
}

Eigen::VectorXd equation_residual_profile(const SecondOrderSpec& s, const LatticeFn& y,
                                          EquationForm form) {
  const QLattice& w = y.lattice();
  const double q = w.q();
  const LatticeFn z = rubin_dq(y);
  const LatticeFn z2 = rubin_dq(z);
  const auto [ze, zo] = parity_decompose(z);

  // rounding scale of z, propagated once more for dq^2 y
  Eigen::VectorXcd m1(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const LatticePoint p = w.point_at(i);
    if (p.is_zero()) {
      m1[i] = z.has(p) ? Complex(std::abs(z(p))) : missing();
    } else {
      m1[i] = z.has(p) ? Complex(rubin_dq_magnitude(y, p)) : missing();
    }
  }
  const LatticeFn M1(w, m1, Parity::even);

  Eigen::VectorXd r = Eigen::VectorXd::Constant(w.size(), std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const LatticePoint p = w.point_at(i);
    if (p.is_zero()) continue;
    const LatticePoint pin = p.inward();
    const LatticePoint pt = form == EquationForm::system ? p : pin;
    if (!(w.contains(pin) && z2.has(pt) && ze.has(p) && zo.has(pin) && y.has(p) && M1.has(p) &&
          M1.has(pin)))
      continue;
    const LatticePoint m = pt.negated();
    if (!(M1.has(pt.outward()) && M1.has(m.outward()) && M1.has(pt.inward()) && M1.has(m.inward()) &&
          M1.has(m)))
      continue;
    const double x = w.x(p);
    const Complex a0 = eval_coeff(s.a0, x, "a0"), a1 = eval_coeff(s.a1, x, "a1"),
                  a2 = eval_coeff(s.a2, x, "a2"), b = eval_coeff(s.b, x, "b");
    const Complex lhs = q * a0 * z2(pt) + a1 * (ze(p) + q * zo(pin)) + a2 * y(p) - b;
    const double mag = std::abs(q * a0) * rubin_dq_magnitude(M1, pt) +
                       std::abs(a1) * (std::abs(M1(p)) + q * std::abs(M1(pin))) +
                       std::abs(a2) * std::abs(y(p)) + std::abs(b);
    r[i] = std::abs(lhs) / std::max(1.0, mag);
  }
  return r;
}

double equation_residual(const SecondOrderSpec& s, const LatticeFn& y, EquationForm form) {
  const Eigen::VectorXd r = equation_residual_profile(s, y, form);
  double m = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (!std::isnan(r[i])) m = std::max(m, r[i]);
  return m;
}

}  // namespace qrubin
