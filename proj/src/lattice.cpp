#include "qrubin/lattice.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <limits>
#include <mutex>
#include <ostream>

namespace qrubin {

QLattice::QLattice(const QContext& ctx, int k_min, int k_max, double scale)
    : ctx_(ctx), k_min_(k_min), k_max_(k_max), scale_(scale) {
  if (k_min > k_max) throw DomainError("lattice window needs k_min <= k_max");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("lattice scale must be positive");
  const int r = rings();
  points_.resize(2 * r + 1);
  for (int j = 0; j < r; ++j) {
    const double xk = scale_ * std::pow(ctx_.q(), k_min_ + j);
    points_[j] = -xk;                // outermost negative ring first
    points_[2 * r - j] = xk;         // outermost positive ring last
  }
  points_[r] = 0.0;
  for (Eigen::Index i = 1; i < points_.size(); ++i)
    if (!(points_[i] > points_[i - 1]))
      throw DomainError("lattice points collapse; window too deep for double precision");
}

Eigen::Index QLattice::index(const LatticePoint& p) const {
  if (!contains(p))
    throw MissingValue("lattice point (sign " + std::to_string(p.sign) + ", k " +
                       std::to_string(p.k) + ") lies outside the window");
  if (p.is_zero()) return zero_index();
  const int r = rings();
  const int j = p.k - k_min_;
  return p.sign < 0 ? j : 2 * r - j;
}

LatticePoint QLattice::point_at(Eigen::Index i) const {
  const int r = rings();
  if (i < 0 || i > 2 * r) throw DomainError("lattice index out of range");
  if (i == r) return LatticePoint::zero();
  if (i < r) return {-1, k_min_ + static_cast<int>(i)};
  return {1, k_min_ + static_cast<int>(2 * r - i)};
}

double QLattice::x(const LatticePoint& p) const {
  if (contains(p)) return points_[index(p)];
  return p.sign * scale_ * std::pow(ctx_.q(), p.k);
}

LatticePoint QLattice::locate(double x) const {
  if (x == 0.0) return LatticePoint::zero();
  const double a = std::abs(x) / scale_;
  const int k = static_cast<int>(std::lround(std::log(a) / std::log(ctx_.q())));
  const LatticePoint p{x > 0 ? 1 : -1, k};
  if (std::abs(std::abs(this->x(p)) - std::abs(x)) > 1e-12 * std::abs(x))
    throw DomainError("x = " + format_real(x) + " is not a point of the q-geometric set");
  return p;
}

QLattice QLattice::restricted(double radius) const {
  int k = k_min_;
  while (k <= k_max_ && scale_ * std::pow(ctx_.q(), k) > radius * (1.0 + 1e-12)) ++k;
  if (k > k_max_)
    throw DomainError("no lattice ring fits inside radius " + format_real(radius));
  return QLattice(ctx_, k, k_max_, scale_);
}

QLattice build_lattice(const QContext& ctx, int k_min, int k_max, double scale) {
  return QLattice(ctx, k_min, k_max, scale);
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "general";
  }
}

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::general || b == Parity::general) return Parity::general;
  return a == b ? Parity::even : Parity::odd;
}

Parity flipped(Parity p) {
  if (p == Parity::even) return Parity::odd;
  if (p == Parity::odd) return Parity::even;
  return Parity::general;
}

RingLimit extrapolate_geometric(const std::vector<Complex>& v, double q) {
  const std::size_t n = v.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (n == 0) return {missing(), inf};
  if (n == 1) return {v[0], inf};
  const std::size_t J = std::min<std::size_t>(8, n - 1);
  // T[i][j]: j-fold Richardson value ending at sample i
  std::vector<std::vector<Complex>> T(n, std::vector<Complex>(J + 1));
  RingLimit best{v[n - 1], inf};
  for (std::size_t i = 0; i < n; ++i) {
    T[i][0] = v[i];
    double qj = 1.0;
    for (std::size_t j = 1; j <= std::min(i, J); ++j) {
      qj *= q;
      T[i][j] = (T[i][j - 1] - qj * T[i - 1][j - 1]) / (1.0 - qj);
    }
    for (std::size_t j = 0; j <= std::min(i, J); ++j) {
      double err = 0.0;
      bool any = false;
      if (j >= 1) err = std::max(err, std::abs(T[i][j] - T[i][j - 1])), any = true;
      if (i >= 1 && j <= i - 1) err = std::max(err, std::abs(T[i][j] - T[i - 1][j])), any = true;
      if (any && std::isfinite(err) && err < best.error) best = {T[i][j], err};
    }
  }
  return best;
}

Complex missing() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

namespace {

std::mutex& warn_mutex() {
  static std::mutex m;
  return m;
}
WarningHandler& warn_handler() {
  static WarningHandler h = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
  return h;
}

// innermost contiguous run of present samples on one ray, ordered outer to inner
std::vector<Complex> inner_run(const QLattice& lat, const Eigen::VectorXcd& v, int sign) {
  std::vector<Complex> run;
  for (int k = lat.k_max(); k >= lat.k_min(); --k) {
    const Complex z = v[lat.index({sign, k})];
    if (is_missing(z)) {
      if (!run.empty()) break;
      continue;
    }
    run.push_back(z);
  }
  std::reverse(run.begin(), run.end());
  return run;
}

}  // namespace

void set_warning_handler(WarningHandler h) {
  std::lock_guard<std::mutex> lock(warn_mutex());
  warn_handler() = std::move(h);
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(warn_mutex());
  if (warn_handler()) warn_handler()(message);
}

LatticeFn::LatticeFn(QLattice lattice, Eigen::VectorXcd values, Parity parity)
    : lattice_(std::move(lattice)), values_(std::move(values)), parity_(parity) {
  if (values_.size() != lattice_.size())
    throw DomainError("LatticeFn: value count does not match the lattice");
  // q-regularity: both rays must settle on one limit, which must equal f(0) when sampled
  constexpr double rel = 1e-6;
  const RingLimit lp = extrapolate_geometric(inner_run(lattice_, values_, 1), lattice_.q());
  const RingLimit ln = extrapolate_geometric(inner_run(lattice_, values_, -1), lattice_.q());
  const double scale = std::max(1.0, std::max(std::abs(lp.value), std::abs(ln.value)));
  const bool settled = lp.error <= rel * scale && ln.error <= rel * scale &&
                       std::abs(lp.value - ln.value) <= rel * scale;
  zero_limit_ = {0.5 * (lp.value + ln.value), std::max(lp.error, ln.error)};
  q_regular_ = settled;
  const Complex f0 = values_[lattice_.zero_index()];
  if (settled && !is_missing(f0)) {
    if (std::abs(f0 - zero_limit_.value) > rel * scale) q_regular_ = false;
  }
}

bool LatticeFn::has(const LatticePoint& p) const {
  return lattice_.contains(p) && !is_missing(values_[lattice_.index(p)]);
}

Complex LatticeFn::operator()(const LatticePoint& p) const {
  const Complex z = values_[lattice_.index(p)];
  if (is_missing(z))
    throw MissingValue("no sample at x = " + format_real(lattice_.x(p)));
  return z;
}

double LatticeFn::parity_defect(Parity p) const {
  if (p == Parity::general) return 0.0;
  const double s = p == Parity::even ? 1.0 : -1.0;
  double fmax = 0.0, defect = 0.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    if (!is_missing(values_[i])) fmax = std::max(fmax, std::abs(values_[i]));
  const Eigen::Index n = values_.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex a = values_[i], b = values_[n - 1 - i];
    if (is_missing(a) || is_missing(b)) continue;
    defect = std::max(defect, std::abs(a - s * b));
  }
  return fmax > 0.0 ? defect / fmax : 0.0;
}

LatticeFn sample(const std::function<Complex(double)>& expr, const QLattice& lattice,
                 Parity parity_hint) {
  Eigen::VectorXcd v(lattice.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = lattice.points()[i];
    Complex z;
    try {
      z = expr(x);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError("expression failed at x = " + format_real(x) + ": " + e.what());
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw EvaluationError("expression is not finite at x = " + format_real(x));
    v[i] = z;
  }
  LatticeFn f(lattice, std::move(v), parity_hint);
  if (parity_hint != Parity::general && f.parity_defect(parity_hint) > 1e-10) {
    warn(std::string("declared parity ") + to_string(parity_hint) +
         " violated; downgraded to general");
    return f.with_parity(Parity::general);
  }
  return f;
}

std::pair<LatticeFn, LatticeFn> parity_decompose(const LatticeFn& f) {
  const Eigen::VectorXcd& v = f.values();
  const Eigen::VectorXcd e = 0.5 * (v + v.reverse());
  const Eigen::VectorXcd o = 0.5 * (v - v.reverse());
  return {LatticeFn(f.lattice(), e, Parity::even), LatticeFn(f.lattice(), o, Parity::odd)};
}

LatticeFn shift(const LatticeFn& f, ShiftDirection direction) {
  const QLattice& lat = f.lattice();
  Eigen::VectorXcd v(lat.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    const LatticePoint t = direction == ShiftDirection::forward ? p.inward() : p.outward();
    v[i] = lat.contains(t) ? f.values()[lat.index(t)] : missing();
  }
  return LatticeFn(lat, std::move(v), f.parity());
}

namespace {
void require_same(const LatticeFn& f, const LatticeFn& g) {
  if (!(f.lattice() == g.lattice())) throw DomainError("functions live on different lattices");
}
Parity sum_parity(Parity a, Parity b) { return a == b ? a : Parity::general; }
}  // namespace

LatticeFn operator+(const LatticeFn& f, const LatticeFn& g) {
  require_same(f, g);
  return LatticeFn(f.lattice(), f.values() + g.values(), sum_parity(f.parity(), g.parity()));
}

LatticeFn operator-(const LatticeFn& f, const LatticeFn& g) {
  require_same(f, g);
  return LatticeFn(f.lattice(), f.values() - g.values(), sum_parity(f.parity(), g.parity()));
}

LatticeFn operator*(const LatticeFn& f, const LatticeFn& g) {
  require_same(f, g);
  return LatticeFn(f.lattice(), f.values().cwiseProduct(g.values()),
                   product_parity(f.parity(), g.parity()));
}

LatticeFn operator*(Complex c, const LatticeFn& f) {
  return LatticeFn(f.lattice(), c * f.values(), f.parity());
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

LatticeFn restrict_rings(const LatticeFn& f, int k_min, int k_max) {
  const QLattice& lat = f.lattice();
  if (k_min < lat.k_min() || k_max > lat.k_max() || k_min > k_max)
    throw DomainError("restrict_rings: rings must form a sub-window");
  const QLattice sub = lat.with_rings(k_min, k_max);
  Eigen::VectorXcd v(sub.size());
  for (Eigen::Index i = 0; i < sub.size(); ++i) v[i] = f[lat.index(sub.point_at(i))];
  return LatticeFn(sub, v, f.parity());
}

void write_csv(std::ostream& os, const LatticeFn& f) {
  os << "k,x,re(f),im(f)\n";
  const QLattice& lat = f.lattice();
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    os << (p.is_zero() ? std::string("zero") : std::to_string(p.k)) << ','
       << format_real(lat.points()[i]) << ',' << format_real(f[i].real()) << ','
       << format_real(f[i].imag()) << '\n';
  }
}

}  // namespace qrubin
