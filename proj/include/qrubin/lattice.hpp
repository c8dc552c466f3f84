#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "qrubin/qsymbols.hpp"

namespace qrubin {

/// Address of a point of the q-geometric set: sign * scale * q^k, or the origin.
struct LatticePoint {
  int sign = 0;  // -1, +1, or 0 for the origin (k ignored)
  int k = 0;

  static LatticePoint zero() { return {0, 0}; }
  bool is_zero() const { return sign == 0; }
  /// x -> q x
  LatticePoint inward() const { return is_zero() ? *this : LatticePoint{sign, k + 1}; }
  /// x -> x / q
  LatticePoint outward() const { return is_zero() ? *this : LatticePoint{sign, k - 1}; }
  LatticePoint negated() const { return {-sign, k}; }
  LatticePoint scaled(int n) const { return is_zero() ? *this : LatticePoint{sign, k + n}; }

  bool operator==(const LatticePoint& o) const {
    return sign == o.sign && (sign == 0 || k == o.k);
  }
};

/// Finite symmetric window {0} u {+-s q^k : k_min <= k <= k_max}.
///
/// Points are stored in increasing order: the negative rings from the
/// outermost inwards, the origin, then the positive rings outwards.
class QLattice {
 public:
  QLattice(const QContext& ctx, int k_min, int k_max, double scale = 1.0);

  const QContext& context() const { return ctx_; }
  double q() const { return ctx_.q(); }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  double scale() const { return scale_; }
  int rings() const { return k_max_ - k_min_ + 1; }
  Eigen::Index size() const { return points_.size(); }
  Eigen::Index zero_index() const { return rings(); }
  const Eigen::VectorXd& points() const { return points_; }

  bool contains(const LatticePoint& p) const {
    return p.is_zero() || (k_min_ <= p.k && p.k <= k_max_ && (p.sign == 1 || p.sign == -1));
  }
  Eigen::Index index(const LatticePoint& p) const;
  LatticePoint point_at(Eigen::Index i) const;
  /// Coordinate of p; valid also for addresses outside the window.
  double x(const LatticePoint& p) const;
  /// Address of the lattice point equal to x (relative 1e-12), or DomainError.
  LatticePoint locate(double x) const;

  /// Sub-window of all rings with |x| <= radius.
  QLattice restricted(double radius) const;
  QLattice with_rings(int k_min, int k_max) const { return QLattice(ctx_, k_min, k_max, scale_); }

  bool operator==(const QLattice& o) const {
    return ctx_ == o.ctx_ && k_min_ == o.k_min_ && k_max_ == o.k_max_ && scale_ == o.scale_;
  }

 private:
  QContext ctx_;
  int k_min_, k_max_;
  double scale_;
  Eigen::VectorXd points_;
};

QLattice build_lattice(const QContext& ctx, int k_min, int k_max, double scale = 1.0);

enum class Parity { even, odd, general };

const char* to_string(Parity p);

/// Parity of a product / of a derivative.
Parity product_parity(Parity a, Parity b);
Parity flipped(Parity p);

/// Limit of a sequence v_n sampled at t_n = t_0 q^n, by a Richardson table.
struct RingLimit {
  Complex value;
  double error;
};
RingLimit extrapolate_geometric(const std::vector<Complex>& v, double q);

/// Complex function sampled on a QLattice. Missing samples are stored as NaN
/// and propagate through arithmetic.
class LatticeFn {
 public:
  LatticeFn(QLattice lattice, Eigen::VectorXcd values, Parity parity);

  const QLattice& lattice() const { return lattice_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Parity parity() const { return parity_; }

  /// q-regular limit lim f(x q^n); meaningful when q_regular().
  Complex value_at_zero() const { return zero_limit_.value; }
  double zero_limit_error() const { return zero_limit_.error; }
  bool q_regular() const { return q_regular_; }

  bool has(const LatticePoint& p) const;
  /// Value at p; MissingValue when p is outside the window or not sampled.
  Complex operator()(const LatticePoint& p) const;
  Complex operator[](Eigen::Index i) const { return values_[i]; }

  /// max |f(x) - s f(-x)| relative to max |f|, with s = +1 (even) or -1 (odd).
  double parity_defect(Parity p) const;
  LatticeFn with_parity(Parity p) const { return LatticeFn(lattice_, values_, p); }

 private:
  QLattice lattice_;
  Eigen::VectorXcd values_;
  Parity parity_;
  RingLimit zero_limit_{};
  bool q_regular_ = false;
};

/// Marker for absent samples.
Complex missing();
inline bool is_missing(const Complex& z) { return std::isnan(z.real()) || std::isnan(z.imag()); }

/// Callback for parity downgrade warnings; defaults to a line on stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler h);
void warn(const std::string& message);

LatticeFn sample(const std::function<Complex(double)>& expr, const QLattice& lattice,
                 Parity parity_hint = Parity::general);

std::pair<LatticeFn, LatticeFn> parity_decompose(const LatticeFn& f);

enum class ShiftDirection { forward, backward };
/// forward: x -> f(qx); backward: x -> f(x/q). Out-of-window images are missing.
LatticeFn shift(const LatticeFn& f, ShiftDirection direction);

/// Samples of f on the rings k_min..k_max of its window.
LatticeFn restrict_rings(const LatticeFn& f, int k_min, int k_max);

LatticeFn operator+(const LatticeFn& f, const LatticeFn& g);
LatticeFn operator-(const LatticeFn& f, const LatticeFn& g);
LatticeFn operator*(const LatticeFn& f, const LatticeFn& g);
LatticeFn operator*(Complex c, const LatticeFn& f);

/// CSV with columns k,x,re(f),im(f); the origin row has k = zero.
void write_csv(std::ostream& os, const LatticeFn& f);

/// printf-style %.16e; 17 significant digits, lowercase exponent.
std::string format_real(double v);

}  // namespace qrubin
