#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "qrubin/lattice.hpp"

namespace qrubin {

/// The box |x| <= alpha times the l1 ball of radius beta about y0, plus the
/// contraction target rho.
struct RegionSpec {
  double alpha = 1.0;
  double beta = 1.0;
  double rho = 0.9;
  Eigen::VectorXcd y0;

  void validate() const;
};

/// f(x, y) evaluated at one point.
using PointwiseRhs = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;

/// Right-hand side over a whole window: rows are lattice points, columns are
/// components. Needed when f reads the state at shifted points.
using LatticeRhs = std::function<Eigen::MatrixXcd(const QLattice&, const Eigen::MatrixXcd&)>;

/// dq y = f(x, y), y(0) = y0 on the window.
struct FirstOrderProblem {
  PointwiseRhs f;          // used for the Lipschitz and bound estimates
  LatticeRhs lattice_f;    // optional; f is applied pointwise when empty
  Eigen::VectorXcd y0;
  RegionSpec region;
  std::vector<Parity> parity;  // expected parity of each component
  QLattice window;
};

struct Solution {
  std::vector<LatticeFn> components;
  int iterations = 0;
  /// max over interior points of |dq y - f(x, y)| over its rounding scale (second-order
  /// solves also fold in the residual of the second-order equation)
  double residual = 0.0;
  /// violation of the integral form y_o(x) + y_e(x/q) - y0 = int_0^x f
  double integral_residual = 0.0;
  double h_used = 0.0;
  double lipschitz = 0.0;
  double bound = 0.0;
  std::vector<double> increments;  // sup-norm Picard changes
  bool contraction_certified = false;

  const LatticeFn& y() const { return components.at(0); }
  const LatticeFn& dy() const { return components.at(1); }
};

/// min{alpha, beta/(L beta + M), rho/L}.
double contraction_radius(double L, double M, const RegionSpec& region);

struct LipschitzEstimate {
  double L;
  double M;
};
/// Sampled lower bounds of the Lipschitz constant and of sup |f| over the region (l1 norms).
LipschitzEstimate estimate_lipschitz(const PointwiseRhs& f, const RegionSpec& region, int samples,
                                     std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Picard operator on the lattice:
///   T y(x) = y0 + int_0^x f_e + int_0^{qx} f_o,
/// with f_e, f_o the parity parts of x -> f(x, y(x)). For odd solutions this is the
/// familiar y0 + int_0^x f; the split keeps even solutions fixed points too.
std::vector<LatticeFn> picard_step(const LatticeRhs& f, const std::vector<LatticeFn>& y,
                                   const Eigen::VectorXcd& y0);
std::vector<LatticeFn> picard_step(const PointwiseRhs& f, const std::vector<LatticeFn>& y,
                                   const Eigen::VectorXcd& y0);

/// Estimate L and M, restrict the window to [-h, h], then iterate.
Solution solve_first_order(const FirstOrderProblem& p, double tol, int max_iter);

/// Iterate on a given window (no contraction radius computed).
Solution solve_on_window(const FirstOrderProblem& p, const QLattice& window, double tol,
                         int max_iter);

using Coefficient = std::function<Complex(double)>;

/// q a0 dq^2 y + a1 dq y + a2 y = b with y(0) = b1, dq y(0) = b2.
struct SecondOrderSpec {
  Coefficient a0, a1, a2, b;
  Complex b1 = 0.0, b2 = 0.0;
  QLattice interval;

  void validate() const;
};

/// Two-component system y' = z,
///   dq z(x) = A1(x) [z_e(x) + q z_o(qx)] + A2(x) y(x) + B(x),
/// A_j = -a_j/(q a0), B = b/(q a0). On odd y this is A1 dq y(x) + ..., on even y
/// q A1 dq y(qx) + ...
FirstOrderProblem reduce_second_order(const SecondOrderSpec& s);

struct SecondOrderSolution {
  Solution even;      // data (1, 0)
  Solution odd;       // data (0, 1)
  Solution combined;  // b1 even + b2 odd (+ particular part when b != 0)
};

SecondOrderSolution solve_second_order_linear(const SecondOrderSpec& s, double tol,
                                              int max_iter = 500);

enum class EquationForm {
  system,   // q a0 dq^2 y(x)  + a1 [..] + a2 y = b, the equation the solver integrates
  shifted,  // q a0 dq^2 y(qx) + a1 [..] + a2 y = b
};

/// Pointwise residual of the second-order equation over its rounding scale
/// (NaN where a needed neighbour is missing, and at the origin).
Eigen::VectorXd equation_residual_profile(const SecondOrderSpec& s, const LatticeFn& y,
                                          EquationForm form = EquationForm::system);
double equation_residual(const SecondOrderSpec& s, const LatticeFn& y,
                         EquationForm form = EquationForm::system);

}  // namespace qrubin
