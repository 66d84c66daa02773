#pragma once
/** \file numerics.hpp
 *  Shared numerical kernels: finite-difference weights on arbitrary nodes,
 *  banded LU via LAPACK, stencil interpolation/quadrature on graded grids,
 *  scalar optimization, and least-squares line fits.
 */

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace driftlab {

struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Weights w such that sum_i w_i g(x_i) approximates g^{(m)}(x0)
/// (Fornberg's algorithm; exact for polynomials of degree < #nodes).
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m);

/// Banded matrix in LAPACK general-band storage with kl sub- and ku
/// superdiagonals; factor() then solve() may be called repeatedly.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);
  void clear();
  void add(int i, int j, double v);
  void factor();                         ///< throws NumericsError if singular
  void solve(std::vector<double>& rhs);  ///< in place, requires factor()
  int n() const { return n_; }

 private:
  int n_, kl_, ku_;
  bool factored_ = false;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
};

/// Piecewise-polynomial view of samples y_i on strictly increasing nodes x_i,
/// using a sliding 7-point stencil (never crossing the interval containing t).
class StencilInterpolant {
 public:
  StencilInterpolant(const std::vector<double>* x, const std::vector<double>* y,
                     int width = 7);
  double value(double t) const;
  double deriv(double t, int m = 1) const;
  /// Stencil [lo, hi) used for evaluation points inside interval k.
  std::pair<std::size_t, std::size_t> stencil(std::size_t interval) const;

 private:
  const std::vector<double>* x_;
  const std::vector<double>* y_;
  int width_;
  std::size_t locate(double t) const;
};

/// Node weights W with sum_i W_i g(x_i) ~ integral of g over [x_0, x_end],
/// built by applying 5-point Gauss-Legendre per interval to the 7-point
/// stencil interpolant (so the rule is linear in the samples).
std::vector<double> interpolatory_quad_weights(const std::vector<double>& x,
                                               int width = 7);

/// Same rule but cumulative: C[i] ~ integral from x_0 to x_i.
std::vector<double> interpolatory_quad_cumulative(
    const std::vector<double>& x, const std::vector<double>& y, int width = 7);

/// Golden-section maximization of g on [lo, hi] to absolute x-tolerance.
struct ScalarMax {
  double x;
  double value;
};
ScalarMax golden_max(const std::function<double(double)>& g, double lo,
                     double hi, double x_tol);

/// Grid scan followed by golden-section refinement around the best node.
ScalarMax grid_golden_max(const std::function<double(double)>& g, double lo,
                          double hi, int grid_nodes, double x_tol);

/// Least squares fit y ~ slope * x + intercept.
struct LineFit {
  double slope;
  double intercept;
  double max_abs_residual;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace driftlab
