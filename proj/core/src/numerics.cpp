#include "driftlab/numerics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace driftlab {

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
  // Fornberg (1988), Mathematics of Computation 51, 699-706.
  const int nd = static_cast<int>(x.size()) - 1;
  if (nd < m) throw NumericsError("fd_weights: too few nodes for order m");
  std::vector<std::vector<double>> c(nd + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nd + 1);
  for (int i = 0; i <= nd; ++i) w[i] = c[i][m];
  return w;
}

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ab_((2 * kl + ku + 1) * n, 0.0), ipiv_(n) {}

void BandedMatrix::clear() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factored_ = false;
}

void BandedMatrix::add(int i, int j, double v) {
  if (j - i > ku_ || i - j > kl_)
    throw NumericsError("BandedMatrix::add outside band");
  const int ldab = 2 * kl_ + ku_ + 1;
  // column-major band storage: AB(kl+ku+i-j, j)
  ab_[static_cast<std::size_t>(j) * ldab + kl_ + ku_ + i - j] += v;
}

void BandedMatrix::factor() {
  const int ldab = 2 * kl_ + ku_ + 1;
  int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(),
                            ldab, ipiv_.data());
  if (info != 0) throw NumericsError("banded LU failed (singular Jacobian)");
  factored_ = true;
}

void BandedMatrix::solve(std::vector<double>& rhs) {
  if (!factored_) throw NumericsError("BandedMatrix::solve before factor");
  const int ldab = 2 * kl_ + ku_ + 1;
  int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1, ab_.data(),
                            ldab, ipiv_.data(), rhs.data(), n_);
  if (info != 0) throw NumericsError("banded back-substitution failed");
}

StencilInterpolant::StencilInterpolant(const std::vector<double>* x,
                                       const std::vector<double>* y, int width)
    : x_(x), y_(y), width_(width) {
  if (x_->size() != y_->size() || x_->size() < static_cast<std::size_t>(width))
    throw NumericsError("StencilInterpolant: bad sample arrays");
}

std::size_t StencilInterpolant::locate(double t) const {
  const auto& x = *x_;
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t k = it == x.begin() ? 0 : (it - x.begin() - 1);
  return std::min(k, x.size() - 2);
}

std::pair<std::size_t, std::size_t> StencilInterpolant::stencil(
    std::size_t k) const {
  const std::size_t n = x_->size();
  const std::size_t w = width_;
  std::size_t lo = k >= (w - 2) / 2 ? k - (w - 2) / 2 : 0;
  if (lo + w > n) lo = n - w;
  return {lo, lo + w};
}

double StencilInterpolant::value(double t) const {
  auto [lo, hi] = stencil(locate(t));
  std::vector<double> nodes(x_->begin() + lo, x_->begin() + hi);
  auto w = fd_weights(t, nodes, 0);
  double v = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) v += w[i] * (*y_)[lo + i];
  return v;
}

double StencilInterpolant::deriv(double t, int m) const {
  auto [lo, hi] = stencil(locate(t));
  std::vector<double> nodes(x_->begin() + lo, x_->begin() + hi);
  auto w = fd_weights(t, nodes, m);
  double v = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) v += w[i] * (*y_)[lo + i];
  return v;
}

namespace {
// 5-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 5> kGaussX = {
    -0.9061798459386639928, -0.5384693101056830910, 0.0,
    0.5384693101056830910, 0.9061798459386639928};
constexpr std::array<double, 5> kGaussW = {
    0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
    0.4786286704993664680, 0.2369268850561890875};
}  // namespace

std::vector<double> interpolatory_quad_weights(const std::vector<double>& x,
                                               int width) {
  const std::size_t n = x.size();
  std::vector<double> dummy(n, 0.0);
  StencilInterpolant interp(&x, &dummy, width);
  std::vector<double> W(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto [lo, hi] = interp.stencil(k);
    std::vector<double> nodes(x.begin() + lo, x.begin() + hi);
    double mid = (x[k] + x[k + 1]) / 2, half = (x[k + 1] - x[k]) / 2;
    for (int g = 0; g < 5; ++g) {
      double t = mid + half * kGaussX[g];
      auto c = fd_weights(t, nodes, 0);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        W[lo + i] += half * kGaussW[g] * c[i];
    }
  }
  return W;
}

std::vector<double> interpolatory_quad_cumulative(const std::vector<double>& x,
                                                  const std::vector<double>& y,
                                                  int width) {
  const std::size_t n = x.size();
  StencilInterpolant interp(&x, &y, width);
  std::vector<double> C(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto [lo, hi] = interp.stencil(k);
    std::vector<double> nodes(x.begin() + lo, x.begin() + hi);
    double mid = (x[k] + x[k + 1]) / 2, half = (x[k + 1] - x[k]) / 2;
    double s = 0;
    for (int g = 0; g < 5; ++g) {
      double t = mid + half * kGaussX[g];
      auto c = fd_weights(t, nodes, 0);
      double v = 0;
      for (std::size_t i = 0; i < nodes.size(); ++i) v += c[i] * y[lo + i];
      s += half * kGaussW[g] * v;
    }
    C[k + 1] = C[k] + s;
  }
  return C;
}

ScalarMax golden_max(const std::function<double(double)>& g, double lo,
                     double hi, double x_tol) {
  const double gr = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = g(x1);
    }
  }
  double xm = (a + b) / 2;
  return {xm, g(xm)};
}

ScalarMax grid_golden_max(const std::function<double(double)>& g, double lo,
                          double hi, int grid_nodes, double x_tol) {
  if (grid_nodes < 2) throw NumericsError("grid_golden_max: need >= 2 nodes");
  double best = lo, best_v = g(lo);
  double h = (hi - lo) / (grid_nodes - 1);
  for (int i = 1; i < grid_nodes; ++i) {
    double x = lo + i * h;
    double v = g(x);
    if (v > best_v) {
      best_v = v;
      best = x;
    }
  }
  double a = std::max(lo, best - h), b = std::min(hi, best + h);
  ScalarMax r = golden_max(g, a, b, x_tol);
  if (r.value < best_v) return {best, best_v};
  return r;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw NumericsError("fit_line: need >= 2 samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  if (den == 0) throw NumericsError("fit_line: degenerate abscissae");
  LineFit f{};
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i)
    f.max_abs_residual = std::max(
        f.max_abs_residual, std::abs(y[i] - f.slope * x[i] - f.intercept));
  return f;
}

}  // namespace driftlab
