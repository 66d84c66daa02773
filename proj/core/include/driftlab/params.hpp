#pragma once
/** \file params.hpp
 *  System parameters and trigonometric forcing for the three time scale model
 *
 *      H(phi, I, q, p) = I_1 / sqrt(eps) + eps^a * beta . I_{2..n}
 *                        + p^2/2 + (cos q - 1) * (1 + mu f(phi)).
 */

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftlab {

struct InvalidParams : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Frequency vector omega_eps = (1/sqrt(eps), eps^a * beta).
struct FrequencyVector {
  std::vector<double> omega;  ///< length n
  double norm2 = 0;           ///< Euclidean norm
  double norm_inf = 0;        ///< sup norm
};

struct SystemParams {
  double eps = 0.04;   ///< small parameter, 0 < eps
  double a = 0.5;      ///< slow exponent, a > 0
  double mu = 1e-4;    ///< perturbation size, mu >= 0
  std::vector<double> beta;  ///< slow direction, length n-1, normalized unless opted out
  double delta0 = 0.05;      ///< admissibility threshold for mu / eps^{2a+1}
  bool normalize_beta = true;

  int n() const { return static_cast<int>(beta.size()) + 1; }

  /// Throws InvalidParams unless eps > 0, a > 0, mu >= 0, beta nonzero.
  void validate() const;

  /// mu <= delta0 * eps^{2a+1} (the smallness regime of the drift estimates).
  bool admissible() const;

  /// Returns a copy with beta scaled to unit Euclidean norm (if normalize_beta).
  SystemParams normalized() const;
};

SystemParams make_params(double eps, double a, double mu, std::vector<double> beta,
                         double delta0 = 0.05, bool normalize_beta = true);

FrequencyVector frequency_vector(const SystemParams& params);

/// Real trigonometric polynomial f(phi) on T^n with analytic-norm bookkeeping.
///
/// Coefficients are stored for one representative of each {k, -k} pair
/// (k lexicographically positive, or k = 0 with a real coefficient) so
///     f(phi) = c_0 + sum_{k in reps} 2 Re( c_k exp(i k . phi) ).
class TrigPerturbation {
 public:
  explicit TrigPerturbation(int n);

  int n() const { return n_; }

  /// Adds c * exp(i k.phi) + conj(c) * exp(-i k.phi) (for k = 0, adds Re c once).
  void set_coeff(const std::vector<int>& k, std::complex<double> c);

  double value(const std::vector<double>& phi) const;
  /// Gradient d f / d phi_j.
  std::vector<double> gradient(const std::vector<double>& phi) const;

  /// sup norm on the strip |Im phi_1| = 0, |Im phi_j| <= r_j (j >= 2):
  /// sum over all terms of |c_k| exp( sum_{j>=2} |k_j| r_j ).
  double sup_norm(const std::vector<double>& widths) const;
  double sup_norm() const;  ///< widths = 0, i.e. sum |c_k| over all harmonics

  const std::map<std::vector<int>, std::complex<double>>& coeffs() const {
    return coeffs_;
  }

  /// f(phi) = sum_j cos phi_j.
  static TrigPerturbation cosine_sum(int n);

 private:
  int n_;
  std::map<std::vector<int>, std::complex<double>> coeffs_;
};

}  // namespace driftlab
