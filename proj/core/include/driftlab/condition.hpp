#pragma once
/** \file condition.hpp
 *  Verification of the splitting condition: a quantitative certificate that
 *  the homoclinic function has a localized maximum with explicit drop
 *  estimates in an adapted basis of phase space.
 */

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "driftlab/bvp.hpp"
#include "driftlab/params.hpp"

namespace driftlab {

/// Evaluates a homoclinic function at a phase A in R^n.
using GFunction = std::function<double(const std::vector<double>&)>;

/// Adapted basis: omega is a positive multiple of the first column, columns
/// have length in [1/2, 2], det >= 1/2, and columns 3..n are an orthonormal
/// basis of the complement of the first two.
struct SplittingBasis {
  Eigen::VectorXd A_bar;
  Eigen::MatrixXd Omega;  ///< columns Omega_1 .. Omega_n

  /// Throws InvalidParams if the structural requirements fail for omega.
  void validate(const std::vector<double>& omega) const;
};

/// Reference basis for the sum-of-cosines forcing:
/// Omega_1 = (1, eps^{a+1/2} beta), Omega_2 = (0, beta),
/// Omega_3.. = (0, orthonormal complement of beta).  Needs n >= 3.
SplittingBasis default_splitting_basis(const SystemParams& params);

/// Scale parameters of the condition.  l1/l2 bound the fast coordinate
/// interval and may depend on the slow coordinates.
struct ConditionParams {
  double rho = 0, sigma = 0, delta1 = 0, delta2 = 0, delta3 = 0;
  std::function<double(const Eigen::VectorXd&)> l1, l2;  ///< of x = (a_2..a_n)

  /// Positivity, 3 sigma < rho, delta2 < delta3, l1 < l2 at x = 0.
  bool valid(std::string* why = nullptr) const;
};

/// Reference parameters for the sum-of-cosines forcing:
/// rho = pi eps^{a+1/2}, sigma = rho/6, delta1 = delta3 = mu rho^2 / 2,
/// delta2 = 3 pi mu eps^{-1/2} exp(-pi/(2 sqrt(eps))), l = -+ 2 pi.
ConditionParams default_condition_params(const SystemParams& params);

struct ConditionGrids {
  int a1_nodes = 64;   ///< scan nodes for the fast-coordinate sup
  int x_nodes = 17;    ///< nodes per slow coordinate
  double a1_tol = 1e-10;  ///< golden-section refinement tolerance
};

/// H(a) = G(A_bar + Omega a).
double H_in_basis(const GFunction& G, const SplittingBasis& basis,
                  const Eigen::VectorXd& a);

/// J(x) = sup over a_1 in [l1(x), l2(x)] of H(a_1, x), by grid scan plus
/// golden-section refinement.
struct SupResult {
  double J;
  double arg_a1;
};
SupResult sup_J(const GFunction& G, const SplittingBasis& basis,
                const ConditionParams& cp, const Eigen::VectorXd& x,
                const ConditionGrids& grids = {});

struct SplittingConditionCert {
  bool passed = false;
  bool params_valid = false;
  std::string failure;  ///< first violated requirement, empty if passed

  double rho = 0, sigma = 0, delta1 = 0, delta2 = 0, delta3 = 0;
  // worst-case slack of every inequality; negative = violated
  double margin_i = 0;         ///< J(x) - max(H(l1,x), H(l2,x)) - delta1
  double margin_ii_lower = 0;  ///< J(a2,y) - J(0,y) + delta2/2,  |a2| <= sigma
  double margin_ii_upper = 0;  ///< J(0,y) - delta2 - J(a2,y), a2 near +-rho
  double margin_iii_lower = 0; ///< J(a2,y) - J(0,0) + delta3/2, small box
  double margin_iii_upper = 0; ///< J(0,0) - delta3 - J(a2,y), y near boundary
  int a1_nodes = 0, x_nodes = 0;
};

/// Checks every clause of the condition on the given grids.
SplittingConditionCert verify_condition(const GFunction& G,
                                        const SplittingBasis& basis,
                                        const ConditionParams& cp,
                                        const ConditionGrids& grids = {});

/// Transfers a certificate from the projected homoclinic function to the
/// pi-crossing one: the fast-interval endpoints are shifted by the
/// reparameterization time at the endpoint phases, then the condition is
/// re-verified for G with the same scale parameters.
SplittingConditionCert transfer_condition(const SystemParams& params,
                                          const TrigPerturbation& f,
                                          const SplittingBasis& basis,
                                          const ConditionParams& cp_tilde,
                                          const BvpSettings& settings = {},
                                          const ConditionGrids& grids = {});

}  // namespace driftlab
