#pragma once
/** \file splitting.hpp
 *  The homoclinic action functions G (pi-crossing gluing) and G~ (projected
 *  gluing), the change of time parameterization linking them, and the
 *  first-order (Poincare-Melnikov) approximations with closed forms.
 */

#include <complex>
#include <vector>

#include "driftlab/bvp.hpp"
#include "driftlab/params.hpp"

namespace driftlab {

/// Action of a solved profile: integral of q'^2/2 + (1 - cos q)(1 + mu f)
/// over the window, plus analytic exponential tail corrections.
double action_one_bump(const SystemParams& params, const TrigPerturbation& f,
                       const HomoclinicSolution& sol);
/// Same functional for any variant (alias kept for chains).
double action_of(const SystemParams& params, const TrigPerturbation& f,
                 const HomoclinicSolution& sol);

/// G(A): action of the pi-crossing one-bump profile glued at theta = 0.
double homoclinic_G(const SystemParams& params, const TrigPerturbation& f,
                    const std::vector<double>& A,
                    const BvpSettings& settings = {});

/// G~(A): action of the projected (smooth) one-bump profile at theta = 0.
double homoclinic_G_tilde(const SystemParams& params,
                          const TrigPerturbation& f,
                          const std::vector<double>& A,
                          const BvpSettings& settings = {});

/// One sample of the reparameterization psi(A) = A + k(A) omega with
/// G~(A) = G(psi(A)).  k is the time nearest 0 at which the projected
/// profile crosses pi.
struct PsiMuSample {
  double k_mu = 0;
  double G_tilde = 0;
  double G_at_psi = 0;      ///< G evaluated at the shifted phase
  double check_residual = 0;  ///< |G~(A) - G(A + k omega)|
};
PsiMuSample compute_psi_mu(const SystemParams& params,
                           const TrigPerturbation& f,
                           const std::vector<double>& A,
                           const BvpSettings& settings = {});

/// Melnikov primitive Gamma(A) = integral of 2 sech^2(t) f(omega t + A) dt,
/// by adaptive quadrature on |t| <= 40.
double melnikov_primitive(const SystemParams& params, const TrigPerturbation& f,
                          const std::vector<double>& A);
double melnikov_primitive(const TrigPerturbation& f,
                          const std::vector<double>& omega,
                          const std::vector<double>& A);

/// integral of 2 sech^2(t) cos(nu t) dt = 2 pi nu / sinh(pi nu / 2), -> 4 as
/// nu -> 0.
double sech2_cosine_integral(double nu);

/// Gamma(A) summed harmonic by harmonic through sech2_cosine_integral.
double melnikov_cosine_closed_form(const TrigPerturbation& f,
                                   const std::vector<double>& omega,
                                   const std::vector<double>& A);

/// Fast-angle Fourier analysis of G~ on a grid of slow phases.
struct SplittingReport {
  std::vector<std::vector<double>> slow_grid;  ///< sampled (A_2..A_n)
  int M = 32;                                  ///< fast-angle samples per point
  std::vector<double> g0;                      ///< fast-angle average of G~
  std::vector<std::complex<double>> g1;        ///< first fast harmonic of G~
  std::vector<double> melnikov_g0;             ///< same modes of mu * Gamma
  std::vector<std::complex<double>> melnikov_g1;
  double g1_modulus_mean = 0;
  double predicted_g1 = 0;  ///< mu pi / (sqrt(eps) sinh(pi / (2 sqrt(eps))))
  double remainder_inf = 0;  ///< sup |G~ - g0 - 2 Re(g1 e^{i A_1})|
  std::vector<std::size_t> failed_points;      ///< slow indices where BVP failed
};
SplittingReport fourier_fast_angle(const SystemParams& params,
                                   const TrigPerturbation& f,
                                   const std::vector<std::vector<double>>& slow_grid,
                                   int M = 32, const BvpSettings& settings = {});

}  // namespace driftlab
