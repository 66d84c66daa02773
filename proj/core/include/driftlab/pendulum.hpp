#pragma once
/** \file pendulum.hpp
 *  Closed forms for the unperturbed pendulum p^2/2 + (cos q - 1):
 *  separatrix profile, its normalized tangent-direction weight, and energy.
 */

#include <utility>

namespace driftlab {

/// Separatrix orbit centered at theta: q in (0, 2pi), p > 0.
/// q(t) = 4 arctan(e^{t-theta}), p(t) = 2 sech(t-theta).
struct SeparatrixPoint {
  double q;
  double p;
};
SeparatrixPoint unperturbed_separatrix(double t, double theta = 0.0);

/// Pendulum energy p^2/2 + (cos q - 1); zero on the separatrix.
double pendulum_energy(double q, double p);

/// psi0(t) = cosh^2 t / (1 + cosh t)^3: the even, integrable weight used to
/// project out the time-translation direction.  psi0(0) = 1/8.
double psi0(double t);

}  // namespace driftlab
