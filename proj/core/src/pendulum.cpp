#include "driftlab/pendulum.hpp"

#include <cmath>
#include <numbers>

namespace driftlab {

SeparatrixPoint unperturbed_separatrix(double t, double theta) {
  const double s = t - theta;
  double q;
  if (s >= 0)  // reflect for accuracy: 4 atan(e^s) = 2pi - 4 atan(e^{-s})
    q = 2 * std::numbers::pi - 4 * std::atan(std::exp(-s));
  else
    q = 4 * std::atan(std::exp(s));
  double p = std::abs(s) > 350 ? 0.0 : 2.0 / std::cosh(s);
  return {q, p};
}

double pendulum_energy(double q, double p) {
  // cos q - 1 = -2 sin^2(q/2), stable near q = 0 mod 2pi
  double s = std::sin(q / 2);
  return p * p / 2 - 2 * s * s;
}

double psi0(double t) {
  if (std::abs(t) > 230) return 0.0;  // ~ 4 e^{-|t|} underflows past here
  double c = std::cosh(t);
  double d = 1 + c;
  return c * c / (d * d * d);
}

}  // namespace driftlab
