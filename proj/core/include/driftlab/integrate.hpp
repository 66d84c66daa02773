#pragma once
/** \file integrate.hpp
 *  Adaptive integration of the full model and of the reduced forced pendulum.
 */

#include <stdexcept>
#include <vector>

#include "driftlab/params.hpp"

namespace driftlab {

struct IntegrationError : std::runtime_error {
  double t_fail;
  IntegrationError(const std::string& msg, double t)
      : std::runtime_error(msg), t_fail(t) {}
};

/// Full phase-space point: angles phi (reduced mod 2pi), actions I,
/// pendulum pair (q, p).  q is stored unreduced so winding is visible.
struct FullState {
  std::vector<double> phi;
  std::vector<double> I;
  double q = 0;
  double p = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FullState> states;
  double energy_drift = 0;  ///< max |H(t) - H(t0)| over stored samples
};

/// Reduced pendulum orbit -q'' + sin(q)(1 + mu f(omega t + A)) = 0,
/// integrated as q' = p, p' = sin(q)(1 + mu f).
struct PendulumTrajectory {
  std::vector<double> times;
  std::vector<double> q;
  std::vector<double> p;
};

struct IntegrateSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double dt_init = 1e-3;
  double dt_store = 0.0;  ///< 0: store every accepted step
};

double hamiltonian(const SystemParams& params, const TrigPerturbation& f,
                   const FullState& s);

Trajectory integrate_full(const SystemParams& params, const TrigPerturbation& f,
                          const FullState& s0, double t0, double t1,
                          const IntegrateSettings& settings = {});

/// A is the angle offset: the forcing phase at time t is omega*t + A.
PendulumTrajectory integrate_pendulum(const SystemParams& params,
                                      const TrigPerturbation& f,
                                      const std::vector<double>& A, double q0,
                                      double p0, double t0, double t1,
                                      const IntegrateSettings& settings = {});

}  // namespace driftlab
