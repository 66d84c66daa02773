#pragma once
/** \file bvp.hpp
 *  Boundary value solvers for pseudo-homoclinic pendulum profiles:
 *  one-bump (pi-crossing and projected variants) and multi-bump chains.
 *
 *  All variants discretize  -q'' + sin(q) (1 + mu f(omega t + A)) = rhs  by
 *  4th-order finite differences on a per-segment uniform grid over
 *  [theta_1 - t_radius, theta_k + t_radius], with exponential-decay Robin
 *  conditions at both ends and Newton iteration on the banded system.
 */

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "driftlab/params.hpp"

namespace driftlab {

struct SolverError : std::runtime_error {
  double residual;   ///< residual of the last Newton iterate
  int worst_bump;    ///< bump index nearest the largest residual entry (-1: n/a)
  SolverError(const std::string& msg, double res = 0, int bump = -1)
      : std::runtime_error(msg), residual(res), worst_bump(bump) {}
};

struct GapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BvpSettings {
  double t_radius = 16.0;    ///< half-width of the window around each chain end
  int nodes_per_unit = 24;   ///< grid resolution (nodes per unit time)
  double newton_tol = 1e-12;
  int newton_max_iter = 30;
  double min_gap = 10.0;     ///< minimal admissible theta_{i+1} - theta_i
};

enum class BumpVariant { PiCrossing, PsiProjected, KBump };

/// A solved pseudo-homoclinic profile.  q_values are unreduced (q runs from
/// near 0 up to near 2*pi*winding); gluing times sit exactly on grid nodes.
struct HomoclinicSolution {
  BumpVariant variant = BumpVariant::PiCrossing;
  std::vector<double> A;        ///< forcing phase offset at t = 0
  std::vector<double> thetas;   ///< crossing times, strictly increasing
  int winding = 1;

  /// Grid in bump-local time: absolute time = grid value + t_offset.
  /// Keeping the grid near the origin preserves exact per-segment uniformity
  /// even when the gluing times are huge.
  std::vector<double> grid;
  double t_offset = 0;
  std::vector<double> q_values;
  std::vector<std::size_t> interface_idx;  ///< grid indices of the thetas
  double alpha = 0;             ///< projection multiplier (PsiProjected only)
  double residual_inf = 0;      ///< independently re-evaluated FD residual
  double tail_decay_rate = 0;   ///< fitted exponential rate of both tails
  bool admissibility_warning = false;  ///< mu outside the smallness regime

  /// Interpolated profile at absolute time t; stencils never cross a
  /// gluing time.
  double q(double t) const;
  double dq(double t) const;

  /// Node range [lo, hi] of the segment containing t (segment boundaries are
  /// the window ends and the gluing times).
  std::pair<std::size_t, std::size_t> segment(double t) const;
};

/// One bump glued at q(theta) = pi; the profile has an O(mu) derivative
/// jump at theta.
HomoclinicSolution solve_one_bump_pi(const SystemParams& params,
                                     const TrigPerturbation& f,
                                     const std::vector<double>& A, double theta,
                                     const BvpSettings& settings = {});

/// One bump with the pi-crossing condition replaced by orthogonality to the
/// translation weight psi0(t - theta): smooth profile, extra unknown alpha.
HomoclinicSolution solve_one_bump_psi(const SystemParams& params,
                                      const TrigPerturbation& f,
                                      const std::vector<double>& A,
                                      double theta,
                                      const BvpSettings& settings = {});

/// k bumps glued at q(theta_i) = (2i - 1) pi, winding up to 2*pi*k.
HomoclinicSolution solve_k_bump(const SystemParams& params,
                                const TrigPerturbation& f,
                                const std::vector<double>& A,
                                const std::vector<double>& thetas,
                                const BvpSettings& settings = {});

}  // namespace driftlab
