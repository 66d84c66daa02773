#pragma once
/** \file chain.hpp
 *  Heteroclinic chains: the k-bump action functional, its finite-dimensional
 *  reduction over the transition epochs, maximization, orbit reconstruction
 *  with drift diagnostics, and the epsilon sweep experiment.
 */

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "driftlab/bvp.hpp"
#include "driftlab/condition.hpp"
#include "driftlab/ergodize.hpp"
#include "driftlab/integrate.hpp"
#include "driftlab/params.hpp"

namespace driftlab {

struct ChainProblem {
  SystemParams params;
  TrigPerturbation f{1};
  std::vector<double> I0, I0_prime;  ///< initial / target actions, length n
  SplittingBasis basis;
  ConditionParams cp;
  EpochSchedule schedule;
  int k = 1;                          ///< number of bumps
  BvpSettings bvp;
  DiophantineCert dio;
  bool pace_by_delta2 = false;  ///< drift paced by delta2 (fast-axis mode)

  std::vector<double> dI() const;     ///< I0_prime - I0
  double dI_norm() const;
};

enum class ChainMode { Exact, Fast };

/// F^k(A, thetas) = action of the k-bump profile minus dI . A
/// (A unreduced so winding of the phases matters).
double heteroclinic_Fk(const ChainProblem& problem, const std::vector<double>& A,
                       const std::vector<double>& thetas);

/// Reduced functional over slow coordinates a = (a_2..a_n) and epoch offsets
/// s = (s_1..s_k), with the fast coordinate fixed to 0.
/// Exact: one k-bump solve at the reconstructed gluing times.
/// Fast: sum of independent one-bump terms at the shifted phases (the
/// interaction terms decay like exp(-gap) and are dropped).
double reduced_Hk(const ChainProblem& problem, const Eigen::VectorXd& a_slow,
                  const std::vector<double>& s, ChainMode mode);

struct ChainOptSettings {
  int max_sweeps = 30;
  int grid_nodes = 33;      ///< 1D scan resolution per coordinate
  double x_tol = 1e-11;     ///< golden-section tolerance
  double value_tol = 0;     ///< 0: auto (delta3 * 1e-8)
  double fd_step_s = 1e-5;  ///< central-difference steps for the gradient
  double fd_step_a = 0;     ///< 0: auto (rho * 1e-4)
  double boundary_tol = 0;  ///< 0: auto (rho * 1e-6)
};

struct ChainCriticalPoint {
  Eigen::VectorXd a_slow;
  std::vector<double> s;
  double value = 0;
  double gradient_inf = 0;
  enum class Location { Interior, Boundary, Undecided };
  Location location = Location::Undecided;
  std::string violated_constraint;  ///< nonempty when on/near the boundary
  double box_distance = 0;          ///< min distance to the domain boundary
  int sweeps = 0;
};

/// Coordinate-ascent maximization of reduced_Hk over the product domain
/// s_i in [l1, l2], |a_2 + y_i| <= rho, |(a_3.. ) + z_i| <= rho.
ChainCriticalPoint maximize_chain(const ChainProblem& problem, ChainMode mode,
                                  const ChainOptSettings& settings = {});

struct DiffusionRun {
  std::vector<double> A;       ///< common phase offset of the chain
  std::vector<double> thetas;  ///< reconstructed gluing times
  Trajectory orbit;            ///< sampled pseudo-orbit (bump windows only)
  double T_d = 0;              ///< drift time between eta-neighborhood exits
  double bound_Td = 0;         ///< instantiated drift-time bound
  double eta_neighborhood = 0;
  std::vector<double> I_drift;      ///< measured action change, length n
  double I_drift_norm = 0;
  double dI_requested = 0;
  std::vector<double> bump_reint_error;  ///< per-bump re-integration sup error
  double energy_residual = 0;  ///< max Hamiltonian drift within any smooth
                               ///< segment (references reset at gluing kinks)
  bool experimental = false;
};

struct ReconstructSettings {
  double eta = 1e-3;
  double C_shadow = 8.0;       ///< constant of the drift-time bound
  double reint_half_width = 6; ///< re-integration window around each bump
  int store_stride = 2;        ///< orbit sample thinning
};

DiffusionRun reconstruct_orbit(const ChainProblem& problem,
                               const ChainCriticalPoint& crit,
                               const ReconstructSettings& settings = {});

struct SweepConfig {
  std::vector<double> eps_list{0.025, 0.02, 0.016, 0.0125};
  double a = 0.5;
  std::vector<double> beta{0.52573111211913360, 0.85065080835203993};
  double mu_margin = 0.9;   ///< mu = mu_margin * delta0 * eps^{2a+1}
  double delta0 = 0.05;
  double dI_norm = 5e-7;
  double tau = 2.5;
  int K_max = 20;
  BvpSettings bvp;
  ChainOptSettings opt;
  ReconstructSettings rec;
};

struct SweepRow {
  double eps = 0, mu = 0;
  int k = 0;
  double T_d = 0, bound_Td = 0;
  bool ok = false;
  std::string failure;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double fitted_exponent = 0;     ///< slope of ln T_d vs ln(1/eps)
  double predicted_exponent = 0;  ///< slope of ln bound vs ln(1/eps)
};

SweepTable sweep_epsilon(const SweepConfig& config);

/// Experimental drift along the fast action axis, paced by the exponentially
/// small splitting delta2 instead of delta3.  Refuses (throws InvalidParams,
/// message contains the required k) when more than k_cap bumps are needed.
struct ModeI1Config {
  double eps = 0.25;
  double a = 0.5;
  std::vector<double> beta{0.52573111211913360, 0.85065080835203993};
  double mu_margin = 0.9;
  double delta0 = 0.05;
  double dI_norm = 0;  ///< 0: auto (scaled so ~5 bumps suffice)
  double tau = 2.5;
  int K_max = 20;
  int k_cap = 200;
  BvpSettings bvp;
  ChainOptSettings opt;
  ReconstructSettings rec;
};
DiffusionRun mode_I1_experiment(const ModeI1Config& config);

/// Helper shared by the pipelines: assemble the full chain problem from
/// system parameters (cosine forcing, default basis and scales, epochs).
ChainProblem build_chain_problem(const SystemParams& params, double dI_norm,
                                 double tau, int K_max,
                                 const BvpSettings& bvp, bool pace_by_delta2,
                                 int k_cap = 0);

}  // namespace driftlab
