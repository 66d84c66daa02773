#pragma once
/** \file ergodize.hpp
 *  Quantitative equidistribution of the linear flow t -> t * Omega_1 on the
 *  torus: Diophantine certificates, covering times, and selection of the
 *  transition epochs used by the chain construction.
 */

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace driftlab {

struct ResonanceError : std::runtime_error {
  std::vector<int> witness;
  ResonanceError(const std::string& msg, std::vector<int> k)
      : std::runtime_error(msg), witness(std::move(k)) {}
};

/// Lower bound gamma with |omega . k| >= gamma / |k|_inf^tau verified for all
/// integer vectors 0 < |k|_inf <= K_max (bounded search, not a proof for all k).
struct DiophantineCert {
  std::vector<double> omega;
  double tau = 0;
  double gamma = 0;
  int K_max = 0;
  std::vector<int> witness_k;  ///< harmonic attaining the minimum
  bool bounded_search = true;
};
DiophantineCert estimate_gamma(const std::vector<double>& omega, double tau,
                               int K_max);

struct ErgodizationSettings {
  int probes_per_dim = 17;  ///< probe lattice resolution (n <= 3), else Monte Carlo
  int mc_probes = 4913;     ///< probe count for n > 3
  unsigned seed = 0;
  double dt_override = 0;   ///< 0: dt = min(quarter fast period, sigma / (2 |Omega_1|))
  double t_cap = 1e9;
};

/// First time every probe point of the torus is within sigma (coordinate-wise
/// max distance mod 2 pi) of the orbit t -> t * Omega_1.  Throws if t_cap is
/// reached first.
double ergodization_time(const std::vector<double>& Omega1, double sigma,
                         const ErgodizationSettings& settings = {});

/// Epochs eta_i with eta_i * Omega_1 close (mod 2 pi) to the span of the slow
/// basis columns: eta_i Omega_1 = chi_i = y_i Omega_2 + z_i Omega_3.. mod 2pi
/// with |y_i|, |z_i| < sigma and eta_{i+1} - eta_i >= min_gap.
struct EpochSchedule {
  std::vector<double> eta;
  std::vector<double> y;                  ///< coefficient on Omega_2
  std::vector<Eigen::VectorXd> z;         ///< coefficients on Omega_3..
  double sigma = 0;
  double min_gap = 0;
  double spacing_lo = 0;  ///< certified lower bound on consecutive spacing
  double spacing_hi = 0;  ///< recorded upper bound on consecutive spacing
};

struct EpochSettings {
  double scan_step = 0;   ///< 0: quarter of the fast period
  double t_cap = 1e9;
  double C2 = 64.0;       ///< spacing_hi = min_gap + C2 * |omega| / (gamma sigma^tau)
};

EpochSchedule select_epochs(const Eigen::MatrixXd& Omega, double sigma,
                            int count, double min_gap,
                            const DiophantineCert& dio,
                            const EpochSettings& settings = {});

/// Number of transitions needed to move the action by dI against a splitting
/// of delta3 at scale rho: floor(8 |dI| rho / delta3) + 1.
int transition_count(double dI_norm, double rho, double delta3);

}  // namespace driftlab
