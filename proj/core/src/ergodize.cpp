#include "driftlab/ergodize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "driftlab/params.hpp"

namespace driftlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

double torus_dist(double x) {  // distance of x to 2 pi Z
  double r = std::abs(std::remainder(x, kTwoPi));
  return r;
}
}  // namespace

DiophantineCert estimate_gamma(const std::vector<double>& omega, double tau,
                               int K_max) {
  const int n = static_cast<int>(omega.size());
  if (n < 1 || K_max < 1 || tau <= 0)
    throw InvalidParams("estimate_gamma: bad arguments");
  DiophantineCert cert;
  cert.omega = omega;
  cert.tau = tau;
  cert.K_max = K_max;
  cert.gamma = std::numeric_limits<double>::infinity();

  std::vector<int> k(n, -K_max);
  for (;;) {
    bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
    if (!zero) {
      double dot = 0;
      int kinf = 0;
      for (int j = 0; j < n; ++j) {
        dot += k[j] * omega[j];
        kinf = std::max(kinf, std::abs(k[j]));
      }
      double ad = std::abs(dot);
      if (ad < 1e-13 * kinf)
        throw ResonanceError("resonant frequency vector", k);
      double prod = ad * std::pow(static_cast<double>(kinf), tau);
      if (prod < cert.gamma) {
        cert.gamma = prod;
        cert.witness_k = k;
      }
    }
    int j = 0;
    while (j < n && ++k[j] > K_max) k[j++] = -K_max;
    if (j == n) break;
  }
  return cert;
}

double ergodization_time(const std::vector<double>& Omega1, double sigma,
                         const ErgodizationSettings& settings) {
  const int n = static_cast<int>(Omega1.size());
  if (n < 1 || sigma <= 0) throw InvalidParams("ergodization_time: bad arguments");
  double wmax = 0;
  for (double v : Omega1) wmax = std::max(wmax, std::abs(v));
  if (wmax == 0) throw InvalidParams("Omega_1 must be nonzero");

  // probe set
  std::vector<std::vector<double>> probes;
  if (n <= 3) {
    int m = settings.probes_per_dim;
    std::vector<int> idx(n, 0);
    for (;;) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j) p[j] = kTwoPi * idx[j] / m;
      probes.push_back(p);
      int j = 0;
      while (j < n && ++idx[j] == m) idx[j++] = 0;
      if (j == n) break;
    }
  } else {
    std::mt19937 rng(settings.seed);
    std::uniform_real_distribution<double> u(0, kTwoPi);
    for (int i = 0; i < settings.mc_probes; ++i) {
      std::vector<double> p(n);
      for (double& v : p) v = u(rng);
      probes.push_back(p);
    }
  }

  double dt = settings.dt_override > 0
                  ? settings.dt_override
                  : std::min(kTwoPi / (4 * wmax), sigma / (2 * wmax));
  std::vector<char> covered(probes.size(), 0);
  std::size_t remaining = probes.size();
  for (double t = 0; t <= settings.t_cap; t += dt) {
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (covered[i]) continue;
      bool hit = true;
      for (int j = 0; j < n; ++j)
        if (torus_dist(Omega1[j] * t - probes[i][j]) >= sigma) {
          hit = false;
          break;
        }
      if (hit) {
        covered[i] = 1;
        if (--remaining == 0) return t;
      }
    }
  }
  throw InvalidParams("ergodization_time: cap reached before full coverage");
}

EpochSchedule select_epochs(const Eigen::MatrixXd& Omega, double sigma,
                            int count, double min_gap,
                            const DiophantineCert& dio,
                            const EpochSettings& settings) {
  const int n = static_cast<int>(Omega.rows());
  if (Omega.cols() != n || n < 3)
    throw InvalidParams("select_epochs: need a square basis, n >= 3");
  if (sigma <= 0 || count < 1 || min_gap <= 0)
    throw InvalidParams("select_epochs: bad arguments");

  Eigen::VectorXd O1 = Omega.col(0);
  double wmax = O1.cwiseAbs().maxCoeff();
  double step = settings.scan_step > 0 ? settings.scan_step
                                       : kTwoPi / (4 * wmax);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Omega);

  // wrapped residual of eta * Omega_1 and its basis coefficients
  auto decompose = [&](double eta, Eigen::VectorXd& coeff) {
    Eigen::VectorXd r(n);
    for (int j = 0; j < n; ++j) r[j] = std::remainder(eta * O1[j], kTwoPi);
    coeff = lu.solve(r);
    return r;
  };

  EpochSchedule sch;
  sch.sigma = sigma;
  sch.min_gap = min_gap;
  double omega_norm = 0;
  for (double v : dio.omega) omega_norm += v * v;
  omega_norm = std::sqrt(omega_norm);
  sch.spacing_lo = min_gap;
  sch.spacing_hi =
      min_gap + settings.C2 * omega_norm /
                    (dio.gamma * std::pow(sigma, dio.tau));

  double eta = min_gap;
  while (static_cast<int>(sch.eta.size()) < count) {
    if (eta > settings.t_cap)
      throw InvalidParams("select_epochs: cap reached before enough epochs");
    Eigen::VectorXd c;
    Eigen::VectorXd r = decompose(eta, c);
    // candidate if the slow coefficients are already small at crude level
    double slow = c.tail(n - 1).cwiseAbs().maxCoeff();
    if (slow < sigma) {
      // cancel the fast component exactly, then re-check
      double eta_adj = eta - c[0];
      Eigen::VectorXd c2;
      decompose(eta_adj, c2);
      double slow2 = c2.tail(n - 1).cwiseAbs().maxCoeff();
      bool gap_ok =
          sch.eta.empty() || eta_adj - sch.eta.back() >= min_gap * (1 - 1e-12);
      if (slow2 < sigma && std::abs(c2[0]) < 1e-9 && gap_ok) {
        sch.eta.push_back(eta_adj);
        sch.y.push_back(c2[1]);
        sch.z.push_back(c2.tail(n - 2));
        eta = eta_adj + min_gap;
        continue;
      }
    }
    eta += step;
  }
  return sch;
}

int transition_count(double dI_norm, double rho, double delta3) {
  if (dI_norm < 0 || rho <= 0 || delta3 <= 0)
    throw InvalidParams("transition_count: bad arguments");
  return static_cast<int>(std::floor(8 * dI_norm * rho / delta3)) + 1;
}

}  // namespace driftlab
