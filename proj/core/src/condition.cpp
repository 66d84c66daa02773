#include "driftlab/condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

#include "driftlab/numerics.hpp"
#include "driftlab/pendulum.hpp"
#include "driftlab/splitting.hpp"

namespace driftlab {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> seg_nodes(double lo, double hi, int m) {
  std::vector<double> out;
  if (m < 2) {
    out.push_back((lo + hi) / 2);
    return out;
  }
  for (int i = 0; i < m; ++i) out.push_back(lo + (hi - lo) * i / (m - 1));
  return out;
}

// product grid over [-r, r]^d filtered to the closed euclidean ball
std::vector<Eigen::VectorXd> ball_grid(int d, double r, int m) {
  std::vector<Eigen::VectorXd> out;
  if (d == 0) {
    out.emplace_back(0);
    return out;
  }
  auto nodes = seg_nodes(-r, r, m);
  std::vector<int> idx(d, 0);
  for (;;) {
    Eigen::VectorXd y(d);
    for (int j = 0; j < d; ++j) y[j] = nodes[idx[j]];
    if (y.norm() <= r * (1 + 1e-12)) out.push_back(y);
    int j = 0;
    while (j < d && ++idx[j] == static_cast<int>(nodes.size())) idx[j++] = 0;
    if (j == d) break;
  }
  return out;
}

std::vector<Eigen::VectorXd> annulus_grid(int d, double r_in, double r_out,
                                          int m) {
  std::vector<Eigen::VectorXd> out;
  if (d == 1) {
    for (double s : {-1.0, 1.0})
      for (double v : seg_nodes(r_in, r_out, std::max(3, m / 2))) {
        Eigen::VectorXd y(1);
        y[0] = s * v;
        out.push_back(y);
      }
    return out;
  }
  for (auto& y : ball_grid(d, r_out, m))
    if (y.norm() >= r_in * (1 - 1e-12)) out.push_back(y);
  return out;
}

Eigen::VectorXd join(double a2, const Eigen::VectorXd& y) {
  Eigen::VectorXd x(1 + y.size());
  x[0] = a2;
  x.tail(y.size()) = y;
  return x;
}
}  // namespace

void SplittingBasis::validate(const std::vector<double>& omega) const {
  const int n = static_cast<int>(Omega.rows());
  if (Omega.cols() != n || A_bar.size() != n)
    throw InvalidParams("basis has inconsistent dimensions");
  Eigen::VectorXd w(n);
  for (int j = 0; j < n; ++j) w[j] = omega[j];
  Eigen::VectorXd o1 = Omega.col(0);
  double c = w.dot(o1) / o1.squaredNorm();
  if (c <= 0 || (w - c * o1).norm() > 1e-10 * w.norm())
    throw InvalidParams("omega is not a positive multiple of Omega_1");
  for (int j = 0; j < n; ++j) {
    double len = Omega.col(j).norm();
    if (len < 0.5 - 1e-12 || len > 2 + 1e-12)
      throw InvalidParams("basis column length outside [1/2, 2]");
  }
  if (Omega.determinant() < 0.5 - 1e-12)
    throw InvalidParams("basis determinant below 1/2");
  for (int j = 2; j < n; ++j) {
    for (int i = 0; i < 2; ++i)
      if (std::abs(Omega.col(j).dot(Omega.col(i))) > 1e-10)
        throw InvalidParams("Omega_3.. not orthogonal to Omega_1, Omega_2");
    for (int i = 2; i < j; ++i)
      if (std::abs(Omega.col(j).dot(Omega.col(i))) > 1e-10)
        throw InvalidParams("Omega_3.. not mutually orthogonal");
    if (std::abs(Omega.col(j).norm() - 1.0) > 1e-10)
      throw InvalidParams("Omega_3.. not unit length");
  }
}

SplittingBasis default_splitting_basis(const SystemParams& params) {
  SystemParams p = params.normalized();
  const int n = p.n();
  if (n < 3) throw InvalidParams("adapted basis needs n >= 3");
  SplittingBasis B;
  B.A_bar = Eigen::VectorXd::Zero(n);
  B.Omega = Eigen::MatrixXd::Zero(n, n);
  double s = std::pow(p.eps, p.a + 0.5);
  Eigen::VectorXd beta(n - 1);
  for (int j = 0; j < n - 1; ++j) beta[j] = p.beta[j];
  beta.normalize();
  B.Omega(0, 0) = 1.0;
  B.Omega.col(0).tail(n - 1) = s * beta;
  B.Omega.col(1).tail(n - 1) = beta;
  // complete (0, beta) to (0, orthonormal complement of beta)
  Eigen::MatrixXd Q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(beta).householderQ();
  for (int j = 2; j < n; ++j) {
    Eigen::VectorXd v = Q.col(j - 1);
    if (v.dot(Eigen::VectorXd::Ones(n - 1)) < 0) v = -v;  // fix signs
    B.Omega.col(j).tail(n - 1) = v;
  }
  // orient the frame: flipping the last complement column keeps columns
  // orthonormal while making the determinant positive
  if (B.Omega.determinant() < 0) B.Omega.col(n - 1) *= -1.0;
  return B;
}

bool ConditionParams::valid(std::string* why) const {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!(rho > 0 && sigma > 0 && delta1 > 0 && delta2 > 0 && delta3 > 0))
    return fail("scale parameters must be strictly positive");
  if (!(3 * sigma < rho)) return fail("3 sigma < rho violated");
  if (!(delta2 < delta3)) return fail("delta2 < delta3 violated");
  if (!l1 || !l2) return fail("fast-interval bounds not set");
  return true;
}

ConditionParams default_condition_params(const SystemParams& params) {
  SystemParams p = params.normalized();
  ConditionParams cp;
  cp.rho = kPi * std::pow(p.eps, p.a + 0.5);
  cp.sigma = cp.rho / 6;
  cp.delta1 = cp.delta3 = p.mu * cp.rho * cp.rho / 2;
  cp.delta2 =
      3 * kPi * p.mu / std::sqrt(p.eps) * std::exp(-kPi / (2 * std::sqrt(p.eps)));
  cp.l1 = [](const Eigen::VectorXd&) { return -2 * kPi; };
  cp.l2 = [](const Eigen::VectorXd&) { return 2 * kPi; };
  return cp;
}

double H_in_basis(const GFunction& G, const SplittingBasis& basis,
                  const Eigen::VectorXd& a) {
  Eigen::VectorXd A = basis.A_bar + basis.Omega * a;
  return G(std::vector<double>(A.data(), A.data() + A.size()));
}

SupResult sup_J(const GFunction& G, const SplittingBasis& basis,
                const ConditionParams& cp, const Eigen::VectorXd& x,
                const ConditionGrids& grids) {
  double lo = cp.l1(x), hi = cp.l2(x);
  if (!(lo < hi)) throw InvalidParams("fast interval is empty");
  auto g = [&](double a1) {
    Eigen::VectorXd a(1 + x.size());
    a[0] = a1;
    a.tail(x.size()) = x;
    return H_in_basis(G, basis, a);
  };
  ScalarMax r = grid_golden_max(g, lo, hi, grids.a1_nodes, grids.a1_tol);
  return {r.value, r.x};
}

SplittingConditionCert verify_condition(const GFunction& G,
                                        const SplittingBasis& basis,
                                        const ConditionParams& cp,
                                        const ConditionGrids& grids) {
  SplittingConditionCert cert;
  cert.rho = cp.rho;
  cert.sigma = cp.sigma;
  cert.delta1 = cp.delta1;
  cert.delta2 = cp.delta2;
  cert.delta3 = cp.delta3;
  cert.a1_nodes = grids.a1_nodes;
  cert.x_nodes = grids.x_nodes;
  std::string why;
  cert.params_valid = cp.valid(&why);
  if (!cert.params_valid) {
    cert.failure = "invalid parameters: " + why;
    return cert;
  }
  const int d = static_cast<int>(basis.Omega.rows()) - 1;  // slow dimension
  const int dy = d - 1;
  const double rho = cp.rho, sig = cp.sigma;

  std::map<std::vector<double>, double> cache;
  auto J = [&](const Eigen::VectorXd& x) {
    std::vector<double> key(x.data(), x.data() + x.size());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double v = sup_J(G, basis, cp, x, grids).J;
    cache.emplace(std::move(key), v);
    return v;
  };
  auto H_at = [&](double a1, const Eigen::VectorXd& x) {
    Eigen::VectorXd a(1 + x.size());
    a[0] = a1;
    a.tail(x.size()) = x;
    return H_in_basis(G, basis, a);
  };

  const auto y_ball_rho = ball_grid(dy, rho, grids.x_nodes);
  const auto y_ball_sig = ball_grid(dy, sig, grids.x_nodes);
  const auto y_annulus = annulus_grid(dy, rho - 2 * sig, rho, grids.x_nodes);
  const auto a2_full = seg_nodes(-rho, rho, grids.x_nodes);
  const auto a2_small = seg_nodes(-sig, sig, grids.x_nodes);
  std::vector<double> a2_band;
  for (double v : seg_nodes(rho - 2 * sig, rho, std::max(3, grids.x_nodes / 2))) {
    a2_band.push_back(v);
    a2_band.push_back(-v);
  }

  double inf = std::numeric_limits<double>::infinity();
  cert.margin_i = cert.margin_ii_lower = cert.margin_ii_upper = inf;
  cert.margin_iii_lower = cert.margin_iii_upper = inf;

  // clause (i): the sup beats both endpoint values by delta1
  for (const auto& y : y_ball_rho)
    for (double a2 : a2_full) {
      Eigen::VectorXd x = join(a2, y);
      double ends = std::max(H_at(cp.l1(x), x), H_at(cp.l2(x), x));
      cert.margin_i = std::min(cert.margin_i, J(x) - ends - cp.delta1);
    }
  // clause (ii): profile in a2 at fixed y
  for (const auto& y : y_ball_rho) {
    double J0y = J(join(0.0, y));
    for (double a2 : a2_small)
      cert.margin_ii_lower =
          std::min(cert.margin_ii_lower, J(join(a2, y)) - J0y + cp.delta2 / 2);
    for (double a2 : a2_band)
      cert.margin_ii_upper =
          std::min(cert.margin_ii_upper, J0y - cp.delta2 - J(join(a2, y)));
  }
  // clause (iii): profile in y around the center
  double J00 = J(Eigen::VectorXd::Zero(d));
  for (const auto& y : y_ball_sig)
    for (double a2 : a2_small)
      cert.margin_iii_lower =
          std::min(cert.margin_iii_lower, J(join(a2, y)) - J00 + cp.delta3 / 2);
  for (const auto& y : y_annulus)
    for (double a2 : a2_full)
      cert.margin_iii_upper =
          std::min(cert.margin_iii_upper, J00 - cp.delta3 - J(join(a2, y)));

  cert.passed = cert.margin_i >= 0 && cert.margin_ii_lower >= 0 &&
                cert.margin_ii_upper >= 0 && cert.margin_iii_lower >= 0 &&
                cert.margin_iii_upper >= 0;
  if (!cert.passed) {
    if (cert.margin_i < 0)
      cert.failure = "clause (i): sup does not beat the interval endpoints";
    else if (cert.margin_ii_lower < 0)
      cert.failure = "clause (ii): plateau drop near the center";
    else if (cert.margin_ii_upper < 0)
      cert.failure = "clause (ii): insufficient drop near |a2| = rho";
    else if (cert.margin_iii_lower < 0)
      cert.failure = "clause (iii): plateau drop in the small box";
    else
      cert.failure = "clause (iii): insufficient drop near the y boundary";
  }
  return cert;
}

SplittingConditionCert transfer_condition(const SystemParams& params,
                                          const TrigPerturbation& f,
                                          const SplittingBasis& basis,
                                          const ConditionParams& cp_tilde,
                                          const BvpSettings& settings,
                                          const ConditionGrids& grids) {
  SystemParams p = params.normalized();
  FrequencyVector w = frequency_vector(p);
  double scale = w.norm2 / basis.Omega.col(0).norm();

  auto phase_at = [&, basis](double a1, const Eigen::VectorXd& x) {
    Eigen::VectorXd a(1 + x.size());
    a[0] = a1;
    a.tail(x.size()) = x;
    Eigen::VectorXd A = basis.A_bar + basis.Omega * a;
    return std::vector<double>(A.data(), A.data() + A.size());
  };

  auto k_cache = std::make_shared<std::map<std::vector<double>, double>>();
  auto k_bar = [=, &f](double a1, const Eigen::VectorXd& x) {
    auto A = phase_at(a1, x);
    auto it = k_cache->find(A);
    if (it != k_cache->end()) return it->second;
    auto sol = solve_one_bump_psi(p, f, A, 0.0, settings);
    double tau = 0;
    for (int i = 0; i < 40; ++i) {
      double step = (sol.q(tau) - kPi) / sol.dq(tau);
      tau -= step;
      if (std::abs(step) < 1e-14) break;
    }
    k_cache->emplace(A, tau);
    return tau;
  };

  ConditionParams cp = cp_tilde;
  auto l1t = cp_tilde.l1, l2t = cp_tilde.l2;
  cp.l1 = [=](const Eigen::VectorXd& x) {
    double lt = l1t(x);
    return lt + k_bar(lt, x) * scale;
  };
  cp.l2 = [=](const Eigen::VectorXd& x) {
    double lt = l2t(x);
    return lt + k_bar(lt, x) * scale;
  };

  GFunction G = [&p, &f, settings](const std::vector<double>& A) {
    return homoclinic_G(p, f, A, settings);
  };
  return verify_condition(G, basis, cp, grids);
}

}  // namespace driftlab
