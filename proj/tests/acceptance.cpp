/** Acceptance gate: one numbered criterion per invocation, one PASS/FAIL
 *  line each, nonzero exit on failure.  Criterion 11 is a supplementary
 *  certificate at a smaller eps where the reference scale ordering holds.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "driftlab/bvp.hpp"
#include "driftlab/chain.hpp"
#include "driftlab/condition.hpp"
#include "driftlab/ergodize.hpp"
#include "driftlab/numerics.hpp"
#include "driftlab/pendulum.hpp"
#include "driftlab/splitting.hpp"

using namespace driftlab;

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::vector<double> kGolden = {0.52573111211913360,
                                     0.85065080835203993};

double now_s() {
  static auto t0 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    detail += (detail.empty() ? "" : "; ") + what + (cond ? " [ok]" : " [FAILED]");
  }
};

std::vector<std::vector<double>> random_phases(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<std::vector<double>> out(count, std::vector<double>(3));
  for (auto& A : out)
    for (double& a : A) a = u(rng);
  return out;
}

char buf[256];
std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- Criterion 1: unperturbed exactness -------------------------------
Check criterion1() {
  Check c;
  double t0 = now_s();
  auto s = unperturbed_separatrix(0.0);
  c.require(s.q == kPi, "q(0) = pi exactly");
  c.require(s.p == 2.0, "p(0) = 2 exactly");
  SystemParams p = make_params(0.04, 0.5, 0.0, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  double S = homoclinic_G(p, f, {0, 0, 0});
  c.require(std::abs(S - 8.0) <= 1e-9, fmt("|action - 8| = %.3e <= 1e-9", std::abs(S - 8.0)));
  double wall = now_s() - t0;
  c.require(wall < 1.0, fmt("runtime %.2f s < 1 s", wall));
  return c;
}

// ---- Criterion 2: first-order dual path -------------------------------
Check criterion2() {
  Check c;
  double t0 = now_s();
  double max_diff = 0;
  for (double nu : {0.01, 0.1, 1.0, 5.0, 1.0 / std::sqrt(0.04)}) {
    TrigPerturbation f(1);
    f.set_coeff({1}, {0.5, 0.0});  // cos(phi)
    for (double A : {0.0, 0.7, 2.3, -1.9}) {
      double quad = melnikov_primitive(f, {nu}, {A});
      double closed = 2 * kPi * nu / std::sinh(kPi * nu / 2) * std::cos(A);
      max_diff = std::max(max_diff, std::abs(quad - closed));
    }
  }
  c.require(max_diff <= 1e-10, fmt("max |quadrature - closed| = %.3e <= 1e-10", max_diff));
  c.require(std::abs(sech2_cosine_integral(0.0) - 4.0) == 0.0,
            "zero-frequency limit equals 4");
  double wall = now_s() - t0;
  c.require(wall < 10.0, fmt("runtime %.2f s < 10 s", wall));
  return c;
}

// ---- Criterion 3: invariance identities -------------------------------
Check criterion3() {
  Check c;
  double eps = 0.04, a = 0.5;
  double mu = 0.01 * std::min(std::pow(eps, 1.5), std::pow(eps, 2 * a + 1));
  SystemParams p = make_params(eps, a, mu, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  FrequencyVector w = frequency_vector(p);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uth(-20.0, 20.0);
  double worst1 = 0;
  auto phases = random_phases(20, 42);
  for (const auto& A : phases) {
    double theta = uth(rng);
    auto sol = solve_one_bump_pi(p, f, A, theta, {});
    double F = action_of(p, f, sol);
    // wrap the shift separately: a different representative of the same
    // torus point, so the comparison is not bitwise trivial
    std::vector<double> As(3);
    for (int j = 0; j < 3; ++j)
      As[j] = std::remainder(
          A[j] + std::remainder(w.omega[j] * theta, 2 * kPi), 2 * kPi);
    double G = homoclinic_G(p, f, As);
    worst1 = std::max(worst1, std::abs(F - G));
  }
  c.require(worst1 <= 1e-8,
            fmt("one-bump phase-shift identity: max dev %.3e <= 1e-8", worst1));

  // two-bump version: shifting both gluing times equals shifting the phase
  double worst2 = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto& A = phases[rep];
    double gap = 14.0 + rep, eta = uth(rng) / 10;
    auto s1 = solve_k_bump(p, f, A, {eta, gap + eta}, {});
    std::vector<double> As(3);
    for (int j = 0; j < 3; ++j)
      As[j] = std::remainder(
          A[j] + std::remainder(w.omega[j] * eta, 2 * kPi), 2 * kPi);
    auto s2 = solve_k_bump(p, f, As, {0.0, gap}, {});
    worst2 = std::max(
        worst2, std::abs(action_of(p, f, s1) - action_of(p, f, s2)));
  }
  c.require(worst2 <= 1e-8,
            fmt("two-bump shift invariance: max dev %.3e <= 1e-8", worst2));
  return c;
}

// ---- Criterion 4: reparameterization diffeomorphism -------------------
Check criterion4() {
  Check c;
  SystemParams p = make_params(0.04, 0.5, 1e-3, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  auto phases = random_phases(20, 99);
  std::vector<double> mus = {1e-5, 1e-4, 1e-3};
  std::vector<double> lx, ly;
  for (double mu : mus) {
    SystemParams pm = p;
    pm.mu = mu;
    double kmax = 0;
    for (const auto& A : phases) {
      auto s = compute_psi_mu(pm, f, A);
      kmax = std::max(kmax, std::abs(s.k_mu));
    }
    lx.push_back(std::log(mu));
    ly.push_back(std::log(kmax));
  }
  // residual check at the admissible perturbation size (the regularized
  // functionals agree to second order in mu)
  SystemParams pa = p;
  pa.mu = 8e-5;
  double worst = 0;
  for (const auto& A : phases)
    worst = std::max(worst, compute_psi_mu(pa, f, A).check_residual);
  c.require(worst <= 1e-8,
            fmt("composition residual: max %.3e <= 1e-8 (20 samples)", worst));
  auto fit = fit_line(lx, ly);
  c.require(std::abs(fit.slope - 1.0) <= 0.1,
            fmt("max|k| vs mu slope %.4f within 1.0 +- 0.1", fit.slope));
  return c;
}

// ---- Criterion 5: exponentially small fast oscillation ----------------
Check criterion5() {
  Check c;
  std::vector<double> xs, ys;
  bool factor2 = true;
  for (double eps : {0.09, 0.0625, 0.04}) {
    double mu = 0.01 * std::min(std::pow(eps, 1.5), eps * eps);
    SystemParams p = make_params(eps, 0.5, mu, kGolden);
    TrigPerturbation f = TrigPerturbation::cosine_sum(3);
    std::vector<std::vector<double>> slow = {{0.3, 1.1}, {2.0, -0.7}};
    auto rep = fourier_fast_angle(p, f, slow, 32, {});
    if (!rep.failed_points.empty()) {
      c.require(false, "fast-angle analysis had failed points");
      return c;
    }
    factor2 = factor2 && rep.g1_modulus_mean <= 2 * rep.predicted_g1 &&
              rep.g1_modulus_mean >= rep.predicted_g1 / 2;
    xs.push_back(1.0 / std::sqrt(eps));
    ys.push_back(std::log(rep.g1_modulus_mean / mu));
  }
  auto fit = fit_line(xs, ys);
  double rel = std::abs(fit.slope + kPi / 2) / (kPi / 2);
  c.require(rel <= 0.15,
            fmt("ln|g1/mu| vs 1/sqrt(eps) slope %.5f vs -pi/2 (rel dev %.4f <= 0.15)",
                fit.slope, rel));
  c.require(factor2, "|g1| within a factor 2 of the predicted magnitude");
  return c;
}

// ---- Criterion 6: interaction decay of the sum decomposition ----------
Check criterion6() {
  Check c;
  SystemParams p = make_params(0.04, 0.5, 1.6e-5, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  std::vector<double> A = {0.4, -1.1, 0.8};
  for (int k : {2, 3}) {
    std::vector<double> Ls = {10, 14, 18, 22}, lx, ly;
    bool monotone = true;
    double prev = 1e300;
    for (double L : Ls) {
      std::vector<double> thetas(k);
      for (int i = 0; i < k; ++i) thetas[i] = i * L;
      auto sol = solve_k_bump(p, f, A, thetas, {});
      double Fk = action_of(p, f, sol);
      double sum = 0;
      for (int i = 0; i < k; ++i) {
        auto s1 = solve_one_bump_pi(p, f, A, thetas[i], {});
        sum += action_of(p, f, s1);
      }
      double diff = std::abs(Fk - sum);
      monotone = monotone && diff < prev;
      prev = diff;
      lx.push_back(L);
      ly.push_back(std::log(diff));
    }
    auto fit = fit_line(lx, ly);
    c.require(-fit.slope > 0.5,
              fmt("k=%.0f: fitted decay rate %.3f > 0.5", double(k), -fit.slope));
    c.require(monotone && prev > 1e-12,
              fmt("k=%.0f: decay monotone, smallest gap term %.2e above solver noise",
                  double(k), prev));
  }
  return c;
}

// ---- Criterion 7: splitting-condition certificate ---------------------
Check criterion7() {
  Check c;
  SystemParams p = make_params(0.04, 0.5, 1.6e-5, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  auto basis = default_splitting_basis(p);
  auto cp = default_condition_params(p);
  GFunction G = [&](const std::vector<double>& A) {
    return homoclinic_G_tilde(p, f, A, {});
  };
  auto cert = verify_condition(G, basis, cp, {});
  std::string why;
  cp.valid(&why);
  c.require(cert.passed,
            "certificate at the stated scales (eps = 0.04)" +
                (cert.passed ? std::string()
                             : " -- " + (cert.failure.empty() ? why : cert.failure)));

  SystemParams p0 = p;
  p0.mu = 0.0;
  auto cert0 = verify_condition(G, basis, default_condition_params(p0), {});
  c.require(!cert0.passed, "mu = 0 certificate correctly fails");

  if (cert.params_valid) {
    ConditionGrids fine;
    fine.a1_nodes = 128;
    fine.x_nodes = 33;
    auto cert2 = verify_condition(G, basis, cp, fine);
    double dm = std::abs(cert2.margin_i - cert.margin_i);
    c.require(dm <= 1e-9, fmt("margin drift under grid doubling %.2e <= 1e-9", dm));
  } else {
    c.require(false, "grid-doubling reproducibility unavailable: " + why);
  }
  return c;
}

// ---- Criterion 8: ergodization bound ----------------------------------
Check criterion8() {
  Check c;
  SystemParams p = make_params(0.04, 0.5, 1e-4, kGolden);
  FrequencyVector w = frequency_vector(p);
  auto dio = estimate_gamma(w.omega, 2.5, 20);
  double cmin = 1e300, cmax = 0;
  for (double sigma : {0.2, 0.1, 0.05}) {
    double Te = ergodization_time(w.omega, sigma, {});
    double C = Te * dio.gamma * std::pow(sigma, 2.5) / w.norm2;
    cmin = std::min(cmin, C);
    cmax = std::max(cmax, C);
  }
  c.require(cmax / cmin <= 4.0,
            fmt("fitted constant stable: max/min = %.3f <= 4", cmax / cmin));
  c.require(cmax < 1e6, fmt("bound constant finite (%.3f)", cmax));
  return c;
}

// ---- Criterion 9: end-to-end diffusion run ----------------------------
Check criterion9() {
  Check c;
  double eps = 0.025;
  SystemParams p = make_params(eps, 0.5, 0.9 * 0.05 * eps * eps, kGolden);
  BvpSettings bs;
  bs.nodes_per_unit = 32;
  ChainProblem pr = build_chain_problem(p, 5e-7, 2.5, 20, bs, false);
  c.require(pr.k <= 20, fmt("k = %.0f <= 20", double(pr.k)));
  auto crit = maximize_chain(pr, ChainMode::Fast, {});
  c.require(crit.location == ChainCriticalPoint::Location::Interior,
            "critical point interior to the product domain");
  c.require(crit.gradient_inf <= 1e-7,
            fmt("gradient sup norm %.3e <= 1e-7", crit.gradient_inf));
  auto run = reconstruct_orbit(pr, crit, {});
  double reint = 0;
  for (double e : run.bump_reint_error) reint = std::max(reint, e);
  c.require(reint <= 1e-6,
            fmt("re-integrated bump segments match to %.3e <= 1e-6", reint));
  std::vector<double> dI = pr.dI();
  double drift_err = 0;
  for (int j = 0; j < 3; ++j)
    drift_err = std::hypot(drift_err, run.I_drift[j] - dI[j]);
  c.require(drift_err <= 1e-4,
            fmt("action drift within %.3e <= 1e-4 of the target", drift_err));
  c.require(run.energy_residual <= 1e-6,
            fmt("energy residual %.3e <= 1e-6 (quadrature scale)",
                run.energy_residual));
  c.require(run.T_d <= run.bound_Td,
            fmt("T_d = %.4e <= instantiated bound %.4e", run.T_d, run.bound_Td));
  return c;
}

// ---- Criterion 10: polynomial scaling surrogate -----------------------
// Desk-scale surrogate: the asymptotic constants are non-explicit, so the
// comparison is the fitted log-log slope against the bound's slope.
Check criterion10() {
  Check c;
  SweepConfig sc;  // eps in {0.025, 0.02, 0.016, 0.0125}
  auto table = sweep_epsilon(sc);
  bool all_ok = true;
  for (const auto& r : table.rows) all_ok = all_ok && r.ok;
  c.require(all_ok && table.rows.size() >= 3,
            fmt("%.0f sweep rows all completed", double(table.rows.size())));
  if (!all_ok) return c;
  // R^2 of ln T_d against ln(1/eps)
  std::vector<double> xs, ys;
  for (const auto& r : table.rows) {
    xs.push_back(std::log(1.0 / r.eps));
    ys.push_back(std::log(r.T_d));
  }
  auto fit = fit_line(xs, ys);
  double my = 0;
  for (double v : ys) my += v / ys.size();
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += e * e;
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  double r2 = 1.0 - ss_res / ss_tot;
  c.require(r2 >= 0.95, fmt("log-log fit R^2 = %.5f >= 0.95", r2));
  double dev = std::abs(table.fitted_exponent - table.predicted_exponent);
  c.require(dev <= 1.0,
            fmt("fitted exponent %.3f within +-1 of bound exponent %.3f",
                table.fitted_exponent, table.predicted_exponent));
  return c;
}

// ---- Supplementary: certificate in the valid-scale regime -------------
Check criterion11() {
  Check c;
  SystemParams p = make_params(0.02, 0.5, 0.9 * 0.05 * 0.02 * 0.02, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  auto basis = default_splitting_basis(p);
  auto cp = default_condition_params(p);
  std::string why;
  c.require(cp.valid(&why), "reference scales valid at eps = 0.02");
  GFunction G = [&](const std::vector<double>& A) {
    return homoclinic_G_tilde(p, f, A, {});
  };
  auto cert = verify_condition(G, basis, cp, {});
  c.require(cert.passed, "certificate passes at eps = 0.02" +
                             (cert.passed ? std::string()
                                          : " -- " + cert.failure));
  c.require(cert.margin_i > 0 && cert.margin_ii_lower > 0 &&
                cert.margin_ii_upper > 0 && cert.margin_iii_lower > 0 &&
                cert.margin_iii_upper > 0,
            "all clause margins strictly positive");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..11>\n");
    return 2;
  }
  int n = std::atoi(argv[1]);
  Check (*fns[])() = {criterion1, criterion2, criterion3, criterion4,
                      criterion5, criterion6, criterion7, criterion8,
                      criterion9, criterion10, criterion11};
  if (n < 1 || n > 11) {
    std::fprintf(stderr, "unknown criterion %d\n", n);
    return 2;
  }
  Check c;
  try {
    c = fns[n - 1]();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail += std::string("; exception: ") + e.what();
  }
  std::printf("CRITERION %d: %s  (%s)\n", n, c.ok ? "PASS" : "FAIL",
              c.detail.c_str());
  return c.ok ? 0 : 1;
}
