#include "driftlab/splitting.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "driftlab/numerics.hpp"
#include "driftlab/pendulum.hpp"

namespace driftlab {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 5> kGaussX = {
    -0.9061798459386639928, -0.5384693101056830910, 0.0,
    0.5384693101056830910, 0.9061798459386639928};
constexpr std::array<double, 5> kGaussW = {
    0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
    0.4786286704993664680, 0.2369268850561890875};

std::vector<double> forcing_phase(const FrequencyVector& w,
                                  const std::vector<double>& A, double t) {
  std::vector<double> phi(A.size());
  for (std::size_t j = 0; j < A.size(); ++j)
    phi[j] = std::remainder(w.omega[j] * t + A[j], 2 * kPi);
  return phi;
}

}  // namespace

double action_of(const SystemParams& params, const TrigPerturbation& f,
                 const HomoclinicSolution& sol) {
  SystemParams p = params.normalized();
  FrequencyVector w = frequency_vector(p);
  const auto& t = sol.grid;  // bump-local time
  const auto& qv = sol.q_values;
  const std::size_t N = t.size();
  std::vector<double> A_eff(sol.A.size());
  for (std::size_t j = 0; j < A_eff.size(); ++j)
    A_eff[j] =
        std::remainder(w.omega[j] * sol.t_offset + sol.A[j], 2 * kPi);

  // segment boundaries: window ends plus gluing nodes
  std::vector<std::size_t> segb;
  segb.push_back(0);
  for (std::size_t k : sol.interface_idx) segb.push_back(k);
  segb.push_back(N - 1);

  double S = 0;
  std::vector<double> nodes(7);
  for (std::size_t s = 0; s + 1 < segb.size(); ++s) {
    const std::size_t a = segb[s], b = segb[s + 1];
    // interior intervals of a uniform segment share their stencil geometry;
    // cache the value/derivative weights at the five Gauss points once
    const double h = t[a + 1] - t[a];
    std::array<std::array<double, 7>, 5> c0u{}, c1u{};
    if (b - a >= 7) {
      for (int i = 0; i < 7; ++i) nodes[i] = i * h;
      for (int g = 0; g < 5; ++g) {
        double tg = 2 * h + h * (1 + kGaussX[g]) / 2;
        auto v0 = fd_weights(tg, nodes, 0);
        auto v1 = fd_weights(tg, nodes, 1);
        for (int i = 0; i < 7; ++i) {
          c0u[g][i] = v0[i];
          c1u[g][i] = v1[i];
        }
      }
    }
    for (std::size_t k = a; k < b; ++k) {
      std::size_t lo = k >= a + 2 ? k - 2 : a;
      if (lo + 7 > b + 1) lo = b + 1 >= 7 + a ? b - 6 : a;
      std::size_t cnt = std::min<std::size_t>(7, b + 1 - lo);
      const bool uniform_interior = cnt == 7 && lo == k - 2;
      double mid = (t[k] + t[k + 1]) / 2, half = (t[k + 1] - t[k]) / 2;
      for (int g = 0; g < 5; ++g) {
        double tg = mid + half * kGaussX[g];
        double q = 0, dq = 0;
        if (uniform_interior) {
          for (std::size_t i = 0; i < 7; ++i) {
            q += c0u[g][i] * qv[lo + i];
            dq += c1u[g][i] * qv[lo + i];
          }
        } else {
          std::vector<double> nd(t.begin() + lo, t.begin() + lo + cnt);
          auto c0 = fd_weights(tg, nd, 0);
          auto c1 = fd_weights(tg, nd, 1);
          for (std::size_t i = 0; i < cnt; ++i) {
            q += c0[i] * qv[lo + i];
            dq += c1[i] * qv[lo + i];
          }
        }
        double fv = f.value(forcing_phase(w, A_eff, tg));
        double sh = std::sin(q / 2);
        double L = dq * dq / 2 + 2 * sh * sh * (1 + p.mu * fv);
        S += half * kGaussW[g] * L;
      }
    }
  }
  // tails: q ~ c e^{t} on the left, 2 pi k - q ~ c e^{-t} on the right, so
  // each truncated tail integral equals (residual amplitude)^2 / 2
  double ql = qv.front();
  double qr = 2 * kPi * sol.winding - qv.back();
  S += ql * ql / 2 + qr * qr / 2;
  return S;
}

double action_one_bump(const SystemParams& params, const TrigPerturbation& f,
                       const HomoclinicSolution& sol) {
  return action_of(params, f, sol);
}

double homoclinic_G(const SystemParams& params, const TrigPerturbation& f,
                    const std::vector<double>& A, const BvpSettings& settings) {
  auto sol = solve_one_bump_pi(params, f, A, 0.0, settings);
  return action_of(params, f, sol);
}

double homoclinic_G_tilde(const SystemParams& params, const TrigPerturbation& f,
                          const std::vector<double>& A,
                          const BvpSettings& settings) {
  auto sol = solve_one_bump_psi(params, f, A, 0.0, settings);
  return action_of(params, f, sol);
}

PsiMuSample compute_psi_mu(const SystemParams& params,
                           const TrigPerturbation& f,
                           const std::vector<double>& A,
                           const BvpSettings& settings) {
  auto sol = solve_one_bump_psi(params, f, A, 0.0, settings);
  PsiMuSample out;
  out.G_tilde = action_of(params, f, sol);
  // Newton for the pi crossing nearest 0 (dq ~ 2 there)
  double tau = 0;
  for (int it = 0; it < 40; ++it) {
    double r = sol.q(tau) - kPi;
    double d = sol.dq(tau);
    double step = r / d;
    tau -= step;
    if (std::abs(step) < 1e-14) break;
  }
  out.k_mu = tau;
  FrequencyVector w = frequency_vector(params.normalized());
  std::vector<double> A_shift(A);
  for (std::size_t j = 0; j < A.size(); ++j) A_shift[j] += tau * w.omega[j];
  out.G_at_psi = homoclinic_G(params, f, A_shift, settings);
  out.check_residual = std::abs(out.G_tilde - out.G_at_psi);
  return out;
}

double sech2_cosine_integral(double nu) {
  double x = std::abs(nu);
  if (x < 1e-5) {
    // 2 pi nu / sinh(pi nu / 2) = 4 / (1 + (pi nu / 2)^2 / 6 + ...)
    double u = kPi * x / 2;
    return 4.0 / (1 + u * u / 6 + u * u * u * u / 120);
  }
  if (x > 1400 / kPi) return 0.0;  // sinh overflows; the value underflows
  return 2 * kPi * x / std::sinh(kPi * x / 2);
}

double melnikov_primitive(const TrigPerturbation& f,
                          const std::vector<double>& omega,
                          const std::vector<double>& A) {
  auto integrand = [&](double t) {
    std::vector<double> phi(A.size());
    for (std::size_t j = 0; j < A.size(); ++j)
      phi[j] = std::remainder(omega[j] * t + A[j], 2 * kPi);
    double c = std::cosh(t);
    return 2.0 / (c * c) * f.value(phi);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, -40.0, 40.0, 12, 1e-13);
}

double melnikov_primitive(const SystemParams& params, const TrigPerturbation& f,
                          const std::vector<double>& A) {
  return melnikov_primitive(f, frequency_vector(params).omega, A);
}

double melnikov_cosine_closed_form(const TrigPerturbation& f,
                                   const std::vector<double>& omega,
                                   const std::vector<double>& A) {
  double out = 0;
  for (const auto& [k, c] : f.coeffs()) {
    double nu = 0, kA = 0;
    bool zero = true;
    for (std::size_t j = 0; j < omega.size(); ++j) {
      nu += k[j] * omega[j];
      kA += k[j] * A[j];
      if (k[j] != 0) zero = false;
    }
    double Fnu = sech2_cosine_integral(nu);
    if (zero)
      out += c.real() * 4.0;
    else
      out += 2.0 * (c.real() * std::cos(kA) - c.imag() * std::sin(kA)) * Fnu;
  }
  return out;
}

SplittingReport fourier_fast_angle(
    const SystemParams& params, const TrigPerturbation& f,
    const std::vector<std::vector<double>>& slow_grid, int M,
    const BvpSettings& settings) {
  SystemParams p = params.normalized();
  FrequencyVector w = frequency_vector(p);
  SplittingReport rep;
  rep.slow_grid = slow_grid;
  rep.M = M;
  rep.predicted_g1 =
      p.mu * kPi / (std::sqrt(p.eps) * std::sinh(kPi / (2 * std::sqrt(p.eps))));

  BvpSettings st = settings;
  if (rep.predicted_g1 > 0)
    st.newton_tol = std::min(st.newton_tol, rep.predicted_g1 / 100);

  for (std::size_t s = 0; s < slow_grid.size(); ++s) {
    const auto& A2 = slow_grid[s];
    std::vector<double> samples(M), mel(M);
    bool failed = false;
    for (int m = 0; m < M; ++m) {
      std::vector<double> A(p.n());
      A[0] = 2 * kPi * m / M;
      for (int j = 1; j < p.n(); ++j) A[j] = A2[j - 1];
      try {
        samples[m] = homoclinic_G_tilde(p, f, A, st);
      } catch (const SolverError&) {
        failed = true;
        break;
      }
      mel[m] = p.mu * melnikov_cosine_closed_form(f, w.omega, A);
    }
    if (failed) {
      rep.failed_points.push_back(s);
      rep.g0.push_back(0);
      rep.g1.emplace_back(0, 0);
      rep.melnikov_g0.push_back(0);
      rep.melnikov_g1.emplace_back(0, 0);
      continue;
    }
    auto mode = [&](const std::vector<double>& v, int kmode) {
      std::complex<double> acc = 0;
      for (int m = 0; m < M; ++m)
        acc += v[m] * std::exp(std::complex<double>(0, -kmode * 2 * kPi * m / M));
      return acc / static_cast<double>(M);
    };
    double g0 = mode(samples, 0).real();
    std::complex<double> g1 = mode(samples, 1);
    rep.g0.push_back(g0);
    rep.g1.push_back(g1);
    rep.melnikov_g0.push_back(mode(mel, 0).real());
    rep.melnikov_g1.push_back(mode(mel, 1));
    for (int m = 0; m < M; ++m) {
      double recon =
          g0 + 2 * (g1 * std::exp(std::complex<double>(0, 2 * kPi * m / M)))
                       .real();
      rep.remainder_inf =
          std::max(rep.remainder_inf, std::abs(samples[m] - recon));
    }
  }
  double acc = 0;
  int cnt = 0;
  for (std::size_t s = 0; s < rep.g1.size(); ++s) {
    if (std::find(rep.failed_points.begin(), rep.failed_points.end(), s) !=
        rep.failed_points.end())
      continue;
    acc += std::abs(rep.g1[s]);
    ++cnt;
  }
  rep.g1_modulus_mean = cnt ? acc / cnt : 0.0;
  return rep;
}

}  // namespace driftlab
