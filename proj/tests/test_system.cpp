/** Parameters, forcing polynomial, pendulum closed forms, integrators. */
#include <doctest.h>

#include <cmath>
#include <random>

#include "driftlab/integrate.hpp"
#include "driftlab/params.hpp"
#include "driftlab/pendulum.hpp"

using namespace driftlab;

namespace {
const std::vector<double> kGolden = {0.52573111211913360,
                                     0.85065080835203993};
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_SUITE_BEGIN("system");

TEST_CASE("parameter validation rejects bad inputs") {
  CHECK_THROWS_AS(make_params(0.0, 0.5, 1e-4, kGolden), InvalidParams);
  CHECK_THROWS_AS(make_params(-0.1, 0.5, 1e-4, kGolden), InvalidParams);
  CHECK_THROWS_AS(make_params(0.04, 0.0, 1e-4, kGolden), InvalidParams);
  CHECK_THROWS_AS(make_params(0.04, 0.5, -1e-4, kGolden), InvalidParams);
  CHECK_THROWS_AS(make_params(0.04, 0.5, 1e-4, {0.0}), InvalidParams);
  CHECK_NOTHROW(make_params(0.04, 0.5, 0.0, kGolden));
}

TEST_CASE("admissibility threshold mu <= delta0 eps^{2a+1}") {
  // eps = 0.04, a = 0.5: delta0 * eps^2 = 0.05 * 0.0016 = 8e-5
  CHECK(make_params(0.04, 0.5, 8e-5, kGolden).admissible());
  CHECK_FALSE(make_params(0.04, 0.5, 8.1e-5, kGolden).admissible());
}

TEST_CASE("frequency vector components and norms") {
  SystemParams p = make_params(0.04, 0.5, 1e-4, {3.0, 4.0});
  FrequencyVector w = frequency_vector(p);
  REQUIRE(w.omega.size() == 3);
  CHECK(w.omega[0] == doctest::Approx(5.0).epsilon(1e-14));  // 1/sqrt(0.04)
  // beta normalized to (0.6, 0.8); eps^a = 0.2
  CHECK(w.omega[1] == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(w.omega[2] == doctest::Approx(0.16).epsilon(1e-14));
  CHECK(w.norm_inf == doctest::Approx(5.0));
  CHECK(w.norm2 == doctest::Approx(std::sqrt(25.0 + 0.04)).epsilon(1e-14));
}

TEST_CASE("cosine-sum forcing: value, gradient, sup norm") {
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  std::vector<double> phi = {0.3, -1.2, 2.5};
  double expect = std::cos(phi[0]) + std::cos(phi[1]) + std::cos(phi[2]);
  CHECK(f.value(phi) == doctest::Approx(expect).epsilon(1e-15));
  auto g = f.gradient(phi);
  for (int j = 0; j < 3; ++j)
    CHECK(g[j] == doctest::Approx(-std::sin(phi[j])).epsilon(1e-15));
  // analytic majorant on the slow strip: sum of |2c| e^{|k| width}
  std::vector<double> widths = {0.5, 1.0};
  CHECK(f.sup_norm(widths) ==
        doctest::Approx(1.0 + std::exp(0.5) + std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("generic coefficients match a finite-difference gradient") {
  TrigPerturbation f(2);
  f.set_coeff({1, 0}, {0.5, 0.0});
  f.set_coeff({2, -1}, {0.1, -0.3});
  f.set_coeff({0, 0}, {0.7, 0.0});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> phi = {u(rng), u(rng)};
    auto g = f.gradient(phi);
    const double h = 1e-6;
    for (int j = 0; j < 2; ++j) {
      auto hi = phi, lo = phi;
      hi[j] += h;
      lo[j] -= h;
      double fd = (f.value(hi) - f.value(lo)) / (2 * h);
      CHECK(g[j] == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("separatrix closed form: crossing, energy, symmetry") {
  auto s0 = unperturbed_separatrix(0.0);
  CHECK(s0.q == kPi);  // 4 arctan(1), exact in double
  CHECK(s0.p == 2.0);  // 2 sech(0)
  for (double t : {-30.0, -3.0, -0.4, 0.0, 1.7, 12.0, 200.0}) {
    auto s = unperturbed_separatrix(t, 0.7);
    CHECK(pendulum_energy(s.q, s.p) == doctest::Approx(0.0).epsilon(1e-14));
    auto sm = unperturbed_separatrix(2 * 0.7 - t, 0.7);
    CHECK(s.q + sm.q == doctest::Approx(2 * kPi).epsilon(1e-13));
    CHECK(s.p == doctest::Approx(sm.p).epsilon(1e-13));
  }
  // asymptotics: q -> 0 and 2 pi with rate 1
  CHECK(unperturbed_separatrix(-40.0).q ==
        doctest::Approx(4 * std::exp(-40.0)).epsilon(1e-10));
}

TEST_CASE("psi0 weight: center value, parity, integrability tail") {
  CHECK(psi0(0.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(psi0(1.3) == doctest::Approx(psi0(-1.3)).epsilon(1e-15));
  CHECK(psi0(40.0) == doctest::Approx(std::exp(-40.0) * 4 / 8).epsilon(1e-6));
  CHECK(psi0(1e6) == 0.0);  // guarded against overflow
}

TEST_CASE("full flow conserves the Hamiltonian and the linear angle flow") {
  SystemParams p = make_params(0.04, 0.5, 5e-5, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  FullState s0;
  s0.phi = {0.2, 1.0, -2.0};
  s0.I = {0.0, 0.0, 0.0};
  s0.q = 0.3;
  s0.p = 0.1;
  auto traj = integrate_full(p, f, s0, 0.0, 50.0, {});
  CHECK(traj.energy_drift < 1e-9);
  FrequencyVector w = frequency_vector(p);
  const auto& last = traj.states.back();
  for (int j = 0; j < 3; ++j) {
    double expect =
        std::remainder(s0.phi[j] + w.omega[j] * traj.times.back(), 2 * kPi);
    CHECK(std::abs(std::remainder(last.phi[j] - expect, 2 * kPi)) < 1e-9);
  }
}

TEST_CASE("pendulum flow at mu=0 follows the separatrix") {
  SystemParams p = make_params(0.04, 0.5, 0.0, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  auto s0 = unperturbed_separatrix(-8.0);
  auto traj =
      integrate_pendulum(p, f, {0.0, 0.0, 0.0}, s0.q, s0.p, -8.0, 8.0, {});
  double err = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    auto s = unperturbed_separatrix(traj.times[i]);
    err = std::max(err, std::abs(traj.q[i] - s.q));
  }
  CHECK(err < 1e-8);
}

TEST_SUITE_END();
