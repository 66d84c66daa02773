/** Homoclinic action functions, Melnikov approximations, fast-angle modes. */
#include <doctest.h>

#include <cmath>
#include <vector>

#include "driftlab/bvp.hpp"
#include "driftlab/params.hpp"
#include "driftlab/splitting.hpp"

using namespace driftlab;

namespace {
const std::vector<double> kGolden = {0.52573111211913360,
                                     0.85065080835203993};
constexpr double kPi = 3.14159265358979323846;
const std::vector<double> kZeroPhase = {0.0, 0.0, 0.0};
}  // namespace

TEST_SUITE_BEGIN("splitting");

TEST_CASE("unperturbed action equals the separatrix value 8") {
  SystemParams p = make_params(0.04, 0.5, 0.0, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  CHECK(homoclinic_G(p, f, kZeroPhase) ==
        doctest::Approx(8.0).epsilon(1e-12));
  CHECK(homoclinic_G_tilde(p, f, kZeroPhase) ==
        doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("sech^2-cosine integral: closed form, limit, decay") {
  CHECK(sech2_cosine_integral(0.0) == 4.0);
  CHECK(sech2_cosine_integral(1e-9) == doctest::Approx(4.0).epsilon(1e-12));
  double nu = 1.7;
  CHECK(sech2_cosine_integral(nu) ==
        doctest::Approx(2 * kPi * nu / std::sinh(kPi * nu / 2))
            .epsilon(1e-14));
  CHECK(sech2_cosine_integral(-nu) == sech2_cosine_integral(nu));
  CHECK(sech2_cosine_integral(5000.0) == 0.0);  // past double underflow
}

TEST_CASE("Melnikov primitive: adaptive quadrature vs per-harmonic sum") {
  SystemParams p = make_params(0.04, 0.5, 1e-4, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  FrequencyVector w = frequency_vector(p);
  for (auto A : {std::vector<double>{0, 0, 0},
                 std::vector<double>{0.9, -2.2, 1.3}}) {
    double quad = melnikov_primitive(f, w.omega, A);
    double closed = melnikov_cosine_closed_form(f, w.omega, A);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-12));
  }
  // at A = 0 the cosine sum integrates harmonic by harmonic
  double per_harmonic = 0;
  for (double nu : w.omega) per_harmonic += sech2_cosine_integral(nu);
  CHECK(melnikov_cosine_closed_form(f, w.omega, kZeroPhase) ==
        doctest::Approx(per_harmonic).epsilon(1e-13));
}

TEST_CASE("first-order response: G - 8 tracks mu times the primitive") {
  SystemParams p = make_params(0.04, 0.5, 3e-6, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  FrequencyVector w = frequency_vector(p);
  std::vector<double> A = {0.4, 1.0, -0.6};
  double G = homoclinic_G(p, f, A);
  double pred = p.mu * melnikov_cosine_closed_form(f, w.omega, A);
  CHECK(G - 8.0 == doctest::Approx(pred).epsilon(1e-4));
}

TEST_CASE("reparameterization sample closes the composition identity") {
  SystemParams p = make_params(0.04, 0.5, 1e-4, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  auto s = compute_psi_mu(p, f, {0.5, -1.0, 2.0});
  CHECK(s.check_residual < 1e-10);
  CHECK(std::abs(s.k_mu) < 10 * p.mu);  // k is O(mu)
  CHECK(s.G_tilde == doctest::Approx(s.G_at_psi).epsilon(1e-10));
}

TEST_CASE("fast-angle modes match the Melnikov modes at small mu") {
  SystemParams p = make_params(0.0625, 0.5, 3.90625e-05, kGolden);
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  std::vector<std::vector<double>> slow = {{0.3, 1.1}};
  auto rep = fourier_fast_angle(p, f, slow, 16, {});
  REQUIRE(rep.failed_points.empty());
  CHECK(rep.g1_modulus_mean ==
        doctest::Approx(rep.predicted_g1).epsilon(1e-3));
  CHECK(std::abs(rep.g1[0]) ==
        doctest::Approx(std::abs(rep.melnikov_g1[0])).epsilon(1e-3));
  CHECK(rep.remainder_inf < 1e-10);
}

TEST_SUITE_END();
