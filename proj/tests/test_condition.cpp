/** Adapted basis, scale parameters, and the splitting-condition verifier. */
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "driftlab/condition.hpp"

using namespace driftlab;

namespace {
const std::vector<double> kGolden = {0.52573111211913360,
                                     0.85065080835203993};
constexpr double kPi = 3.14159265358979323846;

/// Identity-basis analytic model: a localized maximum at the origin with a
/// quadratic drop in the slow coordinates and a cosine profile in the fast
/// one, so every clause margin is known in closed form.
GFunction quadratic_model() {
  return [](const std::vector<double>& A) {
    return 1.0 + 0.1 * std::cos(A[0]) - A[1] * A[1] - A[2] * A[2];
  };
}

SplittingBasis identity_basis() {
  SplittingBasis b;
  b.A_bar = Eigen::VectorXd::Zero(3);
  b.Omega = Eigen::MatrixXd::Identity(3, 3);
  return b;
}

ConditionParams model_params() {
  ConditionParams cp;
  cp.rho = 1.0;
  cp.sigma = 0.04;
  cp.delta1 = 0.05;
  cp.delta2 = 0.005;
  cp.delta3 = 0.008;
  cp.l1 = [](const Eigen::VectorXd&) { return -kPi; };
  cp.l2 = [](const Eigen::VectorXd&) { return kPi; };
  return cp;
}
}  // namespace

TEST_SUITE_BEGIN("condition");

TEST_CASE("reference basis is adapted to the frequency direction") {
  SystemParams p = make_params(0.02, 0.5, 1e-5, kGolden);
  auto b = default_splitting_basis(p);
  FrequencyVector w = frequency_vector(p);
  CHECK_NOTHROW(b.validate(w.omega));
  // first column: (1, eps^{a+1/2} beta)
  CHECK(b.Omega(0, 0) == doctest::Approx(1.0));
  double s = std::pow(0.02, 1.0);
  CHECK(b.Omega(1, 0) == doctest::Approx(s * kGolden[0]).epsilon(1e-12));
  // second column is the slow direction, orthogonal to the third
  CHECK(b.Omega(0, 1) == 0.0);
  CHECK(std::abs(b.Omega.col(1).dot(b.Omega.col(2))) < 1e-14);
  CHECK(b.Omega.col(2).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reference scale parameters: validity across regimes") {
  std::string why;
  // mu = 0 gives zero drops: not a usable certificate
  CHECK_FALSE(default_condition_params(make_params(0.02, 0.5, 0.0, kGolden))
                  .valid(&why));
  // moderately small eps: the exponentially small delta2 undercuts delta3
  CHECK(default_condition_params(make_params(0.02, 0.5, 1e-5, kGolden))
            .valid(&why));
  // eps = 0.04: delta2 exceeds delta3, the scale ordering fails
  auto cp = default_condition_params(make_params(0.04, 0.5, 1e-5, kGolden));
  CHECK_FALSE(cp.valid(&why));
  CHECK(cp.delta2 > cp.delta3);
}

TEST_CASE("sup over the fast interval finds the cosine peak") {
  auto G = quadratic_model();
  auto b = identity_basis();
  auto cp = model_params();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  x[0] = 0.2;
  auto r = sup_J(G, b, cp, x);
  CHECK(r.J == doctest::Approx(1.1 - 0.04).epsilon(1e-10));
  CHECK(std::abs(r.arg_a1) < 1e-6);
}

TEST_CASE("verifier certifies the analytic model with exact margins") {
  auto cert =
      verify_condition(quadratic_model(), identity_basis(), model_params());
  CHECK(cert.params_valid);
  CHECK(cert.passed);
  CHECK(cert.failure.empty());
  // closed-form worst cases of each clause
  CHECK(cert.margin_i == doctest::Approx(0.2 - 0.05).epsilon(1e-8));
  CHECK(cert.margin_ii_lower ==
        doctest::Approx(0.0025 - 0.0016).epsilon(1e-6));
  CHECK(cert.margin_ii_upper ==
        doctest::Approx(0.92 * 0.92 - 0.005).epsilon(1e-6));
  CHECK(cert.margin_iii_lower ==
        doctest::Approx(0.004 - 2 * 0.0016).epsilon(1e-6));
}

TEST_CASE("verifier reports the first violated clause") {
  auto cp = model_params();
  cp.delta2 = 0.002;  // now sigma^2 > delta2 / 2: clause (ii) must fail
  auto cert = verify_condition(quadratic_model(), identity_basis(), cp);
  CHECK(cert.params_valid);
  CHECK_FALSE(cert.passed);
  CHECK(cert.margin_ii_lower < 0);
  CHECK(cert.failure.find("ii") != std::string::npos);
}

TEST_CASE("invalid scale parameters short-circuit the verifier") {
  auto cp = model_params();
  cp.delta3 = 0.0;
  auto cert = verify_condition(quadratic_model(), identity_basis(), cp);
  CHECK_FALSE(cert.params_valid);
  CHECK_FALSE(cert.passed);
}

TEST_SUITE_END();
