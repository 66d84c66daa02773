/** Microbenchmarks for the hot paths: one-bump solves, action evaluation,
 *  first-order quadrature, and epoch scanning.
 */

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "driftlab/bvp.hpp"
#include "driftlab/condition.hpp"
#include "driftlab/ergodize.hpp"
#include "driftlab/splitting.hpp"

using namespace driftlab;

namespace {
const std::vector<double> kGolden = {0.52573111211913360,
                                     0.85065080835203993};
const std::vector<double> kPhase = {0.3, -1.1, 0.8};

SystemParams ref_params(double eps = 0.04) {
  return make_params(eps, 0.5, 1.6e-5, kGolden);
}
}  // namespace

static void BM_OneBumpPi(benchmark::State& state) {
  SystemParams p = ref_params();
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  BvpSettings bs;
  bs.nodes_per_unit = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto sol = solve_one_bump_pi(p, f, kPhase, 0.0, bs);
    benchmark::DoNotOptimize(sol.residual_inf);
  }
}
BENCHMARK(BM_OneBumpPi)->Arg(16)->Arg(24)->Arg(32);

static void BM_OneBumpProjected(benchmark::State& state) {
  SystemParams p = ref_params();
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  for (auto _ : state) {
    auto sol = solve_one_bump_psi(p, f, kPhase, 0.0, {});
    benchmark::DoNotOptimize(sol.alpha);
  }
}
BENCHMARK(BM_OneBumpProjected);

static void BM_HomoclinicG(benchmark::State& state) {
  SystemParams p = ref_params();
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(homoclinic_G(p, f, kPhase));
  }
}
BENCHMARK(BM_HomoclinicG);

static void BM_ActionOnly(benchmark::State& state) {
  SystemParams p = ref_params();
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  auto sol = solve_one_bump_pi(p, f, kPhase, 0.0, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(action_of(p, f, sol));
  }
}
BENCHMARK(BM_ActionOnly);

static void BM_MelnikovQuadrature(benchmark::State& state) {
  SystemParams p = ref_params();
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  FrequencyVector w = frequency_vector(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(melnikov_primitive(f, w.omega, kPhase));
  }
}
BENCHMARK(BM_MelnikovQuadrature);

static void BM_MelnikovClosedForm(benchmark::State& state) {
  SystemParams p = ref_params();
  TrigPerturbation f = TrigPerturbation::cosine_sum(3);
  FrequencyVector w = frequency_vector(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(melnikov_cosine_closed_form(f, w.omega, kPhase));
  }
}
BENCHMARK(BM_MelnikovClosedForm);

static void BM_EpochSelection(benchmark::State& state) {
  SystemParams p = ref_params(0.025);
  FrequencyVector w = frequency_vector(p);
  auto basis = default_splitting_basis(p);
  auto dio = estimate_gamma(w.omega, 2.5, 20);
  for (auto _ : state) {
    auto sched = select_epochs(basis.Omega, 0.1, 4, 40.0, dio, {});
    benchmark::DoNotOptimize(sched.eta.back());
  }
}
BENCHMARK(BM_EpochSelection);

BENCHMARK_MAIN();
