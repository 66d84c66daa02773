/** \file main.cpp
 *  driftlab command line: every subcommand reads one JSON config, runs one
 *  module pipeline, and writes JSON (plus CSV where the format is frozen)
 *  into --out together with a manifest carrying the config hash.
 */

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "driftlab/chain.hpp"
#include "driftlab/condition.hpp"
#include "driftlab/config.hpp"
#include "driftlab/ergodize.hpp"
#include "driftlab/integrate.hpp"
#include "driftlab/io.hpp"
#include "driftlab/splitting.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace driftlab;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  int workers = 1;
  std::string mode;
  unsigned long long seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--workers", o.workers, "worker pool size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mode", o.mode, "chain evaluation mode")
      ->check(CLI::IsMember({"exact", "fast"}));
  auto* s = cmd->add_option("--seed", o.seed, "RNG seed override");
  cmd->callback([&o, s] { o.seed_set = s->count() > 0; });
}

ExperimentConfig load(const CommonOpts& o) {
  ExperimentConfig cfg = load_config(o.config_path);
  if (!o.mode.empty()) cfg.mode = o.mode;
  if (o.seed_set) cfg.seed = static_cast<unsigned>(o.seed);
  cfg.workers = o.workers;
  return cfg;
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

/// Emits result.json + manifest.json under out_dir.
void emit(const CommonOpts& o, const ExperimentConfig& cfg, json result,
          double wall_s, const std::string& csv_name = "",
          const std::string& csv = "") {
  fs::create_directories(o.out_dir);
  json manifest = make_manifest(cfg.raw, wall_s);
  result["config_hash"] = manifest["config_hash"];
  write_file(fs::path(o.out_dir) / "result.json", result.dump(2) + "\n");
  write_file(fs::path(o.out_dir) / "manifest.json", manifest.dump(2) + "\n");
  if (!csv_name.empty()) write_file(fs::path(o.out_dir) / csv_name, csv);
}

double wall_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<std::vector<double>> random_phases(const SystemParams& p,
                                               int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  std::vector<std::vector<double>> out(count, std::vector<double>(p.n()));
  for (auto& A : out)
    for (double& a : A) a = u(rng);
  return out;
}

int run_simulate(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  FullState s0;
  s0.phi = cfg.init_phi.empty() ? std::vector<double>(cfg.system.n(), 0.0)
                                : cfg.init_phi;
  s0.I = cfg.init_I.empty() ? std::vector<double>(cfg.system.n(), 0.0)
                            : cfg.init_I;
  s0.q = cfg.init_q;
  s0.p = cfg.init_p;
  IntegrateSettings ist;
  ist.dt_store = cfg.t_end / 2000;
  Trajectory traj =
      integrate_full(cfg.system, cfg.perturbation, s0, 0, cfg.t_end, ist);
  json r;
  r["t_end"] = cfg.t_end;
  r["samples"] = traj.times.size();
  r["energy_drift"] = traj.energy_drift;
  r["final"] = {{"q", traj.states.back().q},
                {"p", traj.states.back().p},
                {"I", traj.states.back().I}};
  emit(o, cfg, r, wall_since(t0), "trajectory.csv", trajectory_csv(traj));
  return 0;
}

int run_homoclinic(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  std::vector<double> A(cfg.system.n(), 0.0);
  auto sol = solve_one_bump_pi(cfg.system, cfg.perturbation, A, 0, cfg.solver);
  auto psi = solve_one_bump_psi(cfg.system, cfg.perturbation, A, 0, cfg.solver);
  json r;
  r["pi_crossing"] = to_json(sol, false);
  r["pi_crossing"]["action"] = action_of(cfg.system, cfg.perturbation, sol);
  r["projected"] = to_json(psi, false);
  r["projected"]["action"] = action_of(cfg.system, cfg.perturbation, psi);
  emit(o, cfg, r, wall_since(t0));
  return 0;
}

int run_splitting(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  const int n = cfg.system.n();
  std::vector<std::vector<double>> slow_grid;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> a(n - 1, 0.0);
    a[0] = -M_PI + 2 * M_PI * i / 8;
    slow_grid.push_back(a);
  }
  SplittingReport rep = fourier_fast_angle(cfg.system, cfg.perturbation,
                                           slow_grid, 32, cfg.solver);
  emit(o, cfg, to_json(rep), wall_since(t0));
  return 0;
}

int run_melnikov(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  FrequencyVector w = frequency_vector(cfg.system);
  auto phases = random_phases(cfg.system, 12, cfg.seed + 7);
  phases.insert(phases.begin(), std::vector<double>(cfg.system.n(), 0.0));
  json rows = json::array();
  double max_diff = 0;
  for (const auto& A : phases) {
    double q = melnikov_primitive(cfg.perturbation, w.omega, A);
    double c = melnikov_cosine_closed_form(cfg.perturbation, w.omega, A);
    max_diff = std::max(max_diff, std::abs(q - c));
    rows.push_back({{"A", A}, {"quadrature", q}, {"closed_form", c}});
  }
  json r;
  r["samples"] = rows;
  r["max_abs_diff"] = max_diff;
  emit(o, cfg, r, wall_since(t0));
  return 0;
}

int run_condition(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  auto basis = default_splitting_basis(cfg.system);
  auto cp = default_condition_params(cfg.system);
  GFunction G = [&](const std::vector<double>& A) {
    return homoclinic_G(cfg.system, cfg.perturbation, A, cfg.solver);
  };
  auto cert = verify_condition(G, basis, cp, cfg.condition);
  emit(o, cfg, to_json(cert), wall_since(t0));
  return 0;
}

int run_ergodize(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  FrequencyVector w = frequency_vector(cfg.system);
  DiophantineCert dio = estimate_gamma(w.omega, cfg.tau, cfg.K_max);
  ErgodizationSettings es;
  es.probes_per_dim = cfg.probes_per_dim;
  es.seed = cfg.seed;
  double Te = ergodization_time(w.omega, cfg.sigma, es);
  json r;
  r["diophantine"] = to_json(dio);
  r["sigma"] = cfg.sigma;
  r["T_e"] = Te;
  r["bound_scale"] = w.norm2 / (dio.gamma * std::pow(cfg.sigma, cfg.tau));
  emit(o, cfg, r, wall_since(t0));
  return 0;
}

int run_chain(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  ChainProblem problem = build_chain_problem(
      cfg.system, cfg.dI_norm, cfg.tau, cfg.K_max, cfg.solver, false);
  ChainMode mode = cfg.mode == "exact" ? ChainMode::Exact : ChainMode::Fast;
  ChainOptSettings opt;
  auto crit = maximize_chain(problem, mode, opt);
  ReconstructSettings rec;
  rec.eta = cfg.eta;
  auto run = reconstruct_orbit(problem, crit, rec);
  json r;
  r["k"] = problem.k;
  r["critical_point"] = to_json(crit);
  r["run"] = to_json(run);
  emit(o, cfg, r, wall_since(t0), "trajectory.csv",
       trajectory_csv(run.orbit));
  return 0;
}

int run_sweep(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  SweepConfig sc = cfg.sweep;
  sc.bvp = cfg.solver;
  SweepTable table = sweep_epsilon(sc);
  emit(o, cfg, to_json(table), wall_since(t0), "sweep.csv",
       sweep_csv(table));
  return 0;
}

int run_mode_I1(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load(o);
  ModeI1Config mc = cfg.mode_I1;
  mc.bvp = cfg.solver;
  auto run = mode_I1_experiment(mc);
  json r = to_json(run);
  r["experimental"] = true;
  emit(o, cfg, r, wall_since(t0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "driftlab: drift-orbit toolkit for three-time-scale Hamiltonian "
      "systems"};
  app.require_subcommand(1);

  CommonOpts o;
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const CommonOpts&);
  };
  const Sub subs[] = {
      {"simulate", "integrate the full Hamiltonian flow", run_simulate},
      {"homoclinic", "solve the one-bump boundary value problems",
       run_homoclinic},
      {"splitting", "fast-angle Fourier analysis of the homoclinic function",
       run_splitting},
      {"melnikov", "first-order splitting: quadrature vs closed form",
       run_melnikov},
      {"condition", "certify the splitting condition on the reference box",
       run_condition},
      {"ergodize", "diophantine estimate and ergodization time", run_ergodize},
      {"chain", "optimize and reconstruct one transition chain", run_chain},
      {"sweep", "diffusion-time scaling sweep over epsilon", run_sweep},
      {"mode-i1", "experimental drift along the fast action axis",
       run_mode_I1},
  };
  int (*selected)(const CommonOpts&) = nullptr;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, o);
    auto fn = s.fn;
    cmd->final_callback([&selected, fn] { selected = fn; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return selected ? selected(o) : 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::ofstream out(fs::path(o.out_dir) / "error.json");
    if (out) out << err.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
