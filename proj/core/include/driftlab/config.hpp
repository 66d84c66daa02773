#pragma once
/** \file config.hpp
 *  Experiment configuration: strict JSON parsing (unknown keys rejected)
 *  shared by the CLI subcommands.
 */

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "driftlab/bvp.hpp"
#include "driftlab/chain.hpp"
#include "driftlab/condition.hpp"
#include "driftlab/params.hpp"

namespace driftlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  SystemParams system;
  TrigPerturbation perturbation{3};
  BvpSettings solver;
  ConditionGrids condition;
  SweepConfig sweep;
  ModeI1Config mode_I1;

  // ergodization / epochs
  double sigma = 0.1;
  double tau = 2.5;
  int K_max = 20;
  int probes_per_dim = 17;

  // chain
  double dI_norm = 5e-7;
  double eta = 1e-3;

  std::string mode = "fast";  ///< "exact" or "fast"
  unsigned seed = 0;
  int workers = 1;

  // simulate subcommand
  std::vector<double> init_phi, init_I;
  double init_q = 0.1, init_p = 0;
  double t_end = 100;

  nlohmann::json raw;  ///< the parsed file, for hashing and manifests
};

/// Parses and validates; throws ConfigError naming any unknown or missing key.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& j);

}  // namespace driftlab
