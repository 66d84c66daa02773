#include "driftlab/config.hpp"

#include <fstream>
#include <set>

#include "driftlab/io.hpp"

namespace driftlab {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

TrigPerturbation parse_perturbation(const json& j, int n) {
  check_keys(j, "perturbation", {"preset", "coeffs"});
  if (j.contains("preset")) {
    std::string p = j.at("preset").get<std::string>();
    if (p != "cosine_sum")
      throw ConfigError("unknown perturbation preset '" + p + "'");
    return TrigPerturbation::cosine_sum(n);
  }
  if (!j.contains("coeffs"))
    throw ConfigError("perturbation needs 'preset' or 'coeffs'");
  TrigPerturbation f(n);
  for (const auto& c : j.at("coeffs")) {
    check_keys(c, "perturbation.coeffs[]", {"k", "re", "im"});
    auto k = c.at("k").get<std::vector<int>>();
    f.set_coeff(k, {c.at("re").get<double>(), get_or(c, "im", 0.0)});
  }
  return f;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"schema_version", "system", "perturbation", "solver",
              "condition", "sweep", "ergodize", "chain", "simulate", "mode",
              "seed", "workers"});
  if (!j.contains("schema_version"))
    throw ConfigError("missing key 'schema_version'");
  if (j.at("schema_version").get<std::string>() != kSchemaVersion)
    throw ConfigError("unsupported schema_version");

  ExperimentConfig cfg;
  cfg.raw = j;

  if (!j.contains("system")) throw ConfigError("missing key 'system'");
  const json& sys = j.at("system");
  check_keys(sys, "system",
             {"eps", "a", "mu", "beta", "delta0", "normalize_beta"});
  for (const char* req : {"eps", "a", "mu", "beta"})
    if (!sys.contains(req))
      throw ConfigError(std::string("missing key 'system.") + req + "'");
  cfg.system = make_params(sys.at("eps").get<double>(),
                           sys.at("a").get<double>(),
                           sys.at("mu").get<double>(),
                           sys.at("beta").get<std::vector<double>>(),
                           get_or(sys, "delta0", 0.05),
                           get_or(sys, "normalize_beta", true));

  if (j.contains("perturbation"))
    cfg.perturbation = parse_perturbation(j.at("perturbation"), cfg.system.n());
  else
    cfg.perturbation = TrigPerturbation::cosine_sum(cfg.system.n());

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, "solver",
               {"t_radius", "nodes_per_unit", "newton_tol", "newton_max_iter",
                "min_gap"});
    cfg.solver.t_radius = get_or(s, "t_radius", cfg.solver.t_radius);
    cfg.solver.nodes_per_unit =
        get_or(s, "nodes_per_unit", cfg.solver.nodes_per_unit);
    cfg.solver.newton_tol = get_or(s, "newton_tol", cfg.solver.newton_tol);
    cfg.solver.newton_max_iter =
        get_or(s, "newton_max_iter", cfg.solver.newton_max_iter);
    cfg.solver.min_gap = get_or(s, "min_gap", cfg.solver.min_gap);
  }
  if (j.contains("condition")) {
    const json& c = j.at("condition");
    check_keys(c, "condition", {"a1_nodes", "x_nodes", "a1_tol"});
    cfg.condition.a1_nodes = get_or(c, "a1_nodes", cfg.condition.a1_nodes);
    cfg.condition.x_nodes = get_or(c, "x_nodes", cfg.condition.x_nodes);
    cfg.condition.a1_tol = get_or(c, "a1_tol", cfg.condition.a1_tol);
  }
  if (j.contains("ergodize")) {
    const json& e = j.at("ergodize");
    check_keys(e, "ergodize", {"sigma", "tau", "K_max", "probes_per_dim"});
    cfg.sigma = get_or(e, "sigma", cfg.sigma);
    cfg.tau = get_or(e, "tau", cfg.tau);
    cfg.K_max = get_or(e, "K_max", cfg.K_max);
    cfg.probes_per_dim = get_or(e, "probes_per_dim", cfg.probes_per_dim);
  }
  if (j.contains("chain")) {
    const json& c = j.at("chain");
    check_keys(c, "chain", {"dI_norm", "eta"});
    cfg.dI_norm = get_or(c, "dI_norm", cfg.dI_norm);
    cfg.eta = get_or(c, "eta", cfg.eta);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "sweep",
               {"eps_list", "a", "beta", "mu_margin", "delta0", "dI_norm",
                "tau", "K_max"});
    cfg.sweep.eps_list = get_or(s, "eps_list", cfg.sweep.eps_list);
    cfg.sweep.a = get_or(s, "a", cfg.sweep.a);
    cfg.sweep.beta = get_or(s, "beta", cfg.sweep.beta);
    cfg.sweep.mu_margin = get_or(s, "mu_margin", cfg.sweep.mu_margin);
    cfg.sweep.delta0 = get_or(s, "delta0", cfg.sweep.delta0);
    cfg.sweep.dI_norm = get_or(s, "dI_norm", cfg.sweep.dI_norm);
    cfg.sweep.tau = get_or(s, "tau", cfg.sweep.tau);
    cfg.sweep.K_max = get_or(s, "K_max", cfg.sweep.K_max);
  }
  if (j.contains("simulate")) {
    const json& s = j.at("simulate");
    check_keys(s, "simulate", {"phi", "I", "q", "p", "t_end"});
    cfg.init_phi = get_or(s, "phi", cfg.init_phi);
    cfg.init_I = get_or(s, "I", cfg.init_I);
    cfg.init_q = get_or(s, "q", cfg.init_q);
    cfg.init_p = get_or(s, "p", cfg.init_p);
    cfg.t_end = get_or(s, "t_end", cfg.t_end);
  }
  cfg.mode = get_or(j, "mode", cfg.mode);
  if (cfg.mode != "exact" && cfg.mode != "fast")
    throw ConfigError("mode must be 'exact' or 'fast'");
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.workers = get_or(j, "workers", cfg.workers);
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");

  cfg.sweep.bvp = cfg.solver;
  cfg.mode_I1.bvp = cfg.solver;
  cfg.sweep.rec.eta = cfg.eta;
  cfg.mode_I1.rec.eta = cfg.eta;
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace driftlab
