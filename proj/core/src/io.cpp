#include "driftlab/io.hpp"

#include <cstdint>
#include <iomanip>
#include <sstream>

namespace driftlab {

using nlohmann::json;

json to_json(const SystemParams& p) {
  return json{{"eps", p.eps},       {"a", p.a},
              {"mu", p.mu},         {"beta", p.beta},
              {"delta0", p.delta0}, {"normalize_beta", p.normalize_beta}};
}

json to_json(const FrequencyVector& w) {
  return json{{"omega", w.omega}, {"norm2", w.norm2}, {"norm_inf", w.norm_inf}};
}

json to_json(const Trajectory& t) {
  json states = json::array();
  for (const auto& s : t.states)
    states.push_back(
        json{{"phi", s.phi}, {"I", s.I}, {"q", s.q}, {"p", s.p}});
  return json{{"times", t.times},
              {"states", states},
              {"energy_drift", t.energy_drift}};
}

json to_json(const HomoclinicSolution& s, bool include_profile) {
  json j{{"variant", s.variant == BumpVariant::PiCrossing  ? "pi_crossing"
                     : s.variant == BumpVariant::PsiProjected ? "projected"
                                                              : "k_bump"},
         {"A", s.A},
         {"thetas", s.thetas},
         {"winding", s.winding},
         {"alpha", s.alpha},
         {"residual_inf", s.residual_inf},
         {"tail_decay_rate", s.tail_decay_rate},
         {"admissibility_warning", s.admissibility_warning}};
  if (include_profile) {
    j["grid"] = s.grid;
    j["q_values"] = s.q_values;
  }
  return j;
}

json to_json(const PsiMuSample& s) {
  return json{{"k_mu", s.k_mu},
              {"G_tilde", s.G_tilde},
              {"G_at_psi", s.G_at_psi},
              {"check_residual", s.check_residual}};
}

json to_json(const SplittingReport& r) {
  auto cplx = [](const std::vector<std::complex<double>>& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back(json{{"re", c.real()}, {"im", c.imag()}});
    return out;
  };
  return json{{"slow_grid", r.slow_grid},
              {"M", r.M},
              {"g0", r.g0},
              {"g1", cplx(r.g1)},
              {"melnikov_g0", r.melnikov_g0},
              {"melnikov_g1", cplx(r.melnikov_g1)},
              {"g1_modulus_mean", r.g1_modulus_mean},
              {"predicted_g1", r.predicted_g1},
              {"remainder_inf", r.remainder_inf},
              {"failed_points", r.failed_points}};
}

json to_json(const SplittingConditionCert& c) {
  return json{{"passed", c.passed},
              {"params_valid", c.params_valid},
              {"failure", c.failure},
              {"rho", c.rho},
              {"sigma", c.sigma},
              {"delta1", c.delta1},
              {"delta2", c.delta2},
              {"delta3", c.delta3},
              {"margin_i", c.margin_i},
              {"margin_ii_lower", c.margin_ii_lower},
              {"margin_ii_upper", c.margin_ii_upper},
              {"margin_iii_lower", c.margin_iii_lower},
              {"margin_iii_upper", c.margin_iii_upper},
              {"a1_nodes", c.a1_nodes},
              {"x_nodes", c.x_nodes}};
}

json to_json(const DiophantineCert& c) {
  return json{{"omega", c.omega},       {"tau", c.tau},
              {"gamma", c.gamma},       {"K_max", c.K_max},
              {"witness_k", c.witness_k}, {"bounded_search", c.bounded_search}};
}

json to_json(const EpochSchedule& s) {
  json z = json::array();
  for (const auto& v : s.z)
    z.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return json{{"eta", s.eta},
              {"y", s.y},
              {"z", z},
              {"sigma", s.sigma},
              {"min_gap", s.min_gap},
              {"spacing_lo", s.spacing_lo},
              {"spacing_hi", s.spacing_hi}};
}

json to_json(const ChainCriticalPoint& c) {
  return json{
      {"a_slow",
       std::vector<double>(c.a_slow.data(), c.a_slow.data() + c.a_slow.size())},
      {"s", c.s},
      {"value", c.value},
      {"gradient_inf", c.gradient_inf},
      {"location", c.location == ChainCriticalPoint::Location::Interior
                       ? "interior"
                       : c.location == ChainCriticalPoint::Location::Boundary
                             ? "boundary"
                             : "undecided"},
      {"violated_constraint", c.violated_constraint},
      {"box_distance", c.box_distance},
      {"sweeps", c.sweeps}};
}

json to_json(const DiffusionRun& r) {
  return json{{"A", r.A},
              {"thetas", r.thetas},
              {"T_d", r.T_d},
              {"bound_Td", r.bound_Td},
              {"eta_neighborhood", r.eta_neighborhood},
              {"I_drift", r.I_drift},
              {"I_drift_norm", r.I_drift_norm},
              {"dI_requested", r.dI_requested},
              {"bump_reint_error", r.bump_reint_error},
              {"energy_residual", r.energy_residual},
              {"experimental", r.experimental},
              {"orbit_samples", r.orbit.times.size()}};
}

json to_json(const SweepTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back(json{{"eps", r.eps},
                        {"mu", r.mu},
                        {"k", r.k},
                        {"T_d", r.T_d},
                        {"bound_Td", r.bound_Td},
                        {"ok", r.ok},
                        {"failure", r.failure}});
  return json{{"rows", rows},
              {"fitted_exponent", t.fitted_exponent},
              {"predicted_exponent", t.predicted_exponent}};
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "eps,mu,k,T_d,bound_Td,ok,failure\n";
  for (const auto& r : t.rows) {
    std::string failure = r.failure;
    for (char& c : failure)
      if (c == ',' || c == '\n') c = ';';
    os << r.eps << ',' << r.mu << ',' << r.k << ',' << r.T_d << ','
       << r.bound_Td << ',' << (r.ok ? 1 : 0) << ',' << failure << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t n = t.states.empty() ? 0 : t.states[0].phi.size();
  os << "t,q,p";
  for (std::size_t j = 0; j < n; ++j) os << ",phi_" << j + 1;
  for (std::size_t j = 0; j < n; ++j) os << ",I_" << j + 1;
  os << '\n';
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    const auto& s = t.states[i];
    os << t.times[i] << ',' << s.q << ',' << s.p;
    for (std::size_t j = 0; j < n; ++j) os << ',' << s.phi[j];
    for (std::size_t j = 0; j < n; ++j) os << ',' << s.I[j];
    os << '\n';
  }
  return os.str();
}

std::string config_hash(const json& config) {
  // json::dump emits object keys in sorted order, giving a canonical form
  std::string canon = config.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json make_manifest(const json& config, double wall_time_s) {
  return json{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"config_hash", config_hash(config)},
              {"wall_time_s", wall_time_s}};
}

}  // namespace driftlab
