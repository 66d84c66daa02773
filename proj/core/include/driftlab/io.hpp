#pragma once
/** \file io.hpp
 *  JSON/CSV serialization of results with a frozen schema, plus the
 *  config-hash and run-manifest helpers used by the CLI.
 */

#include <nlohmann/json.hpp>

#include <string>

#include "driftlab/chain.hpp"
#include "driftlab/condition.hpp"
#include "driftlab/ergodize.hpp"
#include "driftlab/integrate.hpp"
#include "driftlab/splitting.hpp"

namespace driftlab {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json to_json(const SystemParams& p);
nlohmann::json to_json(const FrequencyVector& w);
nlohmann::json to_json(const Trajectory& t);
nlohmann::json to_json(const HomoclinicSolution& s, bool include_profile = true);
nlohmann::json to_json(const PsiMuSample& s);
nlohmann::json to_json(const SplittingReport& r);
nlohmann::json to_json(const SplittingConditionCert& c);
nlohmann::json to_json(const DiophantineCert& c);
nlohmann::json to_json(const EpochSchedule& s);
nlohmann::json to_json(const ChainCriticalPoint& c);
nlohmann::json to_json(const DiffusionRun& r);
nlohmann::json to_json(const SweepTable& t);

/// CSV with frozen column order: eps,mu,k,T_d,bound_Td,ok,failure
std::string sweep_csv(const SweepTable& t);
/// CSV with frozen column order: t,q,p followed by phi_j and I_j columns
std::string trajectory_csv(const Trajectory& t);

/// FNV-1a 64-bit hash of a canonical (sorted-key, fixed-precision) dump.
std::string config_hash(const nlohmann::json& config);

/// Run manifest: schema/tool versions, config hash, wall time.
nlohmann::json make_manifest(const nlohmann::json& config, double wall_time_s);

}  // namespace driftlab
