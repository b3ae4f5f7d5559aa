#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace harnack::experiments {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitNumericalFailure = 3;

/// The JSON schema every config is validated against before any compute.
nlohmann::ordered_json config_schema();

/// Diagnostics are empty when the config is valid. Unknown keys anywhere in
/// the config are rejected.
std::vector<std::string> validate_config(const nlohmann::json& config);

/// Execute one experiment config, writing report/series artifacts and a
/// manifest.json into out_dir. Returns an exit status per the contract:
/// 0 success, 2 invalid config, 3 numerical failure.
int run_experiment(nlohmann::json config, const std::filesystem::path& out_dir,
                   std::ostream& log, bool quiet = false);

/// Parameter sweep: one row per value of `param`, executed in a worker pool
/// capped by HARNACK_LAB_THREADS; per-row failures land in the status column
/// and the sweep continues. Writes sweep.csv plus a manifest.
int run_sweep(nlohmann::json base_config, const std::string& param,
              const std::vector<nlohmann::json>& values,
              const std::filesystem::path& out_dir, std::ostream& log, bool quiet = false);

}  // namespace harnack::experiments
