#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "output.hpp"

namespace qftn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;

const std::vector<std::string>& task_names();

/// Runs one task into out. Returns kExitOk or kExitNotConverged; summary
/// receives the headline numbers for the manifest. Throws ConfigError for
/// inconsistent settings.
int run_task(const std::string& task, const RunConfig& cfg, OutputDir& out, nlohmann::json& summary);

}  // namespace qftn::cli
