#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace catlgt::cli {

struct RunContext {
  ExperimentConfig config;  // fully resolved (defaults + file + overrides)
  std::filesystem::path out;
  std::size_t workers = 1;
};

const std::vector<std::string>& recipe_names();
ExperimentConfig recipe_defaults(const std::string& recipe);

/// Runs a recipe, writes its CSV files and summary.json into ctx.out, and
/// returns the summary.
nlohmann::json run_recipe(const std::string& recipe, const RunContext& ctx);

/// Grid sweep of sweep.quantity over sweep.beta0 x sweep.g3. Completed points
/// are stored as marker files under out/points so interrupted sweeps resume.
nlohmann::json run_sweep(const RunContext& ctx);

}  // namespace catlgt::cli
