#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "catlgt/diagnostics.hpp"
#include "recipes.hpp"

using namespace catlgt;
using namespace catlgt::cli;
using nlohmann::json;

namespace {

std::size_t resolve_workers(std::size_t flag, const ExperimentConfig& c) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CATLGT_WORKERS"))
    return static_cast<std::size_t>(parse_number(env, "CATLGT_WORKERS"));
  if (c.has("sweep.workers")) return c.count("sweep.workers", 1);
  return std::max(1u, std::thread::hardware_concurrency());
}

std::filesystem::path resolve_out(const std::string& flag, const ExperimentConfig& c, const std::string& name) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CATLGT_OUT")) return std::filesystem::path(env) / name;
  if (c.has("output.directory")) return c.get("output.directory", "");
  return std::filesystem::path("out") / name;
}

int report(ErrorKind kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", to_string(kind)}, {"message", message}}}}.dump() << '\n';
  return kind == ErrorKind::Validation ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Z2 lattice gauge simulator on Kerr cat resonators"};
  app.require_subcommand(1);

  std::string recipe, config_path, out;
  std::size_t workers = 0;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;

  auto* run = app.add_subcommand("run", "run a named recipe");
  std::string names;
  for (const auto& n : recipe_names()) names += (names.empty() ? "" : ", ") + n;
  run->add_option("recipe", recipe, "one of: " + names)->required();
  run->add_option("--config", config_path, "INI file applied on top of the recipe defaults");
  run->add_option("--out", out, "output directory");
  run->add_option("--workers", workers, "worker threads");
  run->add_option("--set", sets, "section.key=value override (repeatable)");
  const std::pair<const char*, const char*> shortcuts[] = {
      {"--U", "U"}, {"--G", "G"}, {"--beta0", "beta0"}, {"--g3", "g3"}, {"--N", "N"},
      {"--M", "M"}, {"--t-max", "run.t_max"}, {"--samples", "run.samples"}};
  for (const auto& [flag, key] : shortcuts) run->add_option(flag, flags[key], std::string("set ") + key);

  auto* sweep = app.add_subcommand("sweep", "grid sweep with resumable per-point results");
  sweep->add_option("config", config_path)->required();
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--workers", workers, "worker threads");

  auto* validate = app.add_subcommand("validate", "check a configuration without running it");
  validate->add_option("config", config_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*validate) {
      const auto c = ExperimentConfig::load(config_path);
      c.validate();
      std::cout << json{{"valid", true}, {"config_hash", c.hash()}}.dump() << '\n';
      return 0;
    }
    RunContext ctx;
    if (*run) {
      ctx.config = recipe_defaults(recipe);
      if (!config_path.empty()) ctx.config.merge(ExperimentConfig::load(config_path));
      for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Validation, "--set expects key=value, got '" + s + "'");
        ctx.config.set(s.substr(0, eq), s.substr(eq + 1));
      }
      for (const auto& [key, value] : flags) {
        if (value.empty()) continue;
        std::string k = key;
        if (k.find('.') == std::string::npos)
          k = (value.find(':') != std::string::npos || value.find(',') != std::string::npos ? "sweep." : "system.") + k;
        if (k == "system.g3") ctx.config.erase("system.g3_over_gap");
        if (k == "system.beta0") ctx.config.erase("system.G");
        if (k == "run.t_max") ctx.config.erase("run.periods");
        ctx.config.set(k, value);
      }
      ctx.workers = resolve_workers(workers, ctx.config);
      ctx.out = resolve_out(out, ctx.config, recipe);
      std::cout << run_recipe(recipe, ctx).dump(2) << '\n';
    } else {
      ctx.config = ExperimentConfig::load(config_path);
      ctx.workers = resolve_workers(workers, ctx.config);
      ctx.out = resolve_out(out, ctx.config, "sweep");
      std::cout << run_sweep(ctx).dump(2) << '\n';
    }
  } catch (const Error& e) {
    return report(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report(ErrorKind::Numerical, e.what());
  }
  return 0;
}
