#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "output.hpp"
#include "tasks.hpp"

#ifndef QFTN_VERSION
#define QFTN_VERSION "unknown"
#endif

using namespace qftn::cli;
using nlohmann::json;

namespace {

struct Flags {
  std::string config, out;
  std::vector<std::string> sets;
  long long seed = -1;
  int threads = 0;
};

void print_schema() {
  std::string section;
  for (const auto& k : schema()) {
    if (section != k.section) {
      section = k.section;
      std::printf("\n[%s]\n", k.section);
    }
    std::string env = std::string("QFTN_") + k.section + "_" + k.key;
    for (auto& ch : env) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    std::printf("%-18s = %-12s ; %s (env %s)\n", k.key, k.fallback[0] ? k.fallback : "\"\"", k.doc, env.c_str());
  }
}

json versions() {
  return {{"qftn", QFTN_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__}};
}

int execute(const std::string& task, const Flags& f) {
  RunConfig cfg;
  try {
    if (!f.config.empty()) cfg.load_file(f.config);
    cfg.load_env();
    for (const auto& s : f.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!f.out.empty()) cfg.set("output.dir", f.out);
    if (f.seed >= 0) cfg.set("run.seed", std::to_string(f.seed));
    if (f.threads > 0) cfg.set("run.threads", std::to_string(f.threads));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  OutputDir out(cfg.text("output.dir"), cfg.hash());
  out.write("config.ini", cfg.canonical());
  const auto t0 = std::chrono::steady_clock::now();
  json summary = json::object();
  std::string status = "ok", message;
  int code = kExitOk;
  try {
    code = run_task(task, cfg, out, summary);
    if (code == kExitNotConverged) status = "not_converged";
  } catch (const ConfigError& e) {
    code = kExitConfig;
    status = "config_error";
    message = e.what();
  } catch (const std::exception& e) {
    // solver failures; whatever was finished is already on disk
    code = kExitNotConverged;
    status = "failed";
    message = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json values = json::object();
  for (const auto& [k, v] : cfg.values()) values[k] = v;
  json manifest{{"task", task},        {"config_hash", cfg.hash()}, {"config", values},
                {"versions", versions()}, {"wall_seconds", wall},       {"status", status},
                {"exit_code", code},   {"summary", summary},          {"files", out.files()}};
  if (!message.empty()) manifest["message"] = message;
  out.write("manifest.json", manifest.dump(2) + "\n");

  if (!message.empty()) std::cerr << task << ": " << message << "\n";
  std::cout << summary.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Momentum-space tensor-network runs for sine-Gordon and massive Schwinger models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QFTN_VERSION);

  Flags flags;
  std::string chosen;
  for (const auto& name : task_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " task");
    sub->add_option("--config,-c", flags.config, "INI file")->check(CLI::ExistingFile);
    sub->add_option("--out,-o", flags.out, "output directory (overrides output.dir)");
    sub->add_option("--seed", flags.seed, "64-bit seed (overrides run.seed)")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads,-j", flags.threads, "worker threads (overrides run.threads)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--set", flags.sets, "section.key=value, repeatable");
    sub->callback([&chosen, name] { chosen = name; });
  }
  app.add_subcommand("schema", "print every configuration key with its default")->callback([&chosen] {
    chosen = "schema";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  if (chosen == "schema") {
    print_schema();
    return 0;
  }
  return execute(chosen, flags);
}
