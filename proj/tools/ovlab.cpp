// ovlab: dispersion tables, norm-inflation ODE, Oldroyd-B simulations,
// epsilon sweeps and run audits.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "ovlab/experiments/commands.hpp"

namespace fs = std::filesystem;
using namespace ovlab;

namespace {

fs::path outputRoot() {
  const char* env = std::getenv("OV_LAB_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("ovlab-runs");
}

fs::path resolveOutput(const std::string& flag, const RunConfig& cfg, const fs::path& configPath) {
  if (!flag.empty()) return flag;
  if (!cfg.run.outputDir.empty()) {
    const fs::path p(cfg.run.outputDir);
    return p.is_absolute() ? p : outputRoot() / p;
  }
  return outputRoot() / (toString(cfg.experiment) + "-" + configPath.stem().string());
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral Euler/Voigt-Oldroyd-B laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string configPath, output;
  std::optional<std::uint64_t> seed;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--config", configPath, "TOML experiment definition");
  app.add_option("--output", output, "output directory (default: $OV_LAB_OUTPUT_ROOT/<experiment>-<config name>)");
  app.add_option("--seed", seed, "overrides initial.seed");
  app.add_option("--threads", threads, "worker threads for sweep members")->check(CLI::PositiveNumber);

  std::string auditDir;
  auto* dispersion = app.add_subcommand("dispersion", "growth rates of the linearized system");
  auto* inflate = app.add_subcommand("inflate", "norm-inflation amplitude ODE");
  auto* simulate = app.add_subcommand("simulate", "one Oldroyd-B or Navier-Stokes run");
  auto* sweep = app.add_subcommand("sweep", "epsilon sweep against a Navier-Stokes reference");
  auto* auditCmd = app.add_subcommand("audit", "re-verify a run directory");
  auditCmd->add_option("run_dir", auditDir, "run or sweep directory (default: --output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (auditCmd->parsed()) {
      const std::string dir = !auditDir.empty() ? auditDir : output;
      if (dir.empty()) throw ConfigError("audit needs a run directory");
      return cmdAudit(dir, std::cout);
    }

    if (configPath.empty()) throw ConfigError("--config is required");
    RunConfig cfg = loadConfig(configPath);
    if (seed) {
      cfg.initial.seed = *seed;
      cfg.validate();
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    if (toString(cfg.experiment) != sub)
      throw ConfigError("config describes a '" + toString(cfg.experiment) + "' experiment, not '" + sub + "'");
    const fs::path out = resolveOutput(output, cfg, configPath);

    int code = kExitOk;
    if (dispersion->parsed()) code = cmdDispersion(cfg, out);
    else if (inflate->parsed()) code = cmdInflate(cfg, out);
    else if (simulate->parsed()) code = cmdSimulate(cfg, out);
    else if (sweep->parsed()) code = cmdSweep(cfg, out, threads);
    std::cout << out.string() << '\n';
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "ovlab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "ovlab: integrator failure: " << e.what() << '\n';
    return kExitIntegrator;
  } catch (const IoError& e) {
    std::cerr << "ovlab: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "ovlab: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "ovlab: error: " << e.what() << '\n';
    return kExitIo;
  }
}
