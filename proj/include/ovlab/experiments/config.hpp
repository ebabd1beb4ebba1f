#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ovlab/initial.hpp"
#include "ovlab/solvers.hpp"

namespace ovlab {

enum class Experiment { Dispersion, Inflate, Simulate, Sweep, Audit };
enum class Generator { Zero, TaylorGreen, RandomSmooth, ModeProbe };

std::string toString(Experiment e);
std::string toString(Generator g);

struct InitialSpec {
  Generator generator = Generator::TaylorGreen;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  int k = 8;       // mode-probe wavenumber
  int cutoff = 4;  // random-smooth spectral radius
  StressInit tau = StressInit::WellPrepared;
};

struct RunSpec {
  std::optional<double> tEnd;  // empty means eps^{-2/3}
  int diagnosticsEvery = 10;
  int snapshotEvery = 0;
  std::string outputDir;
};

struct DispersionSpec {
  int kMax = 64;
  double dtFactor = 0.05;     // dt = dtFactor / |lambda_plus|
  double windowFactor = 2.0;  // window = windowFactor / |Re lambda_plus|
};

struct InflateSpec {
  std::vector<int> ks{2, 4, 8, 16};
  double s = 3.0;
  double dt = 1e-4;
};

struct SweepSpec {
  std::vector<double> eps;
  double limitT = 2.0;
};

/// Parsed experiment definition. Sections that the chosen experiment does not
/// use are still validated.
struct RunConfig {
  Experiment experiment = Experiment::Simulate;
  Grid grid{64, 64};
  System system = System::VoigtOldroydB;
  ModelParams params;
  StepperConfig stepper;
  RunSpec run;
  InitialSpec initial;
  DispersionSpec dispersion;
  InflateSpec inflate;
  SweepSpec sweep;
  std::string source;  // TOML text as read

  /// run.tEnd, or eps^{-2/3} when set to "auto".
  double tEndFor(double epsilon) const;
  nlohmann::json toJson() const;
  void validate() const;
};

/// Throws ConfigError on syntax errors, wrong types, unknown keys and invalid values.
RunConfig parseConfig(const std::string& text);
RunConfig loadConfig(const std::filesystem::path& path);

/// Initial state described by cfg.initial; stress is dropped for Navier-Stokes.
SimState initialState(const RunConfig& cfg, System system, const ModelParams& params);

} // namespace ovlab
