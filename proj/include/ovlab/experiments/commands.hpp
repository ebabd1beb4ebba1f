#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ovlab/experiments/config.hpp"
#include "ovlab/experiments/io.hpp"
#include "ovlab/linear.hpp"

namespace ovlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvariantFailed = 1,
  kExitConfig = 2,
  kExitIntegrator = 3,
  kExitBlowUp = 4,
  kExitIo = 5,
  kExitChecksum = 6,
};

struct DispersionRow {
  int k = 0;
  Complex lambdaPlus, lambdaMinus;
  double slope = 0;        // Re lambda_plus / k
  double stepperRate = 0;  // fitted rate of the linearized RK4 stepper
  double relErr = 0;       // |stepperRate - Re lambda_plus| / |Re lambda_plus| (absolute if Re = 0)
};

/// Rows k = 1..kMax for the linearization about tau = a Id.
std::vector<DispersionRow> dispersionTable(const DispersionSpec& spec, double a, double b);

struct InflationRow {
  int k = 0;
  double s = 0;
  double alphaAtOne = 0;  // alpha(1)
  double lowerBound = 0;  // e^{lambda_plus(k)}
  double ratio = 0;       // k^s alpha(1) / lowerBound
  double margin = 0;      // min_t (alpha - alpha_1)
};

/// Throws NumericalError if an ODE trajectory loses positivity.
std::vector<InflationRow> inflationTable(const InflateSpec& spec);

struct SimulateResult {
  double tEnd = 0;
  bool blownUp = false;
  double blowUpTime = 0;
  std::string blowUpReason;
  long steps = 0;
  EnergySample last;
};

struct SweepMember {
  double epsilon = 0;
  double tEnd = 0;
  LimitMetrics metrics;
  double eTotalEnd = 0;
  bool blownUp = false;
};

struct SweepResult {
  std::vector<SweepMember> members;
  double slopeSupH2Gap = 0;
  double slopeL2tSigma = 0;
  double uniformRatio = 0;  // max / min of E_total at each member's t_end
  bool anyBlowUp = false;
};

struct AuditCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool checksumFailure = false;
  int exitCode() const;
};

/// Each command writes into `out` (created if needed) and closes with a manifest.
int cmdDispersion(const RunConfig& cfg, const std::filesystem::path& out, std::vector<DispersionRow>* rows = nullptr);
int cmdInflate(const RunConfig& cfg, const std::filesystem::path& out, std::vector<InflationRow>* rows = nullptr);
int cmdSimulate(const RunConfig& cfg, const std::filesystem::path& out, SimulateResult* result = nullptr);
int cmdSweep(const RunConfig& cfg, const std::filesystem::path& out, int threads, SweepResult* result = nullptr);

AuditReport audit(const std::filesystem::path& runDir);
int cmdAudit(const std::filesystem::path& runDir, std::ostream& report);

/// Directory name of a sweep member.
std::string memberDirName(double epsilon);

} // namespace ovlab
