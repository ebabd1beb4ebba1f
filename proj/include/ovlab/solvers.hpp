#pragma once

#include <functional>
#include <string>

#include "ovlab/diagnostics.hpp"
#include "ovlab/fields.hpp"

namespace ovlab {

enum class System { EulerOldroydB, VoigtOldroydB, NavierStokes };
enum class Scheme { ExplicitRk4, ExpIntImex };

std::string toString(System s);
std::string toString(Scheme s);

struct SimState {
  double t = 0.0;
  VelocityField u;
  SymTensorField tau;
  ModelParams params;
  long stepCount = 0;

  SimState() = default;
  SimState(const Grid& grid, const ModelParams& p) : u(grid), tau(grid), params(p) {}
  const Grid& grid() const { return u.grid(); }
};

struct StepperConfig {
  double dt = 1e-3;
  double cflSafety = 0.5;
  Scheme scheme = Scheme::ExpIntImex;
  bool dealias = true;
  /// Voigt steps are capped at dtCapFactor * epsilon^2.
  double dtCapFactor = 10.0;
  int maxHalvings = 20;
  /// A state whose max |u| or |tau| exceeds this is reported as blown up.
  double blowupAmplitude = 1e8;
  /// Holds u fixed so the stress sub-problem can be checked in isolation.
  bool freezeVelocity = false;

  void validate() const;
};

enum class StepStatus { Advanced, BlowUp };

struct StepResult {
  StepStatus status = StepStatus::Advanced;
  double dtUsed = 0.0;
  int halvings = 0;
  std::string reason;
};

/// Largest pointwise speed |u| on the grid.
Real maxSpeed(const VelocityField& u);
/// Largest absolute physical value over all velocity and stress components.
Real maxAmplitude(const SimState& s);

/// One RK4 step of the unregularized Euler-Oldroyd-B system. The relaxation
/// term is explicit, so dt should stay below ~2.5 epsilon^2.
StepResult eulerObStep(SimState& state, const StepperConfig& config);

/// One exponential-integrator step of the Voigt system. In spectral space the
/// stress obeys d/dt tau_k = -r_k tau_k + N_k/(1 + |k|^2), r_k = 1/(eps^2 (1 + |k|^2));
/// the decay is applied exactly and N (advection, Q, D(u)/eps^2) by the
/// second-order exponential Runge-Kutta rule; velocity uses Heun's method.
StepResult voigtObStep(SimState& state, const StepperConfig& config);

/// One integrating-factor RK4 step of dv/dt + P(v.grad v) = Delta v / 2.
StepResult nsStep(SimState& state, const StepperConfig& config);

StepResult step(System system, SimState& state, const StepperConfig& config);

/// Restores solver invariants: Leray projection, zero velocity mean, dealiasing.
void enforceInvariants(SimState& state, bool dealiasFields = true);

struct RunHooks {
  int diagnosticsEvery = 1;
  int snapshotEvery = 0;  // 0 disables snapshots
  std::function<void(const SimState&, const EnergySample&)> onDiagnostics;
  std::function<void(const SimState&)> onSnapshot;
};

struct RunSummary {
  SimState final;
  EnergyLedger ledger;
  bool blownUp = false;
  double blowUpTime = 0.0;
  std::string blowUpReason;
  long steps = 0;
};

/// Integrates to tEnd, landing exactly on it. Diagnostics are recorded at t = 0,
/// every `diagnosticsEvery` steps and at the final time; snapshots likewise.
/// A blow-up halts the run and keeps the last finite state.
RunSummary run(const SimState& initial, System system, const StepperConfig& config, double tEnd,
               const RunHooks& hooks = {});

} // namespace ovlab
