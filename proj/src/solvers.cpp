#include "ovlab/solvers.hpp"

#include <cmath>
#include <sstream>

#include "ovlab/linear.hpp"

namespace ovlab {

std::string toString(System s) {
  switch (s) {
    case System::EulerOldroydB: return "euler";
    case System::VoigtOldroydB: return "voigt";
    case System::NavierStokes: return "ns";
  }
  return "?";
}

std::string toString(Scheme s) { return s == Scheme::ExplicitRk4 ? "explicit-rk4" : "expint-imex"; }

void StepperConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("stepper: dt must be positive");
  if (!(cflSafety > 0.0 && cflSafety <= 1.0)) throw ConfigError("stepper: cfl_safety must lie in (0, 1]");
  if (!(dtCapFactor > 0.0)) throw ConfigError("stepper: dt_cap_factor must be positive");
  if (maxHalvings < 0) throw ConfigError("stepper: max_halvings must be >= 0");
  if (!(blowupAmplitude > 0.0)) throw ConfigError("stepper: blowup_amplitude must be positive");
}

namespace {

struct Tendency {
  VectorSpectral u;
  TensorSpectral tau;
};

struct Pair {
  VectorSpectral u;
  TensorSpectral tau;

  Pair axpy(double h, const Tendency& f) const { return {u + h * f.u, tau + h * f.tau}; }
};

/// Everything in the Oldroyd-B right-hand sides except stress relaxation:
///   du/dt   = P(-u.grad u + div tau)
///   dtau/dt = -u.grad tau - Q(tau, grad u) + D(u)/eps^2
Tendency oldroydBForcing(const VelocityField& u, const SymTensorField& tau, const ModelParams& p) {
  const Grid& g = u.grid();
  auto& fft = transformFor(g);
  const ComplexBlock& mask = wavenumbers(g).dealiasMask;

  const RealBlock u1 = fft.inverse(u[0]);
  const RealBlock u2 = fft.inverse(u[1]);
  const RealBlock u1x = fft.inverse(derivative(u[0], g, Axis::X));
  const RealBlock u1y = fft.inverse(derivative(u[0], g, Axis::Y));
  const RealBlock u2x = fft.inverse(derivative(u[1], g, Axis::X));
  const RealBlock u2y = fft.inverse(derivative(u[1], g, Axis::Y));

  PhysicalField<3> t;
  PhysicalField<3> advected;
  for (int c = 0; c < 3; ++c) {
    t[c] = fft.inverse(tau[c]);
    const RealBlock tx = fft.inverse(derivative(tau[c], g, Axis::X));
    const RealBlock ty = fft.inverse(derivative(tau[c], g, Axis::Y));
    advected[c] = u1 * tx + u2 * ty;
  }

  const RealBlock d12 = 0.5 * (u1y + u2x);
  const RealBlock w12 = 0.5 * (u1y - u2x);
  PhysicalField<3> q;
  qFormPointwise(t[T11], t[T12], t[T22], u1x, d12, u2y, w12, p.b, q[T11], q[T12], q[T22]);

  Tendency f{VectorSpectral(g), TensorSpectral(g)};
  VectorSpectral momentum(g);
  momentum[0] = -fft.forward(u1 * u1x + u2 * u1y) * mask;
  momentum[1] = -fft.forward(u1 * u2x + u2 * u2y) * mask;
  momentum += tensorDivergence(tau);
  f.u = lerayProject(momentum);

  const SymTensorField strain = symGradient(u);
  const double inv2 = 1.0 / (p.epsilon * p.epsilon);
  for (int c = 0; c < 3; ++c) f.tau[c] = -fft.forward(advected[c] + q[c]) * mask + inv2 * strain[c];
  return f;
}

/// -P(v.grad v), dealiased.
VectorSpectral navierStokesForcing(const VelocityField& v) {
  const Grid& g = v.grid();
  auto& fft = transformFor(g);
  const ComplexBlock& mask = wavenumbers(g).dealiasMask;
  const RealBlock v1 = fft.inverse(v[0]);
  const RealBlock v2 = fft.inverse(v[1]);
  VectorSpectral n(g);
  n[0] = -fft.forward(v1 * fft.inverse(derivative(v[0], g, Axis::X)) +
                      v2 * fft.inverse(derivative(v[0], g, Axis::Y))) *
         mask;
  n[1] = -fft.forward(v1 * fft.inverse(derivative(v[1], g, Axis::X)) +
                      v2 * fft.inverse(derivative(v[1], g, Axis::Y))) *
         mask;
  return lerayProject(n);
}

/// dt reduced by halving until the CFL bound dt <= safety h / max|u| holds.
StepResult chooseDt(const SimState& s, const StepperConfig& c, double dt) {
  StepResult r;
  r.dtUsed = dt;
  const double speed = maxSpeed(s.u);
  if (!(speed > 0.0) || !std::isfinite(speed)) return r;
  const double limit = c.cflSafety * s.grid().spacing() / speed;
  while (r.dtUsed > limit) {
    if (r.halvings == c.maxHalvings) {
      std::ostringstream msg;
      msg << "CFL violation persists after " << c.maxHalvings << " halvings at t = " << s.t;
      throw NumericalError(msg.str());
    }
    r.dtUsed *= 0.5;
    ++r.halvings;
  }
  return r;
}

bool acceptOrFlag(const SimState& candidate, const StepperConfig& c, StepResult& r) {
  if (!candidate.u.allFinite() || !candidate.tau.allFinite()) {
    r.status = StepStatus::BlowUp;
    r.reason = "non-finite value";
    return false;
  }
  const Real amp = maxAmplitude(candidate);
  if (amp > c.blowupAmplitude) {
    r.status = StepStatus::BlowUp;
    std::ostringstream msg;
    msg << "amplitude " << amp << " exceeds " << c.blowupAmplitude;
    r.reason = msg.str();
    return false;
  }
  return true;
}

ComplexBlock phiOne(const RealBlock& z) {
  return z.unaryExpr([](double v) { return std::abs(v) < 1e-8 ? 1.0 + 0.5 * v : std::expm1(v) / v; })
      .cast<Complex>();
}

ComplexBlock phiTwo(const RealBlock& z) {
  return z.unaryExpr([](double v) {
           if (std::abs(v) < 1e-2) return 0.5 + v / 6.0 + v * v / 24.0 + v * v * v / 120.0;
           return (std::expm1(v) - v) / (v * v);
         })
      .cast<Complex>();
}

} // namespace

Real maxSpeed(const VelocityField& u) {
  const auto p = inverseTransform(u);
  return (p[0].square() + p[1].square()).sqrt().maxCoeff();
}

Real maxAmplitude(const SimState& s) {
  Real m = 0;
  for (const auto& c : inverseTransform(s.u)) m = std::max(m, c.abs().maxCoeff());
  for (const auto& c : inverseTransform(s.tau)) m = std::max(m, c.abs().maxCoeff());
  return m;
}

void enforceInvariants(SimState& state, bool dealiasFields) {
  state.u = lerayProject(state.u);
  if (dealiasFields) {
    dealias(state.u);
    dealias(state.tau);
  }
  state.u.mode(0, 0, 0) = 0.0;
  state.u.mode(1, 0, 0) = 0.0;
}

StepResult eulerObStep(SimState& state, const StepperConfig& config) {
  config.validate();
  StepResult r = chooseDt(state, config, config.dt);
  const double h = r.dtUsed;
  const double inv2 = 1.0 / (state.params.epsilon * state.params.epsilon);

  auto rhs = [&](const Pair& y) {
    Tendency f = oldroydBForcing(y.u, y.tau, state.params);
    f.tau -= inv2 * y.tau;
    if (config.freezeVelocity) f.u.setZero();
    return f;
  };
  const Pair y0{state.u, state.tau};
  const Tendency k1 = rhs(y0);
  const Tendency k2 = rhs(y0.axpy(0.5 * h, k1));
  const Tendency k3 = rhs(y0.axpy(0.5 * h, k2));
  const Tendency k4 = rhs(y0.axpy(h, k3));

  SimState next = state;
  next.u = y0.u + (h / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  next.tau = y0.tau + (h / 6.0) * (k1.tau + 2.0 * k2.tau + 2.0 * k3.tau + k4.tau);
  enforceInvariants(next, config.dealias);
  if (!acceptOrFlag(next, config, r)) return r;
  next.t += h;
  ++next.stepCount;
  state = std::move(next);
  return r;
}

StepResult voigtObStep(SimState& state, const StepperConfig& config) {
  config.validate();
  const double eps2 = state.params.epsilon * state.params.epsilon;
  StepResult r = chooseDt(state, config, std::min(config.dt, config.dtCapFactor * eps2));
  const double h = r.dtUsed;
  const Grid& g = state.grid();
  const auto& w = wavenumbers(g);

  const RealBlock z = -h / (eps2 * (1.0 + w.ksq));
  const ComplexBlock decay = z.exp().cast<Complex>();
  const ComplexBlock p1 = h * phiOne(z);
  const ComplexBlock p2 = h * phiTwo(z);

  // Stress forcing in the Helmholtz-inverted variable.
  auto forcing = [&](const VelocityField& u, const SymTensorField& tau) {
    Tendency f = oldroydBForcing(u, tau, state.params);
    f.tau = inverseHelmholtz(f.tau);
    if (config.freezeVelocity) f.u.setZero();
    return f;
  };

  const Tendency n0 = forcing(state.u, state.tau);
  VelocityField ua = state.u + h * n0.u;
  SymTensorField ta(g);
  for (int c = 0; c < 3; ++c) ta[c] = decay * state.tau[c] + p1 * n0.tau[c];

  const Tendency n1 = forcing(ua, ta);
  SimState next = state;
  next.u = ua + (0.5 * h) * (n1.u - n0.u);
  for (int c = 0; c < 3; ++c) next.tau[c] = ta[c] + p2 * (n1.tau[c] - n0.tau[c]);
  enforceInvariants(next, config.dealias);
  if (!acceptOrFlag(next, config, r)) return r;
  next.t += h;
  ++next.stepCount;
  state = std::move(next);
  return r;
}

StepResult nsStep(SimState& state, const StepperConfig& config) {
  config.validate();
  StepResult r = chooseDt(state, config, config.dt);
  const double h = r.dtUsed;
  const auto& w = wavenumbers(state.grid());
  const RealBlock lap = w.dx.square() + w.dy.square();
  const ComplexBlock full = (-ModelParams::nuLimit * h * lap).exp().cast<Complex>();
  const ComplexBlock half = (-0.5 * ModelParams::nuLimit * h * lap).exp().cast<Complex>();

  auto scale = [](const ComplexBlock& m, const VectorSpectral& v) {
    VectorSpectral out(v.grid());
    out[0] = m * v[0];
    out[1] = m * v[1];
    return out;
  };

  const VectorSpectral& v = state.u;
  const VectorSpectral k1 = navierStokesForcing(v);
  const VectorSpectral k2 = navierStokesForcing(scale(half, v + (0.5 * h) * k1));
  const VectorSpectral k3 = navierStokesForcing(scale(half, v) + (0.5 * h) * k2);
  const VectorSpectral k4 = navierStokesForcing(scale(full, v) + h * scale(half, k3));

  SimState next = state;
  next.u = scale(full, v) + (h / 6.0) * (scale(full, k1) + 2.0 * scale(half, k2 + k3) + k4);
  enforceInvariants(next, config.dealias);
  if (!acceptOrFlag(next, config, r)) return r;
  next.t += h;
  ++next.stepCount;
  state = std::move(next);
  return r;
}

StepResult step(System system, SimState& state, const StepperConfig& config) {
  switch (system) {
    case System::EulerOldroydB: return eulerObStep(state, config);
    case System::VoigtOldroydB: return voigtObStep(state, config);
    case System::NavierStokes: return nsStep(state, config);
  }
  throw ConfigError("unknown system");
}

RunSummary run(const SimState& initial, System system, const StepperConfig& config, double tEnd,
               const RunHooks& hooks) {
  config.validate();
  if (tEnd < initial.t) throw ConfigError("run: t_end precedes the initial time");
  if (hooks.diagnosticsEvery < 1) throw ConfigError("run: diagnostics cadence must be >= 1");

  RunSummary out;
  out.final = initial;
  SimState& s = out.final;
  const double eps = s.params.epsilon;

  long lastDiag = -1, lastSnap = -1;
  auto diagnose = [&] {
    const EnergySample& sample = out.ledger.record(s.t, s.u, s.tau, eps);
    if (hooks.onDiagnostics) hooks.onDiagnostics(s, sample);
    lastDiag = out.steps;
  };
  auto snapshot = [&] {
    if (hooks.snapshotEvery > 0 && hooks.onSnapshot) hooks.onSnapshot(s);
    lastSnap = out.steps;
  };

  diagnose();
  snapshot();
  const double tol = 1e-12 * std::max(1.0, std::abs(tEnd));
  while (tEnd - s.t > tol) {
    StepperConfig c = config;
    c.dt = std::min(config.dt, tEnd - s.t);
    const StepResult r = step(system, s, c);
    if (r.status == StepStatus::BlowUp) {
      out.blownUp = true;
      out.blowUpTime = s.t + r.dtUsed;
      out.blowUpReason = r.reason;
      break;
    }
    ++out.steps;
    if (out.steps % hooks.diagnosticsEvery == 0) diagnose();
    if (hooks.snapshotEvery > 0 && out.steps % hooks.snapshotEvery == 0) snapshot();
  }
  if (lastDiag != out.steps) diagnose();
  if (hooks.snapshotEvery > 0 && lastSnap != out.steps) snapshot();
  return out;
}

} // namespace ovlab
