#pragma once

#include <span>
#include <vector>

#include "ovlab/fields.hpp"

namespace ovlab {

/// Squared H^s norm with the Bessel multiplier (1 + |k|^2)^s, scaled by (2 pi)^2
/// so that s = 0 is the integral L2 norm over the torus. Sums all components.
template <int N>
Real sobolevNormSquared(const SpectralField<N>& f, double s) {
  const RealBlock& weight = sobolevWeight(f.grid(), s);
  Real total = 0;
  for (int c = 0; c < N; ++c) total += (weight * f[c].abs2()).sum();
  return 4.0 * M_PI * M_PI * total;
}

template <int N>
Real sobolevNorm(const SpectralField<N>& f, double s) {
  return std::sqrt(sobolevNormSquared(f, s));
}

/// Squared H^s norm of the full gradient of f: multiplier (1 + |k|^2)^s |k|^2.
template <int N>
Real gradientSobolevNormSquared(const SpectralField<N>& f, double s) {
  const auto& w = wavenumbers(f.grid());
  const RealBlock weight = sobolevWeight(f.grid(), s) * w.ksq;
  Real total = 0;
  for (int c = 0; c < N; ++c) total += (weight * f[c].abs2()).sum();
  return 4.0 * M_PI * M_PI * total;
}

/// Instantaneous integrands of the two-tier energy at one time.
struct EnergyDensities {
  Real lowSup = 0;   // |u, sigma, grad sigma|^2_{H^2}
  Real lowInt = 0;   // |grad u, sigma/eps|^2_{H^2}
  Real highSup = 0;  // |u, eps tau, eps grad tau|^2_{H^6}
  Real highInt = 0;  // |tau|^2_{H^6}
};

/// Norms reported per diagnostics row.
struct EnergySample {
  double t = 0;
  std::array<Real, 6> uNorms{};  // |u|_{H^1} .. |u|_{H^6}
  Real tauH2 = 0;
  Real tauH6 = 0;
  Real sigmaH2 = 0;
  EnergyDensities densities;
  Real supLow = 0, intLow = 0, supHigh = 0, intHigh = 0;

  Real eLow() const { return supLow + intLow; }
  Real eHigh() const { return supHigh + intHigh; }
  Real eTotal() const { return eLow() + eHigh(); }
};

/// Tensor stored as (11, 12, 22): the off-diagonal entry counts twice in |tau|^2.
Real tensorSobolevNormSquared(const SymTensorField& tau, double s);
Real tensorGradientSobolevNormSquared(const SymTensorField& tau, double s);

EnergyDensities energyDensities(const VelocityField& u, const SymTensorField& tau, double epsilon);

/// Running sup/integral ledger of the low and high energies.
///
/// Sup terms are running maxima over recorded samples; integral terms use the
/// trapezoid rule between consecutive samples.
class EnergyLedger {
public:
  /// Records the state at time t. Times must be nondecreasing.
  const EnergySample& record(double t, const VelocityField& u, const SymTensorField& tau, double epsilon);
  /// Records precomputed densities (norm columns left at zero).
  const EnergySample& record(double t, const EnergyDensities& d);

  Real supLow() const { return supLow_; }
  Real intLow() const { return intLow_; }
  Real supHigh() const { return supHigh_; }
  Real intHigh() const { return intHigh_; }
  Real eLow() const { return supLow_ + intLow_; }
  Real eHigh() const { return supHigh_ + intHigh_; }
  Real eTotal() const { return eLow() + eHigh(); }

  const std::vector<EnergySample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }

private:
  EnergySample& accumulate(EnergySample sample);

  Real supLow_ = 0, intLow_ = 0, supHigh_ = 0, intHigh_ = 0;
  std::vector<EnergySample> samples_;
};

struct DecayFit {
  double rate = 0;
  double floor = 0;
  bool noDecay = false;
};

/// Fits y(t) ~ A e^{-rate t} + floor. The floor is the median of the last
/// quarter of the series; the rate is the least-squares slope of log(y - floor)
/// over the early window where y - floor exceeds 5% of its initial value.
DecayFit decayFit(std::span<const double> times, std::span<const double> values);

struct TrajectorySample {
  double t = 0;
  VelocityField u;
  SymTensorField tau;
};

struct LimitMetrics {
  Real supH2Gap = 0;   // sup_t |u_eps - v|_{H^2}
  Real supH5Gap = 0;   // sup_t |u_eps - v|_{H^5}
  Real l2tH2Sigma = 0; // (int_0^T |tau_eps - D(u_eps)|^2_{H^2} dt)^{1/2}
};

/// Compares an Oldroyd-B trajectory against a Navier-Stokes reference sampled
/// at the same times on the same grid.
LimitMetrics limitMetrics(std::span<const TrajectorySample> run, std::span<const TrajectorySample> reference);

/// Least-squares slope of log(y) against log(x).
double logLogSlope(std::span<const double> x, std::span<const double> y);

} // namespace ovlab
