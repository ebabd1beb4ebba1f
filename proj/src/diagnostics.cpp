#include "ovlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ovlab {

namespace {

Real weightedTensorSum(const SymTensorField& tau, const RealBlock& weight) {
  return (weight * (tau[T11].abs2() + 2.0 * tau[T12].abs2() + tau[T22].abs2())).sum();
}

} // namespace

Real tensorSobolevNormSquared(const SymTensorField& tau, double s) {
  return 4.0 * M_PI * M_PI * weightedTensorSum(tau, sobolevWeight(tau.grid(), s));
}

Real tensorGradientSobolevNormSquared(const SymTensorField& tau, double s) {
  const auto& w = wavenumbers(tau.grid());
  return 4.0 * M_PI * M_PI * weightedTensorSum(tau, sobolevWeight(tau.grid(), s) * w.ksq);
}

EnergyDensities energyDensities(const VelocityField& u, const SymTensorField& tau, double epsilon) {
  const SymTensorField sigma = tightenedSigma(u, tau);
  const Real eps2 = epsilon * epsilon;
  EnergyDensities d;
  d.lowSup = sobolevNormSquared(u, 2.0) + tensorSobolevNormSquared(sigma, 2.0) +
             tensorGradientSobolevNormSquared(sigma, 2.0);
  d.lowInt = gradientSobolevNormSquared(u, 2.0) + tensorSobolevNormSquared(sigma, 2.0) / eps2;
  d.highSup = sobolevNormSquared(u, 6.0) +
              eps2 * (tensorSobolevNormSquared(tau, 6.0) + tensorGradientSobolevNormSquared(tau, 6.0));
  d.highInt = tensorSobolevNormSquared(tau, 6.0);
  return d;
}

const EnergySample& EnergyLedger::record(double t, const VelocityField& u, const SymTensorField& tau,
                                         double epsilon) {
  EnergySample s;
  s.t = t;
  for (int i = 0; i < 6; ++i) s.uNorms[i] = sobolevNorm(u, i + 1.0);
  s.tauH2 = std::sqrt(tensorSobolevNormSquared(tau, 2.0));
  s.tauH6 = std::sqrt(tensorSobolevNormSquared(tau, 6.0));
  s.sigmaH2 = std::sqrt(tensorSobolevNormSquared(tightenedSigma(u, tau), 2.0));
  s.densities = energyDensities(u, tau, epsilon);
  return accumulate(s);
}

const EnergySample& EnergyLedger::record(double t, const EnergyDensities& d) {
  EnergySample s;
  s.t = t;
  s.densities = d;
  return accumulate(s);
}

EnergySample& EnergyLedger::accumulate(EnergySample s) {
  if (!samples_.empty()) {
    const EnergySample& prev = samples_.back();
    const double dt = s.t - prev.t;
    if (dt < 0) throw std::invalid_argument("EnergyLedger: samples must be recorded in time order");
    intLow_ += 0.5 * dt * (prev.densities.lowInt + s.densities.lowInt);
    intHigh_ += 0.5 * dt * (prev.densities.highInt + s.densities.highInt);
  }
  supLow_ = std::max(supLow_, s.densities.lowSup);
  supHigh_ = std::max(supHigh_, s.densities.highSup);
  s.supLow = supLow_;
  s.intLow = intLow_;
  s.supHigh = supHigh_;
  s.intHigh = intHigh_;
  samples_.push_back(s);
  return samples_.back();
}

DecayFit decayFit(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("decayFit: size mismatch");
  const size_t n = values.size();
  if (n < 10) throw std::invalid_argument("decayFit: needs at least 10 samples");

  DecayFit fit;
  std::vector<double> tail(values.end() - static_cast<std::ptrdiff_t>(n / 4), values.end());
  std::sort(tail.begin(), tail.end());
  const size_t m = tail.size();
  fit.floor = m % 2 ? tail[m / 2] : 0.5 * (tail[m / 2 - 1] + tail[m / 2]);

  const double head = values.front() - fit.floor;
  if (!(head > 1e-12 * std::max(std::abs(values.front()), 1e-300))) {
    fit.noDecay = true;
    return fit;
  }

  double st = 0, sy = 0, stt = 0, sty = 0;
  int used = 0;
  for (size_t i = 0; i < n; ++i) {
    const double excess = values[i] - fit.floor;
    if (excess < 0.05 * head) break;
    const double y = std::log(excess);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++used;
  }
  if (used < 3) {
    fit.noDecay = true;
    return fit;
  }
  const double slope = (used * sty - st * sy) / (used * stt - st * st);
  if (!(slope < 0.0)) {
    fit.noDecay = true;
    return fit;
  }
  fit.rate = -slope;
  return fit;
}

LimitMetrics limitMetrics(std::span<const TrajectorySample> run, std::span<const TrajectorySample> reference) {
  if (run.size() != reference.size() || run.empty())
    throw ConfigError("limitMetrics: trajectories must share the same sample times");
  LimitMetrics m;
  double integral = 0;
  double prevT = 0, prevSigma = 0;
  for (size_t i = 0; i < run.size(); ++i) {
    const auto& a = run[i];
    const auto& v = reference[i];
    if (std::abs(a.t - v.t) > 1e-9 * std::max(1.0, std::abs(a.t)))
      throw ConfigError("limitMetrics: sample times differ");
    if (!(a.u.grid() == v.u.grid())) throw ConfigError("limitMetrics: grids differ");
    const VelocityField gap = a.u - v.u;
    m.supH2Gap = std::max(m.supH2Gap, sobolevNorm(gap, 2.0));
    m.supH5Gap = std::max(m.supH5Gap, sobolevNorm(gap, 5.0));
    const double sigma2 = tensorSobolevNormSquared(tightenedSigma(a.u, a.tau), 2.0);
    if (i > 0) integral += 0.5 * (a.t - prevT) * (prevSigma + sigma2);
    prevT = a.t;
    prevSigma = sigma2;
  }
  m.l2tH2Sigma = std::sqrt(integral);
  return m;
}

double logLogSlope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("logLogSlope: needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace ovlab
