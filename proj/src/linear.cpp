#include "ovlab/linear.hpp"

#include <cmath>
#include <string>

namespace ovlab {

namespace {

bool ranksAbove(const Complex& x, const Complex& y) {
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

} // namespace

double dispersionCoefficient(double a, double b) { return 0.5 * (1.0 - 2.0 * a * b); }

std::pair<Complex, Complex> orderedQuadraticRoots(double A, double B, double C) {
  const double disc = B * B - 4.0 * A * C;
  Complex r1, r2;
  if (disc >= 0.0) {
    const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    if (q == 0.0) {
      r1 = r2 = 0.0;
    } else {
      r1 = q / A;
      r2 = C / q;
    }
  } else {
    const double re = -B / (2.0 * A);
    const double im = std::sqrt(-disc) / (2.0 * A);
    r1 = {re, im};
    r2 = {re, -im};
  }
  if (ranksAbove(r2, r1)) std::swap(r1, r2);
  return {r1, r2};
}

DispersionResult dispersion(int k, double a, double b) {
  if (k == 0) throw std::domain_error("dispersion: k = 0 gives a degenerate ansatz");
  DispersionResult r;
  r.k = k;
  r.a = a;
  r.b = b;
  const double kk = static_cast<double>(k);
  std::tie(r.lambdaPlus, r.lambdaMinus) = orderedQuadraticRoots(1.0, 1.0, dispersionCoefficient(a, b) * kk * kk);
  const Complex offDiagonal = Complex(0.0, -1.0) * r.lambdaPlus / kk;
  r.sigmaMode(0, 1) = offDiagonal;
  r.sigmaMode(1, 0) = offDiagonal;
  return r;
}

Complex modeGrowthRate(int k, const ModelParams& p) {
  if (k == 0) throw std::domain_error("modeGrowthRate: k = 0");
  const double kk = static_cast<double>(k);
  const double eps2 = p.epsilon * p.epsilon;
  const double voigtFactor = p.voigt ? 1.0 + kk * kk : 1.0;
  // (h eps^2) l^2 + l + k^2 (1 - 2ab eps^2)/2 = 0
  return orderedQuadraticRoots(voigtFactor * eps2, 1.0, 0.5 * kk * kk * (1.0 - 2.0 * p.a * p.b * eps2)).first;
}

GrowthSlope growthSlope(double a, double b, int kMax) {
  if (kMax <= 0) throw std::domain_error("growthSlope: kMax must be positive");
  if (dispersionCoefficient(a, b) >= 0.0) return {0.0, true};
  return {dispersion(kMax, a, b).lambdaPlus.real() / kMax, false};
}

LinearModeState eigenModeState(const DispersionResult& d) {
  LinearModeState s;
  s.u2 = 1.0;
  s.sigma12 = d.sigmaMode(0, 1);
  s.sigma11 = 0.0;
  s.etaBar = 0.0;
  return s;
}

LinearModeState linearizedStep(const LinearModeState& s, int k, double a, double b, double dt) {
  const DispersionResult d = dispersion(k, a, b);
  if (dt * std::abs(d.lambdaPlus) >= 0.1)
    throw std::invalid_argument("linearizedStep: dt |lambda_plus| must stay below 0.1");
  const Complex ik(0.0, static_cast<double>(k));
  const double coupling = 2.0 * dispersionCoefficient(a, b);  // 1 - 2ab

  using State = Eigen::Vector4cd;
  // Momentum: u2' = ik sigma21; the pressure cancels d_x sigma11 in the first component.
  // Stress: sigma' = (1 - 2ab) D - sigma;  D12 = ik u2 / 2,  D11 = 0.
  // Uniform part: etaBar' = -etaBar - a.
  auto rhs = [&](const State& y) {
    State f;
    f(0) = ik * y(1);
    f(1) = coupling * 0.5 * ik * y(0) - y(1);
    f(2) = -y(2);
    f(3) = -y(3) - a;
    return f;
  };
  const State y0(s.u2, s.sigma12, s.sigma11, Complex(s.etaBar, 0.0));
  const State k1 = rhs(y0);
  const State k2 = rhs(y0 + 0.5 * dt * k1);
  const State k3 = rhs(y0 + 0.5 * dt * k2);
  const State k4 = rhs(y0 + dt * k3);
  const State y1 = y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  LinearModeState out;
  out.t = s.t + dt;
  out.u2 = y1(0);
  out.sigma12 = y1(1);
  out.sigma11 = y1(2);
  out.etaBar = y1(3).real();
  return out;
}

double fittedGrowthRate(LinearModeState state, int k, double a, double b, double dt, double tEnd) {
  const int steps = static_cast<int>(std::lround(tEnd / dt));
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (int i = 1; i <= steps; ++i) {
    state = linearizedStep(state, k, a, b, dt);
    if (state.t < 0.5 * tEnd) continue;
    const double y = std::log(std::abs(state.u2));
    st += state.t;
    sy += y;
    stt += state.t * state.t;
    sty += state.t * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fittedGrowthRate: too few samples");
  return (n * sty - st * sy) / (n * stt - st * st);
}

double InflationTrace::normProxy() const { return std::pow(static_cast<double>(k), s) * alpha.back(); }

double InflationTrace::lowerBound() const { return std::exp(lambdaPlus); }

double InflationTrace::comparisonMargin() const {
  double m = alpha.front() - alphaComparison.front();
  for (size_t i = 0; i < alpha.size(); ++i) m = std::min(m, alpha[i] - alphaComparison[i]);
  return m;
}

InflationTrace inflationOde(int k, double s, double dt) {
  if (k <= 1) throw std::domain_error("inflationOde: requires k > 1");
  if (s < 3.0) throw std::domain_error("inflationOde: requires s >= 3");
  if (!(dt > 0.0)) throw std::domain_error("inflationOde: dt must be positive");

  InflationTrace tr;
  tr.k = k;
  tr.s = s;
  const double kk = static_cast<double>(k);
  // lambda^2 + lambda - 3/2 k^2 = 0 is the a = -2, b = -1 dispersion relation.
  tr.lambdaPlus = dispersion(k, -2.0, -1.0).lambdaPlus.real();
  const double ks = std::pow(kk, s);

  auto forcing = [](double t) { return 2.0 * std::exp(1.0 - t) - 0.5; };
  auto rhs = [&](double t, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(kk * y(1), -y(1) + kk * forcing(t) * y(0));
  };

  const int steps = static_cast<int>(std::lround(1.0 / dt));
  const double h = 1.0 / steps;
  tr.times.reserve(steps + 1);
  Eigen::Vector2d y(2.0 / ks, 2.0 * tr.lambdaPlus / (ks * kk));
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.alpha.push_back(y(0));
    tr.beta.push_back(y(1));
    const double grow = std::exp(tr.lambdaPlus * t);
    tr.alphaComparison.push_back(grow / ks);
    tr.betaComparison.push_back(tr.lambdaPlus * grow / (ks * kk));
    if (!(y(0) > 0.0) || !(y(1) > 0.0))
      throw NumericalError("inflationOde: trajectory lost positivity at t = " + std::to_string(t));
  };
  record(0.0);
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Eigen::Vector2d k1 = rhs(t, y);
    const Eigen::Vector2d k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::Vector2d k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::Vector2d k4 = rhs(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record((i + 1) * h);
  }
  return tr;
}

} // namespace ovlab
