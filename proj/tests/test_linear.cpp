#include <doctest.h>

#include <cmath>
#include <random>

#include "ovlab/linear.hpp"

using namespace ovlab;

namespace {
double closedFormPlus(int k) { return (-1.0 + std::sqrt(1.0 + 6.0 * k * k)) / 2.0; }
}

TEST_CASE("dispersion examples") {
  const DispersionResult d = dispersion(2, -2.0, -1.0);
  CHECK(d.lambdaPlus.real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.lambdaPlus.imag() == 0.0);
  CHECK(d.lambdaMinus.real() == doctest::Approx(-3.0).epsilon(1e-15));

  for (int k : {1, 3, 50}) {
    const DispersionResult n = dispersion(k, -0.5, -1.0);
    CHECK(std::abs(n.lambdaPlus) < 1e-15);
    CHECK(std::abs(n.lambdaMinus + 1.0) < 1e-15);
  }

  const DispersionResult osc = dispersion(1, 0.0, -1.0);
  CHECK(std::abs(osc.lambdaPlus - Complex(-0.5, 0.5)) < 1e-15);
  CHECK(std::abs(osc.lambdaMinus - Complex(-0.5, -0.5)) < 1e-15);

  CHECK_THROWS_AS(dispersion(0, -2.0, -1.0), std::domain_error);
}

TEST_CASE("mode tensor and pressure") {
  for (int k : {1, 2, 7}) {
    const DispersionResult d = dispersion(k, -2.0, -1.0);
    const Complex expect = Complex(0, -1) * d.lambdaPlus / static_cast<double>(k);
    CHECK(std::abs(d.sigmaMode(0, 1) - expect) < 1e-15);
    CHECK(d.sigmaMode(1, 0) == d.sigmaMode(0, 1));
    CHECK(d.sigmaMode(0, 0) == Complex(0));
    CHECK(d.sigmaMode(1, 1) == Complex(0));
    CHECK(d.pressureAmp == Complex(0));
  }
}

TEST_CASE("root residual and ordering over k <= 1024") {
  for (double a : {-2.0, -0.5, 0.0, 1.5})
    for (double b : {-1.0, 0.4})
      for (int k = 1; k <= 1024; ++k) {
        const DispersionResult d = dispersion(k, a, b);
        const double c = (1.0 - 2.0 * a * b) / 2.0;
        for (Complex l : {d.lambdaPlus, d.lambdaMinus}) {
          const Complex r = l * l + l + c * k * k;
          CHECK(std::abs(r) < 1e-12 * std::max(1.0, std::norm(l)));
        }
        const bool ordered = d.lambdaPlus.real() > d.lambdaMinus.real() ||
                             (d.lambdaPlus.real() == d.lambdaMinus.real() && d.lambdaPlus.imag() >= d.lambdaMinus.imag());
        CHECK(ordered);
      }
}

TEST_CASE("unstable branch grows at least linearly in k") {
  double prev = -1;
  for (int k = 1; k <= 1024; ++k) {
    const double re = dispersion(k, -2.0, -1.0).lambdaPlus.real();
    CHECK(std::abs(re - closedFormPlus(k)) <= 1e-12 * closedFormPlus(k));
    CHECK(re > prev);
    if (k >= 2) CHECK(re >= k);
    prev = re;
  }
  CHECK(dispersion(1, -2.0, -1.0).lambdaPlus.real() >= 0.8);
}

TEST_CASE("growth slope") {
  CHECK(growthSlope(-2.0, -1.0, 512).slope == doctest::Approx(std::sqrt(6.0) / 2.0).epsilon(1e-3));
  CHECK(growthSlope(-2.0, -1.0, 8).slope == doctest::Approx((-1.0 + std::sqrt(385.0)) / 16.0).epsilon(1e-13));
  CHECK(growthSlope(-2.0, -1.0, 8).slope == doctest::Approx(1.163839).epsilon(1e-6));
  const GrowthSlope s = growthSlope(-0.5, -1.0, 100);
  CHECK(s.stable);
  CHECK(s.slope == 0.0);
}

TEST_CASE("quadratic roots avoid cancellation") {
  const auto [p, m] = orderedQuadraticRoots(1.0, 1e8, 1.0);
  CHECK(p.real() == doctest::Approx(-1e-8).epsilon(1e-12));
  CHECK(m.real() == doctest::Approx(-1e8).epsilon(1e-12));
}

TEST_CASE("general model growth rate") {
  ModelParams p;
  p.a = -2.0;
  CHECK(std::abs(modeGrowthRate(2, p) - dispersion(2, -2.0, -1.0).lambdaPlus) < 1e-14);
  p.epsilon = 0.3;
  p.voigt = true;
  for (int k : {1, 4, 16}) {
    const Complex l = modeGrowthRate(k, p);
    const double e2 = p.epsilon * p.epsilon;
    const Complex r = (1.0 + k * k) * e2 * l * l + l + k * k * (1.0 - 2.0 * p.a * p.b * e2) / 2.0;
    CHECK(std::abs(r) < 1e-10 * std::max(1.0, std::norm(l) * (1.0 + k * k) * e2));
  }
  // Past the instability threshold, Voigt rates saturate in k.
  p.epsilon = 0.6;
  CHECK(modeGrowthRate(8, p).real() > 0.0);
  CHECK(modeGrowthRate(64, p).real() < 2.0 * modeGrowthRate(8, p).real());
}

TEST_CASE("linearized stepper on the unstable eigenvector") {
  const DispersionResult d = dispersion(2, -2.0, -1.0);
  LinearModeState s = eigenModeState(d);
  const double a0 = std::abs(s.u2);
  const double dt = 1e-3;
  for (int i = 0; i < 1000; ++i) s = linearizedStep(s, 2, -2.0, -1.0, dt);
  CHECK(std::abs(s.u2) / a0 == doctest::Approx(std::exp(2.0)).epsilon(0.01));
  CHECK(s.t == doctest::Approx(1.0));
  CHECK(std::abs(s.sigma12 / s.u2 - d.sigmaMode(0, 1)) < 1e-8);
  CHECK_THROWS(linearizedStep(s, 2, -2.0, -1.0, 0.06));
}

TEST_CASE("neutral root keeps the amplitude") {
  LinearModeState s = eigenModeState(dispersion(3, -0.5, -1.0));
  const double amp = s.amplitude();
  for (int i = 0; i < 2000; ++i) s = linearizedStep(s, 3, -0.5, -1.0, 1e-3);
  CHECK(std::abs(s.amplitude() - amp) < 1e-6);
}

TEST_CASE("random start converges to the dominant rate") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  LinearModeState s;
  s.u2 = Complex(u(rng), u(rng));
  s.sigma12 = Complex(u(rng), u(rng));
  s.sigma11 = Complex(u(rng), u(rng));
  CHECK(fittedGrowthRate(s, 2, -2.0, -1.0, 1e-3, 3.0) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("eigen-consistency of stepper and dispersion") {
  for (int k : {1, 2, 4, 8}) {
    const DispersionResult d = dispersion(k, -2.0, -1.0);
    const double lp = d.lambdaPlus.real();
    const double rate = fittedGrowthRate(eigenModeState(d), k, -2.0, -1.0, 0.05 / lp, 2.0 / lp);
    CHECK(std::abs(rate - lp) < 0.01 * lp);
  }
}

TEST_CASE("uniform stress component follows the background decay") {
  LinearModeState s = eigenModeState(dispersion(2, -2.0, -1.0));
  for (int i = 0; i < 1000; ++i) s = linearizedStep(s, 2, -2.0, -1.0, 1e-3);
  // etaBar' = -etaBar - a from 0 gives (e^{-t} - 1) a.
  CHECK(s.etaBar == doctest::Approx((std::exp(-1.0) - 1.0) * -2.0).epsilon(1e-10));
}

TEST_CASE("norm-inflation ODE") {
  const InflationTrace tr = inflationOde(2, 3.0);
  CHECK(tr.lambdaPlus == doctest::Approx(2.0));
  CHECK(tr.alpha.back() >= std::exp(2.0) / 8.0);
  CHECK(tr.normProxy() >= std::exp(2.0));
  CHECK(tr.lowerBound() == doctest::Approx(7.389056098930650));
  CHECK(tr.beta.front() == doctest::Approx(2.0 * 2.0 / 16.0));
  CHECK(tr.betaComparison.front() < tr.beta.front());
  CHECK(tr.comparisonMargin() >= -1e-9);
  for (size_t i = 0; i < tr.times.size(); i += 500) {
    CHECK(tr.alphaComparison[i] == doctest::Approx(std::exp(2.0 * tr.times[i]) / 8.0).epsilon(1e-13));
    CHECK(tr.alpha[i] > 0);
    CHECK(tr.beta[i] > 0);
    CHECK(tr.beta[i] >= tr.betaComparison[i] - 1e-9);
  }
  CHECK(tr.times.back() == doctest::Approx(1.0));

  const InflationTrace t4 = inflationOde(4, 3.0);
  CHECK(t4.lambdaPlus == doctest::Approx((-1.0 + std::sqrt(97.0)) / 2.0));
  CHECK(t4.lowerBound() == doctest::Approx(83.4651).epsilon(1e-5));
  CHECK(t4.normProxy() >= t4.lowerBound());

  CHECK_THROWS_AS(inflationOde(1, 3.0), std::domain_error);
  CHECK_THROWS_AS(inflationOde(2, 2.0), std::domain_error);
}
