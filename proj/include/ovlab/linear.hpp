#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "ovlab/fields.hpp"

namespace ovlab {

/// Raised when an integrator produces a state that violates a known invariant.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Normal modes of the Euler-Oldroyd-B system linearized about u = 0, tau = a Id,
/// with unit relaxation time, for velocity (0, 1) e^{ikx}.
///
/// Growth rates solve lambda^2 + lambda + c k^2 = 0 with c = (1 - 2ab)/2.
struct DispersionResult {
  int k = 0;
  double a = 0.0;
  double b = -1.0;
  Complex lambdaPlus;
  Complex lambdaMinus;
  /// Stress amplitude of the lambda_plus mode; only the off-diagonal entries are nonzero.
  Eigen::Matrix2cd sigmaMode = Eigen::Matrix2cd::Zero();
  Complex pressureAmp{0.0, 0.0};
};

double dispersionCoefficient(double a, double b);

/// Throws std::domain_error for k = 0.
DispersionResult dispersion(int k, double a, double b);

/// Roots of A l^2 + B l + C = 0 ordered by real part, then imaginary part
/// (first = larger). Uses the cancellation-free form for real roots.
std::pair<Complex, Complex> orderedQuadraticRoots(double A, double B, double C);

/// Dominant growth rate of a single velocity mode k = (k, 0) about tau = a Id
/// for the full model: relaxation 1/epsilon^2 and, with Voigt on, the factor
/// (1 + k^2) on the stress time derivative.
Complex modeGrowthRate(int k, const ModelParams& params);

struct GrowthSlope {
  double slope = 0.0;
  bool stable = false;
};

/// Re lambda_plus(kMax) / kMax, or {0, stable} when c >= 0.
GrowthSlope growthSlope(double a, double b, int kMax);

/// One Fourier mode of the linearized system plus its spatially uniform stress part.
struct LinearModeState {
  double t = 0.0;
  Complex u2;        // velocity amplitude
  Complex sigma12;   // off-diagonal stress amplitude
  Complex sigma11;   // diagonal stress amplitude (decoupled, pure decay)
  double etaBar = 0; // uniform stress perturbation, multiple of Id

  double amplitude() const { return std::sqrt(std::norm(u2) + std::norm(sigma12) + std::norm(sigma11)); }
};

/// State lying on the lambda_plus eigenvector with unit velocity amplitude.
LinearModeState eigenModeState(const DispersionResult& d);

/// Classical RK4 step of the linearized mode equations. Requires dt |lambda_plus| < 0.1.
LinearModeState linearizedStep(const LinearModeState& s, int k, double a, double b, double dt);

/// Least-squares slope of log |u2| over the second half of [0, tEnd].
double fittedGrowthRate(LinearModeState start, int k, double a, double b, double dt, double tEnd);

struct InflationTrace {
  int k = 0;
  double s = 0.0;
  double lambdaPlus = 0.0;
  std::vector<double> times;
  std::vector<double> alpha, beta;
  std::vector<double> alphaComparison, betaComparison;

  /// k^s alpha(1), a proxy for the H^s norm of the velocity at t = 1.
  double normProxy() const;
  /// e^{lambda_plus}, the growth forced by the comparison solution.
  double lowerBound() const;
  /// min_t (alpha - alpha_1)
  double comparisonMargin() const;
};

/// Amplitude ODE of the limiting linear problem with a = -2e on [0, 1]:
///   alpha' = k beta,  beta' + beta = k (2 e^{1-t} - 1/2) alpha,
/// from alpha(0) = 2/k^s, beta(0) = 2 lambda_plus/k^{s+1}, integrated by RK4.
/// Throws NumericalError if a trajectory stops being positive.
InflationTrace inflationOde(int k, double s, double dt = 1e-4);

} // namespace ovlab
