#include "ovlab/initial.hpp"

#include <random>

#include "ovlab/linear.hpp"

namespace ovlab {

VelocityField taylorGreen(const Grid& grid, double amplitude) {
  const RealBlock x = coordinateX(grid);
  const RealBlock y = coordinateY(grid);
  PhysicalField<2> v{amplitude * x.sin() * y.cos(), -amplitude * x.cos() * y.sin()};
  return transform<2>(grid, v);
}

VelocityField randomSmooth(const Grid& grid, double amplitude, std::uint64_t seed, int cutoff) {
  if (cutoff < 1 || 3 * cutoff > std::min(grid.nx, grid.ny))
    throw ConfigError("random-smooth: cutoff must lie inside the dealiased band");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  VelocityField u(grid);
  for (int c = 0; c < 2; ++c)
    for (int k2 = -cutoff; k2 <= cutoff; ++k2)
      for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
        const double re = uniform(rng);
        const double im = uniform(rng);
        if ((k1 == 0 && k2 == 0) || k1 * k1 + k2 * k2 > cutoff * cutoff) continue;
        u.mode(c, k1, k2) = Complex(re, im);
      }
  // Real part of the synthesized field restores Hermitian symmetry.
  u = transform<2>(grid, inverseTransform(u));
  u = lerayProject(u);
  // Roundoff from the round trip leaks outside the ball; keep the support exact.
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (grid.waveX(i) * grid.waveX(i) + grid.waveY(j) * grid.waveY(j) > cutoff * cutoff) u[c](i, j) = 0.0;
  u.mode(0, 0, 0) = 0.0;
  u.mode(1, 0, 0) = 0.0;

  const Real norm = std::sqrt(sobolevNormSquared(u, 6.0));
  if (norm > 0.0) u *= amplitude / norm;
  return u;
}

SimState modeProbe(const Grid& grid, int k, const ModelParams& params, double amplitude) {
  if (k <= 0 || 3 * k > grid.nx) throw ConfigError("mode-probe: k must be positive and inside the dealiased band");
  params.validate();
  SimState s(grid, params);
  const Complex lambda = modeGrowthRate(k, params);
  const Complex stress = Complex(0.0, -1.0) * lambda / static_cast<double>(k);

  // u2 = Re(A e^{ikx}), tau12 = Re(A stress e^{ikx})
  s.u.mode(1, k, 0) = 0.5 * amplitude;
  s.u.mode(1, -k, 0) = 0.5 * amplitude;
  s.tau.mode(T12, k, 0) = 0.5 * amplitude * stress;
  s.tau.mode(T12, -k, 0) = 0.5 * amplitude * std::conj(stress);
  s.tau.mode(T11, 0, 0) = params.a;
  s.tau.mode(T22, 0, 0) = params.a;
  return s;
}

Real probeAmplitude(const SimState& s, int k) { return 2.0 * std::abs(s.u.mode(1, k, 0)); }

SimState withStress(const VelocityField& u, const ModelParams& params, StressInit init) {
  params.validate();
  SimState s(u.grid(), params);
  s.u = u;
  if (init == StressInit::WellPrepared) s.tau = symGradient(u);
  return s;
}

} // namespace ovlab
