#pragma once

#include <cstdint>
#include <string>

#include "ovlab/solvers.hpp"

namespace ovlab {

/// u = A (sin x cos y, -cos x sin y)
VelocityField taylorGreen(const Grid& grid, double amplitude);

/// Seeded random divergence-free, mean-zero velocity with modes 0 < |k| <= cutoff,
/// scaled so that |u|_{H^6} = amplitude.
VelocityField randomSmooth(const Grid& grid, double amplitude, std::uint64_t seed, int cutoff = 4);

/// Background tau = a Id plus a small shear wave u = (0, A cos kx) with the stress
/// on the dominant eigenvector of the linearized model described by `params`.
SimState modeProbe(const Grid& grid, int k, const ModelParams& params, double amplitude);

/// Spectral amplitude of the probe mode, |u2 at (k, 0)|.
Real probeAmplitude(const SimState& s, int k);

enum class StressInit { WellPrepared, Zero };

/// State with the given velocity and tau = D(u) (well prepared) or 0.
SimState withStress(const VelocityField& u, const ModelParams& params, StressInit init);

} // namespace ovlab
