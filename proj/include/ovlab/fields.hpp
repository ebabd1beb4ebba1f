#pragma once

#include "ovlab/operators.hpp"

namespace ovlab {

/// Divergence-free, mean-zero velocity (u1, u2).
using VelocityField = VectorSpectral;
/// Symmetric 2x2 tensor stored as (11, 12, 22).
using SymTensorField = TensorSpectral;

enum TensorComponent : int { T11 = 0, T12 = 1, T22 = 2 };

struct ModelParams {
  double epsilon = 1.0;  // relaxation time is epsilon^2
  double b = -1.0;       // weight of the symmetric part of Q
  double a = 0.0;        // background stress a*Id for instability probes
  bool voigt = false;
  /// Viscosity of the limiting Navier-Stokes equations, div D(v) = Delta v / 2.
  static constexpr double nuLimit = 0.5;

  void validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  }
};

/// Antisymmetric tensor [[0, w12], [-w12, 0]].
struct SkewTensorField {
  ScalarSpectral w12;

  ComplexBlock component(int i, int j) const {
    if (i == j) return ComplexBlock::Zero(w12.grid().nx, w12.grid().ny);
    return i == 0 ? w12[0] : ComplexBlock(-w12[0]);
  }
};

/// D(u) = (grad u + grad u^T)/2 with (grad u)_ij = d_j u_i.
SymTensorField symGradient(const VelocityField& u);

/// W(u) = (grad u - grad u^T)/2; W12 = (d_y u1 - d_x u2)/2 = -omega/2.
SkewTensorField skewGradient(const VelocityField& u);

/// omega = d_x u2 - d_y u1.
ScalarSpectral vorticity(const VelocityField& u);

/// Row divergence (div tau)_i = d_j tau_ij.
VectorSpectral tensorDivergence(const SymTensorField& tau);

/// Q(tau, grad u) = tau W - W tau + b (tau D + D tau), formed pointwise and dealiased.
SymTensorField qForm(const SymTensorField& tau, const VelocityField& u, double b);

/// Pointwise Q on physical arrays; `w12` is W(u)_12. Writes (11, 12, 22).
void qFormPointwise(const RealBlock& t11, const RealBlock& t12, const RealBlock& t22, const RealBlock& d11,
                    const RealBlock& d12, const RealBlock& d22, const RealBlock& w12, double b, RealBlock& q11,
                    RealBlock& q12, RealBlock& q22);

/// u . grad f for each component of f, pseudospectral and dealiased.
template <int N>
SpectralField<N> advect(const VelocityField& u, const SpectralField<N>& f) {
  const Grid& g = u.grid();
  if (!(g == f.grid())) throw ConfigError("advect: fields live on different grids");
  auto& fft = transformFor(g);
  const RealBlock u1 = fft.inverse(u[0]);
  const RealBlock u2 = fft.inverse(u[1]);
  const auto& mask = wavenumbers(g).dealiasMask;
  SpectralField<N> out(g);
  for (int c = 0; c < N; ++c) {
    const RealBlock fx = fft.inverse(derivative(f[c], g, Axis::X));
    const RealBlock fy = fft.inverse(derivative(f[c], g, Axis::Y));
    out[c] = fft.forward(u1 * fx + u2 * fy) * mask;
  }
  return out;
}

/// sigma = tau - D(u).
SymTensorField tightenedSigma(const VelocityField& u, const SymTensorField& tau);

/// Max spectral |div u| relative to the field's L2 amplitude (0 for u = 0).
Real relativeDivergence(const VelocityField& u);

} // namespace ovlab
