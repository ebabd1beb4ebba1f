#pragma once

#include "ovlab/spectral.hpp"

namespace ovlab {

/// Per-grid wavenumber tables, cached per thread.
///
/// `kx`/`ky` are the true integer wavenumbers; `dx`/`dy` are the same with
/// Nyquist entries zeroed and are what the derivative operators use.
struct Wavenumbers {
  RealBlock kx, ky;
  RealBlock dx, dy;
  RealBlock ksq;      // kx^2 + ky^2
  RealBlock dealias;  // 1 on retained modes, 0 beyond the 2/3 cutoff
  ComplexBlock idx, idy;     // i dx, i dy
  ComplexBlock dealiasMask;  // dealias as complex
  RealBlock invDsq;          // 1/(dx^2 + dy^2), 0 where the denominator vanishes
};

/// (1 + |k|^2)^s, cached per thread.
const RealBlock& sobolevWeight(const Grid& grid, double s);

const Wavenumbers& wavenumbers(const Grid& grid);

enum class Axis { X = 0, Y = 1 };

/// Multiplies each coefficient by (i k_axis)^order.
ComplexBlock derivative(const ComplexBlock& f, const Grid& grid, Axis axis, int order = 1);

template <int N>
SpectralField<N> derivative(const SpectralField<N>& f, Axis axis, int order = 1) {
  SpectralField<N> out(f.grid());
  for (int c = 0; c < N; ++c) out[c] = derivative(f[c], f.grid(), axis, order);
  return out;
}

ComplexBlock laplacian(const ComplexBlock& f, const Grid& grid);

template <int N>
SpectralField<N> laplacian(const SpectralField<N>& f) {
  SpectralField<N> out(f.grid());
  for (int c = 0; c < N; ++c) out[c] = laplacian(f[c], f.grid());
  return out;
}

/// Zeroes all modes outside the 2/3-rule box.
template <int N>
void dealias(SpectralField<N>& f) {
  const auto& w = wavenumbers(f.grid());
  for (int c = 0; c < N; ++c) f[c] *= w.dealiasMask;
}

/// Multiplier (1 + |k|^2), i.e. the operator (I - Delta).
template <int N>
SpectralField<N> helmholtz(const SpectralField<N>& f) {
  const auto& w = wavenumbers(f.grid());
  SpectralField<N> out = f;
  for (int c = 0; c < N; ++c) out[c] *= (1.0 + w.ksq).template cast<Complex>();
  return out;
}

/// Inverse of helmholtz(): coefficient at k divided by (1 + |k|^2).
template <int N>
SpectralField<N> inverseHelmholtz(const SpectralField<N>& f) {
  const auto& w = wavenumbers(f.grid());
  SpectralField<N> out = f;
  for (int c = 0; c < N; ++c) out[c] /= (1.0 + w.ksq).template cast<Complex>();
  return out;
}

ScalarSpectral divergence(const VectorSpectral& u);

/// Orthogonal projection onto divergence-free fields: u - k (k.u)/|k|^2.
/// The mean mode is passed through unchanged.
VectorSpectral lerayProject(const VectorSpectral& u);

/// Pointwise product of two real fields given spectrally, dealiased.
ComplexBlock dealiasedProduct(const ComplexBlock& a, const ComplexBlock& b, const Grid& grid);

} // namespace ovlab
