#pragma once

#include <array>
#include <complex>
#include <memory>

#include <Eigen/Core>

#include "ovlab/grid.hpp"

namespace ovlab {

using Real = double;
using Complex = std::complex<double>;
using RealBlock = Eigen::ArrayXXd;
using ComplexBlock = Eigen::ArrayXXcd;

/// Real multi-component field sampled on the grid.
template <int N>
using PhysicalField = std::array<RealBlock, N>;

/// Spectral coefficients of an N-component real field.
///
/// Coefficients are mode amplitudes: f(x) = sum_k c_k exp(i k.x), so sin x has
/// c_(1,0) = -i/2 and c_(-1,0) = i/2. Component order for symmetric tensors is
/// (11, 12, 22).
template <int N>
class SpectralField {
public:
  static constexpr int components = N;

  SpectralField() = default;
  explicit SpectralField(const Grid& grid) : grid_(grid) {
    for (auto& c : blocks_) c = ComplexBlock::Zero(grid.nx, grid.ny);
  }

  const Grid& grid() const { return grid_; }

  ComplexBlock& operator[](int c) { return blocks_[c]; }
  const ComplexBlock& operator[](int c) const { return blocks_[c]; }

  /// Coefficient of component c at integer wavenumber (k1, k2).
  Complex& mode(int c, int k1, int k2) {
    return blocks_[c](Grid::index(k1, grid_.nx), Grid::index(k2, grid_.ny));
  }
  Complex mode(int c, int k1, int k2) const {
    return blocks_[c](Grid::index(k1, grid_.nx), Grid::index(k2, grid_.ny));
  }

  void setZero() {
    for (auto& c : blocks_) c.setZero();
  }

  bool allFinite() const {
    for (const auto& c : blocks_)
      if (!c.allFinite()) return false;
    return true;
  }

  /// Sum of |c_k|^2 over all modes and components (grid average of |f|^2).
  Real squaredAmplitude() const {
    Real s = 0;
    for (const auto& c : blocks_) s += c.abs2().sum();
    return s;
  }

  SpectralField& operator+=(const SpectralField& o) {
    requireSameGrid(o);
    for (int c = 0; c < N; ++c) blocks_[c] += o.blocks_[c];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    requireSameGrid(o);
    for (int c = 0; c < N; ++c) blocks_[c] -= o.blocks_[c];
    return *this;
  }
  SpectralField& operator*=(Real s) {
    for (auto& c : blocks_) c *= s;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(Real s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, Real s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

  void requireSameGrid(const SpectralField& o) const {
    if (!(grid_ == o.grid_)) throw ConfigError("spectral fields live on different grids");
  }

private:
  Grid grid_;
  std::array<ComplexBlock, N> blocks_;
};

using ScalarSpectral = SpectralField<1>;
using VectorSpectral = SpectralField<2>;
using TensorSpectral = SpectralField<3>;

/// FFTW-backed forward/inverse transform for one grid.
///
/// Forward divides by the number of grid points so coefficients are mode
/// amplitudes; inverse is the plain synthesis sum and returns the real part.
/// Instances are not shareable across threads; use transformFor() to get a
/// per-thread cached instance.
class FourierTransform {
public:
  explicit FourierTransform(const Grid& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const Grid& grid() const { return grid_; }

  ComplexBlock forward(const RealBlock& values);
  RealBlock inverse(const ComplexBlock& coefficients);

private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
};

/// Thread-local transform cache keyed by grid shape.
FourierTransform& transformFor(const Grid& grid);

template <int N>
SpectralField<N> transform(const Grid& grid, const PhysicalField<N>& values) {
  auto& fft = transformFor(grid);
  SpectralField<N> out(grid);
  for (int c = 0; c < N; ++c) out[c] = fft.forward(values[c]);
  return out;
}

inline ScalarSpectral transform(const Grid& grid, const RealBlock& values) {
  return transform<1>(grid, PhysicalField<1>{values});
}

template <int N>
PhysicalField<N> inverseTransform(const SpectralField<N>& field) {
  auto& fft = transformFor(field.grid());
  PhysicalField<N> out;
  for (int c = 0; c < N; ++c) out[c] = fft.inverse(field[c]);
  return out;
}

/// Physical coordinates of the grid points, as (nx, ny) arrays.
RealBlock coordinateX(const Grid& grid);
RealBlock coordinateY(const Grid& grid);

/// Largest |c_k - conj(c_-k)| over the field, a measure of lost reality.
template <int N>
Real hermitianDefect(const SpectralField<N>& f) {
  const Grid& g = f.grid();
  Real worst = 0;
  for (int c = 0; c < N; ++c)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const int im = (g.nx - i) % g.nx;
        const int jm = (g.ny - j) % g.ny;
        worst = std::max(worst, std::abs(f[c](i, j) - std::conj(f[c](im, jm))));
      }
  return worst;
}

} // namespace ovlab
