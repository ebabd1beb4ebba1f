#pragma once

#include <random>

#include "ovlab/fields.hpp"

namespace ovlab::testing {

inline RealBlock randomReal(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  RealBlock r(g.nx, g.ny);
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = n(rng);
  return r;
}

/// Random real field, dealiased so products of two such fields stay resolved.
template <int N>
SpectralField<N> randomField(const Grid& g, std::mt19937_64& rng) {
  PhysicalField<N> p;
  for (auto& c : p) c = randomReal(g, rng);
  SpectralField<N> f = transform<N>(g, p);
  dealias(f);
  return f;
}

inline VelocityField randomVelocity(const Grid& g, std::mt19937_64& rng) {
  VelocityField u = lerayProject(randomField<2>(g, rng));
  u.mode(0, 0, 0) = 0.0;
  u.mode(1, 0, 0) = 0.0;
  return u;
}

/// (sin x cos y, -cos x sin y)
inline VelocityField taylorGreenField(const Grid& g) {
  const RealBlock x = coordinateX(g), y = coordinateY(g);
  return transform<2>(g, {RealBlock(x.sin() * y.cos()), RealBlock(-x.cos() * y.sin())});
}

inline double maxAbsDiff(const RealBlock& a, const RealBlock& b) { return (a - b).abs().maxCoeff(); }

template <int N>
double maxAbsDiff(const SpectralField<N>& a, const SpectralField<N>& b) {
  double m = 0;
  for (int c = 0; c < N; ++c) m = std::max(m, (a[c] - b[c]).abs().maxCoeff());
  return m;
}

template <int N>
double maxAbs(const SpectralField<N>& a) {
  double m = 0;
  for (int c = 0; c < N; ++c) m = std::max(m, a[c].abs().maxCoeff());
  return m;
}

} // namespace ovlab::testing
