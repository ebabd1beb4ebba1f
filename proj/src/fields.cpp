#include "ovlab/fields.hpp"

#include <cmath>

namespace ovlab {

SymTensorField symGradient(const VelocityField& u) {
  const Grid& g = u.grid();
  SymTensorField d(g);
  d[T11] = derivative(u[0], g, Axis::X);
  d[T22] = derivative(u[1], g, Axis::Y);
  d[T12] = 0.5 * (derivative(u[0], g, Axis::Y) + derivative(u[1], g, Axis::X));
  return d;
}

SkewTensorField skewGradient(const VelocityField& u) {
  const Grid& g = u.grid();
  SkewTensorField w{ScalarSpectral(g)};
  w.w12[0] = 0.5 * (derivative(u[0], g, Axis::Y) - derivative(u[1], g, Axis::X));
  return w;
}

ScalarSpectral vorticity(const VelocityField& u) {
  const Grid& g = u.grid();
  ScalarSpectral w(g);
  w[0] = derivative(u[1], g, Axis::X) - derivative(u[0], g, Axis::Y);
  return w;
}

VectorSpectral tensorDivergence(const SymTensorField& tau) {
  const Grid& g = tau.grid();
  VectorSpectral out(g);
  out[0] = derivative(tau[T11], g, Axis::X) + derivative(tau[T12], g, Axis::Y);
  out[1] = derivative(tau[T12], g, Axis::X) + derivative(tau[T22], g, Axis::Y);
  return out;
}

void qFormPointwise(const RealBlock& t11, const RealBlock& t12, const RealBlock& t22, const RealBlock& d11,
                    const RealBlock& d12, const RealBlock& d22, const RealBlock& w12, double b, RealBlock& q11,
                    RealBlock& q12, RealBlock& q22) {
  // tau W - W tau = [[-2 w t12, w (t11 - t22)], [w (t11 - t22), 2 w t12]]
  // tau D + D tau = [[2 (t11 d11 + t12 d12), d12 (t11 + t22) + t12 (d11 + d22)], [.., 2 (t12 d12 + t22 d22)]]
  q11 = -2.0 * w12 * t12 + 2.0 * b * (t11 * d11 + t12 * d12);
  q12 = w12 * (t11 - t22) + b * (d12 * (t11 + t22) + t12 * (d11 + d22));
  q22 = 2.0 * w12 * t12 + 2.0 * b * (t12 * d12 + t22 * d22);
}

SymTensorField qForm(const SymTensorField& tau, const VelocityField& u, double b) {
  const Grid& g = u.grid();
  if (!(g == tau.grid())) throw ConfigError("qForm: fields live on different grids");
  const auto phys = inverseTransform(tau);
  const auto dPhys = inverseTransform(symGradient(u));
  const auto wPhys = inverseTransform(skewGradient(u).w12);
  PhysicalField<3> q;
  qFormPointwise(phys[T11], phys[T12], phys[T22], dPhys[T11], dPhys[T12], dPhys[T22], wPhys[0], b, q[T11],
                 q[T12], q[T22]);
  auto out = transform<3>(g, q);
  dealias(out);
  return out;
}

SymTensorField tightenedSigma(const VelocityField& u, const SymTensorField& tau) {
  return tau - symGradient(u);
}

Real relativeDivergence(const VelocityField& u) {
  const Real norm = std::sqrt(u.squaredAmplitude());
  if (norm == 0.0) return 0.0;
  return divergence(u)[0].abs().maxCoeff() / norm;
}

} // namespace ovlab
