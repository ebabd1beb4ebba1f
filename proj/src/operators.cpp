#include "ovlab/operators.hpp"

#include <map>
#include <memory>
#include <tuple>
#include <utility>

namespace ovlab {

namespace {

Wavenumbers buildWavenumbers(const Grid& g) {
  Wavenumbers w;
  w.kx.resize(g.nx, g.ny);
  w.ky.resize(g.nx, g.ny);
  w.dealias.resize(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      w.kx(i, j) = g.waveX(i);
      w.ky(i, j) = g.waveY(j);
      w.dealias(i, j) = g.retained(i, j) ? 1.0 : 0.0;
    }
  w.dx = w.kx;
  w.dy = w.ky;
  for (int j = 0; j < g.ny; ++j) w.dx(g.nx / 2, j) = 0.0;
  for (int i = 0; i < g.nx; ++i) w.dy(i, g.ny / 2) = 0.0;
  w.ksq = w.kx.square() + w.ky.square();
  w.idx = Complex(0.0, 1.0) * w.dx.cast<Complex>();
  w.idy = Complex(0.0, 1.0) * w.dy.cast<Complex>();
  w.dealiasMask = w.dealias.cast<Complex>();
  const RealBlock dsq = w.dx.square() + w.dy.square();
  w.invDsq = dsq.unaryExpr([](Real v) { return v == 0.0 ? 0.0 : 1.0 / v; });
  return w;
}

} // namespace

const Wavenumbers& wavenumbers(const Grid& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Wavenumbers>> cache;
  auto& slot = cache[{grid.nx, grid.ny}];
  if (!slot) slot = std::make_unique<Wavenumbers>(buildWavenumbers(grid));
  return *slot;
}

ComplexBlock derivative(const ComplexBlock& f, const Grid& grid, Axis axis, int order) {
  if (order < 1) throw ConfigError("derivative order must be >= 1");
  const auto& w = wavenumbers(grid);
  const ComplexBlock& ik = axis == Axis::X ? w.idx : w.idy;
  ComplexBlock out = f * ik;
  for (int n = 1; n < order; ++n) out *= ik;
  return out;
}

const RealBlock& sobolevWeight(const Grid& grid, double s) {
  thread_local std::map<std::tuple<int, int, double>, std::unique_ptr<RealBlock>> cache;
  auto& slot = cache[{grid.nx, grid.ny, s}];
  if (!slot) slot = std::make_unique<RealBlock>((1.0 + wavenumbers(grid).ksq).pow(s));
  return *slot;
}

ComplexBlock laplacian(const ComplexBlock& f, const Grid& grid) {
  const auto& w = wavenumbers(grid);
  return -f * (w.dx.square() + w.dy.square()).cast<Complex>();
}

ScalarSpectral divergence(const VectorSpectral& u) {
  ScalarSpectral d(u.grid());
  d[0] = derivative(u[0], u.grid(), Axis::X) + derivative(u[1], u.grid(), Axis::Y);
  return d;
}

VectorSpectral lerayProject(const VectorSpectral& u) {
  // Uses the derivative wavenumbers so the projection is exact for divergence().
  // Modes with d = 0 (mean, Nyquist corners) pass through unchanged.
  const auto& w = wavenumbers(u.grid());
  const ComplexBlock kdotu = (w.dx * w.invDsq).cast<Complex>() * u[0] + (w.dy * w.invDsq).cast<Complex>() * u[1];
  VectorSpectral out(u.grid());
  out[0] = u[0] - w.dx.cast<Complex>() * kdotu;
  out[1] = u[1] - w.dy.cast<Complex>() * kdotu;
  return out;
}

ComplexBlock dealiasedProduct(const ComplexBlock& a, const ComplexBlock& b, const Grid& grid) {
  auto& fft = transformFor(grid);
  const RealBlock pa = fft.inverse(a);
  const RealBlock pb = fft.inverse(b);
  ComplexBlock out = fft.forward(pa * pb);
  out *= wavenumbers(grid).dealiasMask;
  return out;
}

} // namespace ovlab
