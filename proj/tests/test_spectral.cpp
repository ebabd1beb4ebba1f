#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "support.hpp"

using namespace ovlab;
using namespace ovlab::testing;

namespace {
const Grid g{32, 32};
const double pi = M_PI;
}

TEST_CASE("grid rejects odd or tiny sizes") {
  CHECK_THROWS_AS(Grid(6, 8), ConfigError);
  CHECK_THROWS_AS(Grid(16, 15), ConfigError);
  CHECK_NOTHROW(Grid(8, 8));
  CHECK(Grid::wave(17, 32) == -15);
  CHECK(Grid::index(-3, 32) == 29);
}

TEST_CASE("sin x is the mode pair -+i/2 at (+-1, 0)") {
  const ScalarSpectral f = transform(g, RealBlock(coordinateX(g).sin()));
  CHECK(std::abs(f.mode(0, 1, 0) - Complex(0, -0.5)) < 1e-15);
  CHECK(std::abs(f.mode(0, -1, 0) - Complex(0, 0.5)) < 1e-15);
  ScalarSpectral rest = f;
  rest.mode(0, 1, 0) = rest.mode(0, -1, 0) = 0;
  CHECK(maxAbs(rest) < 1e-15);
}

TEST_CASE("constant field has only the mean mode") {
  const ScalarSpectral f = transform(g, RealBlock::Constant(g.nx, g.ny, 1.0));
  CHECK(std::abs(f.mode(0, 0, 0) - 1.0) < 1e-15);
  ScalarSpectral rest = f;
  rest.mode(0, 0, 0) = 0;
  CHECK(maxAbs(rest) < 1e-15);
}

TEST_CASE("round trip and Parseval on random fields") {
  std::mt19937_64 rng(11);
  for (const Grid& grid : {Grid(16, 16), Grid(32, 24), Grid(64, 64)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const RealBlock f = randomReal(grid, rng);
      const ScalarSpectral c = transform(grid, f);
      const RealBlock back = inverseTransform(c)[0];
      CHECK(maxAbsDiff(back, f) <= 1e-12 * f.abs().maxCoeff());
      // Grid average of |f|^2 equals the sum of squared mode amplitudes.
      const double avg = f.square().mean();
      CHECK(std::abs(avg - c.squaredAmplitude()) <= 1e-12 * avg);
      CHECK(hermitianDefect(c) < 1e-14 * f.abs().maxCoeff());
    }
  }
}

TEST_CASE("shape mismatch is a configuration error") {
  CHECK_THROWS_AS(transform(g, RealBlock::Zero(16, 32)), ConfigError);
}

TEST_CASE("derivatives of trigonometric fields") {
  const RealBlock x = coordinateX(g), y = coordinateY(g);
  const ScalarSpectral sx = transform(g, RealBlock(x.sin()));
  const RealBlock dsx = inverseTransform(derivative(sx, Axis::X))[0];
  CHECK(maxAbsDiff(dsx, x.cos()) < 1e-13);
  const RealBlock lap = inverseTransform(laplacian(sx))[0];
  CHECK(maxAbsDiff(lap, -x.sin()) < 1e-13);
  const ScalarSpectral sxsy = transform(g, RealBlock(x.sin() * y.sin()));
  const RealBlock dxy = inverseTransform(derivative(derivative(sxsy, Axis::X), Axis::Y))[0];
  CHECK(maxAbsDiff(dxy, x.cos() * y.cos()) < 1e-13);
  // Roundoff in high modes is amplified by k^3.
  const RealBlock d3 = inverseTransform(derivative(sx, Axis::X, 3))[0];
  CHECK(maxAbsDiff(d3, -x.cos()) < 1e-12);
  CHECK_THROWS_AS(derivative(sx, Axis::X, 0), ConfigError);
}

TEST_CASE("Nyquist modes are annihilated by derivatives") {
  ScalarSpectral f(g);
  f.mode(0, g.nx / 2, 0) = 1.0;
  f.mode(0, 0, g.ny / 2) = 1.0;
  CHECK(maxAbs(derivative(f, Axis::X)) == 0.0);
  CHECK(maxAbs(derivative(f, Axis::Y)) == 0.0);
}

TEST_CASE("Leray projection examples") {
  const RealBlock x = coordinateX(g), y = coordinateY(g);
  const RealBlock zero = RealBlock::Zero(g.nx, g.ny);

  const VectorSpectral grad = transform<2>(g, {RealBlock(x.sin()), zero});
  CHECK(maxAbs(lerayProject(grad)) < 1e-15);

  const VectorSpectral shear = transform<2>(g, {RealBlock(y.sin()), zero});
  CHECK(maxAbsDiff(lerayProject(shear), shear) < 1e-15);

  const VectorSpectral mixed = transform<2>(g, {RealBlock(x.sin() + y.sin()), zero});
  CHECK(maxAbsDiff(lerayProject(mixed), shear) < 1e-15);
}

TEST_CASE("Leray projection properties on random fields") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    VectorSpectral u = randomField<2>(g, rng);
    u.mode(0, 0, 0) = Complex(0.3, 0);
    const VectorSpectral p = lerayProject(u);
    const double norm = std::sqrt(u.squaredAmplitude()) * 2 * pi;
    CHECK(divergence(p)[0].abs().maxCoeff() < 1e-12 * norm);
    CHECK(maxAbsDiff(lerayProject(p), p) < 1e-12 * maxAbs(p));
    CHECK(p.mode(0, 0, 0) == u.mode(0, 0, 0));
    CHECK(hermitianDefect(p) < 1e-14);
  }
}

TEST_CASE("inverse Helmholtz") {
  ScalarSpectral f(g);
  f.mode(0, 0, 0) = 1.0;
  f.mode(0, 1, 0) = 1.0;
  f.mode(0, 1, 2) = 1.0;
  const ScalarSpectral h = inverseHelmholtz(f);
  CHECK(h.mode(0, 0, 0) == Complex(1.0));
  CHECK(h.mode(0, 1, 0) == Complex(0.5));
  CHECK(std::abs(h.mode(0, 1, 2) - 1.0 / 6.0) < 1e-16);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const TensorSpectral t = randomField<3>(g, rng);
    CHECK(maxAbsDiff(inverseHelmholtz(helmholtz(t)), t) < 1e-12 * maxAbs(t));
    // Helmholtz agrees with I - Delta where the Laplacian is exact (off Nyquist).
    CHECK(maxAbsDiff(helmholtz(t), t - laplacian(t)) < 1e-12 * maxAbs(helmholtz(t)));
  }
}

TEST_CASE("dealiased product truncates beyond the two-thirds box") {
  std::mt19937_64 rng(9);
  const ScalarSpectral a = transform(g, randomReal(g, rng));
  const ScalarSpectral b = transform(g, randomReal(g, rng));
  const ComplexBlock p = dealiasedProduct(a[0], b[0], g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!g.retained(i, j)) CHECK(p(i, j) == Complex(0.0));
}

TEST_CASE("concurrent transforms on distinct fields agree with serial ones") {
  std::mt19937_64 rng(21);
  std::vector<RealBlock> inputs;
  for (int i = 0; i < 8; ++i) inputs.push_back(randomReal(Grid(48, 48), rng));
  std::vector<ScalarSpectral> serial, parallel(inputs.size());
  for (const auto& f : inputs) serial.push_back(transform(Grid(48, 48), f));
  {
    std::vector<std::jthread> pool;
    for (size_t i = 0; i < inputs.size(); ++i)
      pool.emplace_back([&, i] { parallel[i] = transform(Grid(48, 48), inputs[i]); });
  }
  for (size_t i = 0; i < inputs.size(); ++i) CHECK(maxAbsDiff(serial[i], parallel[i]) == 0.0);
}
