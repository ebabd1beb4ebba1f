#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ovlab {

/// Thrown for invalid grids, mismatched shapes and bad run configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Uniform periodic grid on [0, 2*pi)^2.
///
/// Physical arrays are stored as Eigen (nx, ny) column-major arrays, so entry
/// (i, j) is the value at x = 2*pi*i/nx, y = 2*pi*j/ny and memory runs fastest
/// along x. Spectral arrays share the shape; entry (i, j) holds wavenumber
/// (waveX(i), waveY(j)) in FFT order.
struct Grid {
  int nx = 0;
  int ny = 0;

  Grid() = default;
  Grid(int nx_, int ny_) : nx(nx_), ny(ny_) { validate(); }

  void validate() const {
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
      throw ConfigError("grid sizes must be even and >= 8, got " + std::to_string(nx) + "x" +
                        std::to_string(ny));
  }

  int points() const { return nx * ny; }

  static int wave(int index, int n) { return index <= n / 2 ? index : index - n; }
  int waveX(int i) const { return wave(i, nx); }
  int waveY(int j) const { return wave(j, ny); }

  /// Index of wavenumber k along an axis of length n (k in (-n/2, n/2]).
  static int index(int k, int n) { return k >= 0 ? k : k + n; }

  bool nyquistX(int i) const { return i == nx / 2; }
  bool nyquistY(int j) const { return j == ny / 2; }

  /// 2/3-rule: modes with |k1| > nx/3 or |k2| > ny/3 are truncated.
  bool retained(int i, int j) const {
    return 3 * std::abs(waveX(i)) <= nx && 3 * std::abs(waveY(j)) <= ny;
  }

  double spacing() const { return 2.0 * 3.14159265358979323846 / std::max(nx, ny); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

} // namespace ovlab
