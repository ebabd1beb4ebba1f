#include "ovlab/spectral.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace ovlab {

namespace {
// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planMutex() {
  static std::mutex m;
  return m;
}
} // namespace

struct FourierTransform::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

FourierTransform::FourierTransform(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  grid_.validate();
  std::lock_guard lock(planMutex());
  plans_->buffer = fftw_alloc_complex(static_cast<size_t>(grid_.points()));
  // Memory is x-fastest, so FFTW sees a row-major [ny][nx] array.
  plans_->forward = fftw_plan_dft_2d(grid_.ny, grid_.nx, plans_->buffer, plans_->buffer, FFTW_FORWARD,
                                     FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_2d(grid_.ny, grid_.nx, plans_->buffer, plans_->buffer, FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planMutex());
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->backward);
  fftw_free(plans_->buffer);
}

ComplexBlock FourierTransform::forward(const RealBlock& values) {
  if (values.rows() != grid_.nx || values.cols() != grid_.ny)
    throw ConfigError("transform: array shape does not match the grid");
  const Eigen::Index n = grid_.points();
  auto* buf = plans_->buffer;
  const double* src = values.data();
  for (Eigen::Index p = 0; p < n; ++p) {
    buf[p][0] = src[p];
    buf[p][1] = 0.0;
  }
  fftw_execute(plans_->forward);
  ComplexBlock out(grid_.nx, grid_.ny);
  const double scale = 1.0 / static_cast<double>(n);
  Complex* dst = out.data();
  for (Eigen::Index p = 0; p < n; ++p) dst[p] = Complex(buf[p][0] * scale, buf[p][1] * scale);
  return out;
}

RealBlock FourierTransform::inverse(const ComplexBlock& coefficients) {
  if (coefficients.rows() != grid_.nx || coefficients.cols() != grid_.ny)
    throw ConfigError("inverse transform: array shape does not match the grid");
  const Eigen::Index n = grid_.points();
  auto* buf = plans_->buffer;
  const Complex* src = coefficients.data();
  for (Eigen::Index p = 0; p < n; ++p) {
    buf[p][0] = src[p].real();
    buf[p][1] = src[p].imag();
  }
  fftw_execute(plans_->backward);
  RealBlock out(grid_.nx, grid_.ny);
  double* dst = out.data();
  for (Eigen::Index p = 0; p < n; ++p) dst[p] = buf[p][0];
  return out;
}

FourierTransform& transformFor(const Grid& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FourierTransform>> cache;
  auto& slot = cache[{grid.nx, grid.ny}];
  if (!slot) slot = std::make_unique<FourierTransform>(grid);
  return *slot;
}

RealBlock coordinateX(const Grid& grid) {
  RealBlock x(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) x(i, j) = 2.0 * M_PI * i / grid.nx;
  return x;
}

RealBlock coordinateY(const Grid& grid) {
  RealBlock y(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) y(i, j) = 2.0 * M_PI * j / grid.ny;
  return y;
}

} // namespace ovlab
