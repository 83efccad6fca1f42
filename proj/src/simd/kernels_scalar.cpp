#include <algorithm>
#include <cmath>

#include "nudeblur/simd/kernels.hpp"

namespace nudeblur::simd {

namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

float dot_f32(const float* x, const float* y, std::size_t n) {
  float s = 0.0f;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double min_affine(const double* h, const double* u, const double* v, std::size_t n, double cu, double cv) {
  double best = INFINITY;
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, h[i] - cu * u[i] - cv * v[i]);
  return best;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", dot, axpy, xpby, dot_f32, axpy_f32, min_affine};
  return table;
}

}  // namespace nudeblur::simd
