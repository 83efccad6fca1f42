#pragma once

#include <cstddef>

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// where the CPU supports it, an AVX2+FMA version; active() picks one at first
// use. Setting NUDEBLUR_SIMD=scalar in the environment forces the reference
// table.
namespace nudeblur::simd {

struct KernelTable {
  const char* name;

  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);

  float (*dot_f32)(const float* x, const float* y, std::size_t n);
  void (*axpy_f32)(float a, const float* x, float* y, std::size_t n);

  // min over i of h[i] - cu * u[i] - cv * v[i]
  double (*min_affine)(const double* h, const double* u, const double* v, std::size_t n, double cu,
                       double cv);
};

const KernelTable& scalar_kernels();
// nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();
const KernelTable& active();

}  // namespace nudeblur::simd
