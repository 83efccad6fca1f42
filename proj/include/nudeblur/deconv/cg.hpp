#pragma once

#include <functional>
#include <span>

namespace nudeblur {

struct CgOptions {
  double tolerance = 1e-5;  // on ||b - Ax|| / ||b||
  int max_iterations = 200;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// out = A * in for a symmetric positive definite A.
using LinearMap = std::function<void(std::span<const double> in, std::span<double> out)>;

/// Conjugate gradients on A x = b, starting from the contents of x. Stops at
/// the tolerance or after max_iterations; never throws on non-convergence.
CgResult conjugate_gradient(const LinearMap& apply, std::span<const double> b, std::span<double> x,
                            const CgOptions& options = {});

}  // namespace nudeblur
