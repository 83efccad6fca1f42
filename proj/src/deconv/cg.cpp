#include "nudeblur/deconv/cg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nudeblur/error.hpp"
#include "nudeblur/simd/kernels.hpp"

namespace nudeblur {

CgResult conjugate_gradient(const LinearMap& apply, std::span<const double> b, std::span<double> x,
                            const CgOptions& options) {
  if (b.size() != x.size()) throw Error(ErrorKind::DimensionMismatch, "CG right-hand side and iterate differ in size");
  const auto& k = simd::active();
  const std::size_t n = b.size();
  CgResult result;

  const double b_norm = std::sqrt(k.dot(b.data(), b.data(), n));
  std::vector<double> r(n);
  std::vector<double> p(n);
  std::vector<double> ap(n);

  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }
  apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rr = k.dot(r.data(), r.data(), n);
  result.relative_residual = std::sqrt(rr) / b_norm;
  if (result.relative_residual <= options.tolerance) {
    result.converged = true;
    return result;
  }

  p = r;
  for (int it = 0; it < options.max_iterations; ++it) {
    apply(p, ap);
    const double pap = k.dot(p.data(), ap.data(), n);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    k.axpy(alpha, p.data(), x.data(), n);
    k.axpy(-alpha, ap.data(), r.data(), n);
    const double rr_next = k.dot(r.data(), r.data(), n);
    result.iterations = it + 1;
    result.relative_residual = std::sqrt(rr_next) / b_norm;
    if (result.relative_residual <= options.tolerance) {
      result.converged = true;
      break;
    }
    k.xpby(r.data(), rr_next / rr, p.data(), n);
    rr = rr_next;
  }
  return result;
}

}  // namespace nudeblur
