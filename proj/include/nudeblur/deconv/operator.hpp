#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/kernel.hpp"
#include "nudeblur/core/motion_field.hpp"

namespace nudeblur {

/// Spatially varying blur K_M built from a motion field. Output pixel p is
/// sum over taps of k_p(o) * x(clamp(p - o)); apply_adjoint is its exact
/// transpose under the same edge-replicating boundary.
///
/// Kernels are cached by (u, v) rounded to a 0.25 pixel grid and rasterized
/// from the rounded motion.
class NonUniformOperator {
 public:
  explicit NonUniformOperator(const MotionField& field, int support = kDefaultKernelSupport);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t cached_kernels() const noexcept { return kernels_.size(); }
  std::span<const KernelTap> kernel_at(int x, int y) const {
    return kernels_[kernel_of_[static_cast<std::size_t>(y) * width_ + x]];
  }

  /// Per channel. Throws Error(DimensionMismatch) if the image size differs.
  ImageBuffer apply(const ImageBuffer& image) const;
  ImageBuffer apply_adjoint(const ImageBuffer& image) const;

  // Single-plane forms on width * height row-major samples; out is overwritten.
  void apply_plane(std::span<const double> in, std::span<double> out) const;
  void apply_adjoint_plane(std::span<const double> in, std::span<double> out) const;

 private:
  void check(std::span<const double> in, std::span<double> out) const;

  int width_;
  int height_;
  std::vector<std::vector<KernelTap>> kernels_;
  std::vector<std::uint32_t> kernel_of_;
};

}  // namespace nudeblur
