#pragma once

#include <span>
#include <vector>

#include "nudeblur/core/motion.hpp"

namespace nudeblur {

inline constexpr int kDefaultKernelSupport = 25;

// Nonzero kernel entry at offset (dx, dy) from the anchor.
struct KernelTap {
  int dx;
  int dy;
  double weight;
};

/// Square, odd-sided blur kernel anchored at its center pixel. Entries are
/// non-negative and sum to one.
class BlurKernel {
 public:
  BlurKernel(int side, std::vector<double> weights);

  int side() const noexcept { return side_; }
  int radius() const noexcept { return side_ / 2; }
  std::span<const double> weights() const noexcept { return weights_; }

  // Entry at offset (dx, dy) from the center; zero outside the support.
  double at(int dx, int dy) const;

  std::vector<KernelTap> taps() const;

 private:
  int side_;
  std::vector<double> weights_;  // row-major, side x side
};

/// Rasterizes the straight motion trace of `m` through the kernel center.
///
/// The trace covers l pixel footprints, i.e. the continuous segment
/// [-l/2, l/2] along the orientation. It is sampled at 4l evenly spaced
/// midpoints, each along-trace parameter is clamped to the outermost pixel
/// centers at +-(l-1)/2, and the samples are bilinearly splatted and the
/// result normalized. Axis-aligned motions yield l equal taps.
///
/// Throws Error(Format) if `support` is even or not positive.
BlurKernel rasterize(const MotionVector& m, int support = kDefaultKernelSupport);

}  // namespace nudeblur
