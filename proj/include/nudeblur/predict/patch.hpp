#pragma once

#include <vector>

#include "nudeblur/core/image.hpp"

namespace nudeblur {

inline constexpr int kPatchSize = 30;
inline constexpr int kPatchStride = 6;

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// A 30 x 30 crop whose window is [center - 15, center + 15). When the crop
/// comes from a rotated copy of an image, `source` is the pixel of the
/// original image it was mapped from and `rotation_deg` the rotation applied.
struct Patch {
  ImageBuffer pixels;
  Pixel center;
  Pixel source;
  double rotation_deg = 0.0;
};

/// Throws Error(Bounds) when the window leaves the image.
Patch extract_patch(const ImageBuffer& image, Pixel center);

/// Window origins {0, s, 2s, ...} up to extent - 30, plus extent - 30 itself so
/// the last window touches the border.
std::vector<int> window_origins(int extent, int stride);

/// Patch centers in row-major order. Throws Error(Bounds) for images smaller
/// than 30 x 30.
std::vector<Pixel> patch_centers(int width, int height, int stride = kPatchStride);

}  // namespace nudeblur
