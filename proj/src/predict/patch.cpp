#include "nudeblur/predict/patch.hpp"

#include "nudeblur/error.hpp"

namespace nudeblur {

Patch extract_patch(const ImageBuffer& image, Pixel center) {
  constexpr int half = kPatchSize / 2;
  Patch p;
  p.pixels = image.crop(center.x - half, center.y - half, kPatchSize, kPatchSize);
  p.center = center;
  p.source = center;
  return p;
}

std::vector<int> window_origins(int extent, int stride) {
  if (extent < kPatchSize) {
    throw Error(ErrorKind::Bounds, "image extent " + std::to_string(extent) + " is smaller than a patch");
  }
  if (stride <= 0) throw Error(ErrorKind::InvalidArgument, "patch stride must be positive");
  std::vector<int> out;
  const int last = extent - kPatchSize;
  for (int o = 0; o <= last; o += stride) out.push_back(o);
  if (out.back() != last) out.push_back(last);
  return out;
}

std::vector<Pixel> patch_centers(int width, int height, int stride) {
  const std::vector<int> xs = window_origins(width, stride);
  const std::vector<int> ys = window_origins(height, stride);
  std::vector<Pixel> out;
  out.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) out.push_back({x + kPatchSize / 2, y + kPatchSize / 2});
  }
  return out;
}

}  // namespace nudeblur
