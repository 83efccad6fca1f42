#include "nudeblur/extend/rotate.hpp"

#include <algorithm>
#include <cmath>

#include "nudeblur/core/motion.hpp"
#include "nudeblur/error.hpp"

namespace nudeblur {

namespace {

int canvas_extent(double extent, int parity_of) {
  int n = static_cast<int>(std::ceil(extent - 1e-9));
  if ((n - parity_of) % 2 != 0) ++n;
  return n;
}

}  // namespace

RotationMap::RotationMap(int src_width, int src_height, double theta_deg) : theta_(theta_deg) {
  const SinCos sc = sincos_deg(theta_deg);
  cos_ = sc.cos;
  sin_ = sc.sin;
  width_ = canvas_extent(src_width * std::abs(cos_) + src_height * std::abs(sin_), src_width);
  height_ = canvas_extent(src_width * std::abs(sin_) + src_height * std::abs(cos_), src_height);
  src_center_ = {(src_width - 1) / 2.0, (src_height - 1) / 2.0};
  dst_center_ = {(width_ - 1) / 2.0, (height_ - 1) / 2.0};
}

Point2 RotationMap::forward(Point2 src) const {
  const double dx = src.x - src_center_.x;
  const double dy = src.y - src_center_.y;
  return {cos_ * dx - sin_ * dy + dst_center_.x, sin_ * dx + cos_ * dy + dst_center_.y};
}

Point2 RotationMap::inverse(Point2 dst) const {
  const double dx = dst.x - dst_center_.x;
  const double dy = dst.y - dst_center_.y;
  return {cos_ * dx + sin_ * dy + src_center_.x, -sin_ * dx + cos_ * dy + src_center_.y};
}

RotatedImage rotate_image(const ImageBuffer& image, double theta_deg) {
  if (!(std::abs(theta_deg) < 90.0)) {
    throw Error(ErrorKind::InvalidArgument, "rotation angle must lie in (-90, 90) degrees");
  }
  RotationMap map(image.width(), image.height(), theta_deg);
  ImageBuffer out(map.width(), map.height(), image.channels());
  const double max_x = image.width() - 1;
  const double max_y = image.height() - 1;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const Point2 s = map.inverse({static_cast<double>(x), static_cast<double>(y)});
      const double sx = std::clamp(s.x, 0.0, max_x);
      const double sy = std::clamp(s.y, 0.0, max_y);
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const double ax = sx - x0;
      const double ay = sy - y0;
      for (int c = 0; c < image.channels(); ++c) {
        const double top = (1.0 - ax) * image.clamped(x0, y0, c) + ax * image.clamped(x0 + 1, y0, c);
        const double bottom = (1.0 - ax) * image.clamped(x0, y0 + 1, c) + ax * image.clamped(x0 + 1, y0 + 1, c);
        out.at(x, y, c) = (1.0 - ay) * top + ay * bottom;
      }
    }
  }
  return {std::move(out), map};
}

}  // namespace nudeblur
