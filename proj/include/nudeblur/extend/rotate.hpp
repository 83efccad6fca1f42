#pragma once

#include "nudeblur/core/image.hpp"

namespace nudeblur {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Coordinate map of a rotation about the image center onto an enlarged
/// canvas. A motion of orientation o in the source has orientation o + theta in
/// the rotated image. Canvas sides keep the parity of the source sides so the
/// center pixel maps to the center pixel.
class RotationMap {
 public:
  RotationMap(int src_width, int src_height, double theta_deg);

  double theta_deg() const noexcept { return theta_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  Point2 forward(Point2 src) const;  // source -> rotated canvas
  Point2 inverse(Point2 dst) const;  // rotated canvas -> source

 private:
  double theta_;
  double cos_;
  double sin_;
  Point2 src_center_;
  Point2 dst_center_;
  int width_;
  int height_;
};

struct RotatedImage {
  ImageBuffer image;
  RotationMap map;
};

/// Bilinear resampling; samples falling outside the source replicate its
/// edge. Throws Error(InvalidArgument) for |theta| >= 90.
RotatedImage rotate_image(const ImageBuffer& image, double theta_deg);

}  // namespace nudeblur
