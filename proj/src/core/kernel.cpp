#include "nudeblur/core/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nudeblur/error.hpp"

namespace nudeblur {

BlurKernel::BlurKernel(int side, std::vector<double> weights)
    : side_(side), weights_(std::move(weights)) {
  if (side_ <= 0 || side_ % 2 == 0) {
    throw Error(ErrorKind::Format, "kernel side must be odd and positive, got " + std::to_string(side_));
  }
  if (weights_.size() != static_cast<std::size_t>(side_) * side_) {
    throw Error(ErrorKind::Format, "kernel weights do not match side length");
  }
}

double BlurKernel::at(int dx, int dy) const {
  const int r = radius();
  if (std::abs(dx) > r || std::abs(dy) > r) return 0.0;
  return weights_[static_cast<std::size_t>(dy + r) * side_ + (dx + r)];
}

std::vector<KernelTap> BlurKernel::taps() const {
  std::vector<KernelTap> out;
  const int r = radius();
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double w = at(dx, dy);
      if (w != 0.0) out.push_back({dx, dy, w});
    }
  }
  return out;
}

BlurKernel rasterize(const MotionVector& m, int support) {
  if (support <= 0 || support % 2 == 0) {
    throw Error(ErrorKind::Format, "kernel support must be odd and positive, got " + std::to_string(support));
  }
  const int r = support / 2;
  std::vector<double> w(static_cast<std::size_t>(support) * support, 0.0);

  const double l = m.length();
  const double half_centers = (l - 1.0) / 2.0;
  const SinCos sc = sincos_deg(m.orientation());
  const int samples = std::max(4, static_cast<int>(std::ceil(4.0 * l)));
  const double step = l / samples;

  auto splat = [&](int x, int y, double weight) {
    if (std::abs(x) > r || std::abs(y) > r || weight == 0.0) return;
    w[static_cast<std::size_t>(y + r) * support + (x + r)] += weight;
  };

  for (int s = 0; s < samples; ++s) {
    const double t = std::clamp(-l / 2.0 + (s + 0.5) * step, -half_centers, half_centers);
    const double x = t * sc.cos;
    const double y = t * sc.sin;
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const double ax = x - fx;
    const double ay = y - fy;
    const int ix = static_cast<int>(fx);
    const int iy = static_cast<int>(fy);
    splat(ix, iy, (1.0 - ax) * (1.0 - ay));
    splat(ix + 1, iy, ax * (1.0 - ay));
    splat(ix, iy + 1, (1.0 - ax) * ay);
    splat(ix + 1, iy + 1, ax * ay);
  }

  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return BlurKernel(support, std::move(w));
}

}  // namespace nudeblur
