#include "nudeblur/deconv/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "nudeblur/core/parallel.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/simd/kernels.hpp"

namespace nudeblur {

namespace {

constexpr double kCacheStep = 0.25;

MotionVector from_cache_key(long ku, long kv) {
  const double u = ku * kCacheStep;
  const double v = kv * kCacheStep;
  const double l = std::hypot(u, v);
  if (l <= 1.0) return canonicalize(1.0, 0.0);
  return from_cartesian(u, v);
}

}  // namespace

NonUniformOperator::NonUniformOperator(const MotionField& field, int support)
    : width_(field.width()), height_(field.height()), kernel_of_(field.size()) {
  std::map<std::pair<long, long>, std::uint32_t> cache;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Cartesian c = to_cartesian(field.data()[i]);
    const std::pair<long, long> key{std::lround(c.u / kCacheStep), std::lround(c.v / kCacheStep)};
    auto [it, inserted] = cache.try_emplace(key, static_cast<std::uint32_t>(kernels_.size()));
    if (inserted) kernels_.push_back(rasterize(from_cache_key(key.first, key.second), support).taps());
    kernel_of_[i] = it->second;
  }
}

void NonUniformOperator::check(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  if (in.size() != n || out.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "image does not match the motion field size");
  }
}

void NonUniformOperator::apply_plane(std::span<const double> in, std::span<double> out) const {
  check(in, out);
  const auto& kernels = simd::active();
  const int w = width_;
  parallel_for(static_cast<std::size_t>(height_), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    double* dst = &out[row * w];
    std::fill(dst, dst + w, 0.0);
    const std::uint32_t* ids = &kernel_of_[row * w];
    // Runs of pixels sharing a kernel: interior taps become shifted axpys.
    for (int x0 = 0; x0 < w;) {
      int x1 = x0 + 1;
      while (x1 < w && ids[x1] == ids[x0]) ++x1;
      for (const KernelTap& t : kernels_[ids[x0]]) {
        const double* src = &in[static_cast<std::size_t>(std::clamp(y - t.dy, 0, height_ - 1)) * w];
        const int lo = std::clamp(t.dx, x0, x1);
        const int hi = std::clamp(w + t.dx, lo, x1);
        for (int x = x0; x < lo; ++x) dst[x] += t.weight * src[std::clamp(x - t.dx, 0, w - 1)];
        if (hi > lo) kernels.axpy(t.weight, src + (lo - t.dx), dst + lo, static_cast<std::size_t>(hi - lo));
        for (int x = hi; x < x1; ++x) dst[x] += t.weight * src[std::clamp(x - t.dx, 0, w - 1)];
      }
      x0 = x1;
    }
  });
}

void NonUniformOperator::apply_adjoint_plane(std::span<const double> in, std::span<double> out) const {
  check(in, out);
  const auto& kernels = simd::active();
  const int w = width_;
  std::fill(out.begin(), out.end(), 0.0);
  for (int y = 0; y < height_; ++y) {
    const double* src = &in[static_cast<std::size_t>(y) * w];
    const std::uint32_t* ids = &kernel_of_[static_cast<std::size_t>(y) * w];
    for (int x0 = 0; x0 < w;) {
      int x1 = x0 + 1;
      while (x1 < w && ids[x1] == ids[x0]) ++x1;
      for (const KernelTap& t : kernels_[ids[x0]]) {
        double* dst = &out[static_cast<std::size_t>(std::clamp(y - t.dy, 0, height_ - 1)) * w];
        const int lo = std::clamp(t.dx, x0, x1);
        const int hi = std::clamp(w + t.dx, lo, x1);
        for (int x = x0; x < lo; ++x) dst[std::clamp(x - t.dx, 0, w - 1)] += t.weight * src[x];
        if (hi > lo) kernels.axpy(t.weight, src + lo, dst + (lo - t.dx), static_cast<std::size_t>(hi - lo));
        for (int x = hi; x < x1; ++x) dst[std::clamp(x - t.dx, 0, w - 1)] += t.weight * src[x];
      }
      x0 = x1;
    }
  }
}

ImageBuffer NonUniformOperator::apply(const ImageBuffer& image) const {
  if (image.width() != width_ || image.height() != height_) {
    throw Error(ErrorKind::DimensionMismatch, "image does not match the motion field size");
  }
  ImageBuffer out(width_, height_, image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    const ImageBuffer src = image.plane(c);
    ImageBuffer dst(width_, height_, 1);
    apply_plane(src.samples(), dst.samples());
    out.set_plane(c, dst);
  }
  return out;
}

ImageBuffer NonUniformOperator::apply_adjoint(const ImageBuffer& image) const {
  if (image.width() != width_ || image.height() != height_) {
    throw Error(ErrorKind::DimensionMismatch, "image does not match the motion field size");
  }
  ImageBuffer out(width_, height_, image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    const ImageBuffer src = image.plane(c);
    ImageBuffer dst(width_, height_, 1);
    apply_adjoint_plane(src.samples(), dst.samples());
    out.set_plane(c, dst);
  }
  return out;
}

}  // namespace nudeblur
