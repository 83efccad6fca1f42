#include "nudeblur/metrics/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "nudeblur/error.hpp"

namespace nudeblur {

namespace {

void check_same_size(const MotionField& a, const MotionField& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorKind::DimensionMismatch, "motion fields differ in size");
  }
}

}  // namespace

double mse_motion(const MotionField& estimate, const MotionField& truth) {
  check_same_size(estimate, truth);
  if (estimate.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const Cartesian a = to_cartesian(estimate.data()[i]);
    const Cartesian b = to_cartesian(truth.data()[i]);
    total += (a.u - b.u) * (a.u - b.u) + (a.v - b.v) * (a.v - b.v);
  }
  return total / (2.0 * static_cast<double>(estimate.size()));
}

double psnr_from_mse_motion(double mse) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse / (kMaxMotionLength * kMaxMotionLength));
}

double psnr_motion(const MotionField& estimate, const MotionField& truth) {
  return psnr_from_mse_motion(mse_motion(estimate, truth));
}

double mse_ker(const MotionField& estimate, const MotionField& truth, int support) {
  check_same_size(estimate, truth);
  if (estimate.size() == 0) return 0.0;
  // Fields repeat a handful of vectors; memoize per pair.
  std::map<std::pair<std::pair<double, double>, std::pair<double, double>>, double> cache;
  double total = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const MotionVector& a = estimate.data()[i];
    const MotionVector& b = truth.data()[i];
    const auto key = std::make_pair(std::make_pair(a.length(), a.orientation()), std::make_pair(b.length(), b.orientation()));
    auto it = cache.find(key);
    if (it == cache.end()) {
      const BlurKernel ka = rasterize(a, support);
      const BlurKernel kb = rasterize(b, support);
      double s = 0.0;
      for (std::size_t j = 0; j < ka.weights().size(); ++j) {
        const double d = ka.weights()[j] - kb.weights()[j];
        s += d * d;
      }
      it = cache.emplace(key, s / static_cast<double>(ka.weights().size())).first;
    }
    total += it->second;
  }
  return total / static_cast<double>(estimate.size());
}

double psnr_image(const ImageBuffer& image, const ImageBuffer& truth) {
  if (image.width() != truth.width() || image.height() != truth.height() || image.channels() != truth.channels()) {
    throw Error(ErrorKind::DimensionMismatch, "images differ in size or channel count");
  }
  const auto a = image.samples();
  const auto b = truth.samples();
  if (a.empty()) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += (a[i] - b[i]) * (a[i] - b[i]);
  const double mse = total / static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

}  // namespace nudeblur
