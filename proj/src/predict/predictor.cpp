#include "nudeblur/predict/predictor.hpp"

#include <cmath>
#include <string>

#include "nudeblur/core/parallel.hpp"
#include "nudeblur/error.hpp"

namespace nudeblur {

CnnPredictor::CnnPredictor(CnnModel model) : model_(std::move(model)) { validate_model(model_); }

MotionDistribution CnnPredictor::predict(const Patch& patch) const { return cnn_forward(model_, patch.pixels); }

MotionDistribution oracle_predict(Pixel center, const MotionField& truth, const OracleOptions& options,
                                  double rotation_deg, const CandidateSet& set) {
  if (!truth.contains(center.x, center.y)) {
    throw Error(ErrorKind::Bounds, "oracle center (" + std::to_string(center.x) + ", " + std::to_string(center.y) +
                                       ") is outside the ground-truth field");
  }
  if (!(options.softness >= 0.0 && options.softness <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "oracle softness must lie in [0, 1]");
  }
  const MotionVector& m = truth.at(center.x, center.y);
  const MotionVector rotated = canonicalize(m.length(), m.orientation() + rotation_deg);
  const Cartesian c = to_cartesian(rotated);
  const std::size_t nearest = set.nearest(c.u, c.v);

  double peak = 1.0 - options.softness;
  if (options.match_sigma > 0.0) {
    const double du = set.u()[nearest] - c.u;
    const double dv = set.v()[nearest] - c.v;
    peak *= std::exp(-(du * du + dv * dv) / (2.0 * options.match_sigma * options.match_sigma));
  }
  const double rest = (1.0 - peak) / static_cast<double>(set.size() - 1);
  MotionDistribution d{set.id(), std::vector<double>(set.size(), rest)};
  d.probs[nearest] = peak;
  return d;
}

OraclePredictor::OraclePredictor(MotionField truth, OracleOptions options)
    : truth_(std::move(truth)), options_(options) {}

MotionDistribution OraclePredictor::predict(const Patch& patch) const {
  return oracle_predict(patch.source, truth_, options_, patch.rotation_deg);
}

std::vector<PatchPrediction> predict_image(const ImageBuffer& image, const Predictor& predictor, int stride) {
  const std::vector<Pixel> centers = patch_centers(image.width(), image.height(), stride);
  std::vector<PatchPrediction> out(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    out[i] = {centers[i], predictor.predict(extract_patch(image, centers[i]))};
  });
  return out;
}

}  // namespace nudeblur
