#include "nudeblur/pipeline.hpp"

#include <algorithm>

#include "nudeblur/extend/extend.hpp"

namespace nudeblur {

FieldEstimate estimate_field(const ImageBuffer& image, const Predictor& predictor, const EstimateOptions& options) {
  validate(options.mrf);
  const std::vector<PatchPrediction> preds = options.extended ? predict_extended(image, predictor, options.stride)
                                                              : predict_image(image, predictor, options.stride);
  ConfidenceVolume volume = confidence_volume(preds, image.width(), image.height(), options.fusion_sigma);
  const std::size_t n = volume.candidates();
  const std::size_t top_k = std::min(options.top_k, n);
  const std::size_t sampled = std::min(options.sampled, n - top_k);
  const CandidateShortlist list = shortlist(volume, top_k, sampled, options.mrf.rng_seed);
  MotionField field = solve_mrf(volume, list, options.mrf);
  return {std::move(field), std::move(volume)};
}

}  // namespace nudeblur
