#pragma once

#include "nudeblur/fuse/confidence.hpp"
#include "nudeblur/fuse/mrf.hpp"
#include "nudeblur/fuse/shortlist.hpp"
#include "nudeblur/predict/predictor.hpp"

namespace nudeblur {

struct EstimateOptions {
  bool extended = true;
  int stride = kPatchStride;
  double fusion_sigma = kDefaultFusionSigma;
  std::size_t top_k = 20;
  std::size_t sampled = 30;
  MrfParams mrf;
};

struct FieldEstimate {
  MotionField field;
  ConfidenceVolume volume;
};

/// Patch prediction (optionally over the extended set), fusion and MRF
/// labeling in one call. The shortlist is clipped to the candidate count.
FieldEstimate estimate_field(const ImageBuffer& image, const Predictor& predictor, const EstimateOptions& options = {});

}  // namespace nudeblur
