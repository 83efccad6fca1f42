#pragma once

#include <vector>

#include "nudeblur/core/motion_field.hpp"
#include "nudeblur/predict/cnn.hpp"
#include "nudeblur/predict/distribution.hpp"
#include "nudeblur/predict/patch.hpp"

namespace nudeblur {

/// Maps a patch to a distribution over the base candidate set.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual MotionDistribution predict(const Patch& patch) const = 0;
};

class CnnPredictor final : public Predictor {
 public:
  explicit CnnPredictor(CnnModel model);
  MotionDistribution predict(const Patch& patch) const override;

 private:
  CnnModel model_;
};

struct OracleOptions {
  // Mass spread uniformly over every candidate but the nearest.
  double softness = 0.0;
  // When > 0 the nearest candidate's mass is further scaled by
  // exp(-d^2 / (2 match_sigma^2)), d being its (u, v) distance to the truth,
  // so exact matches score higher than approximate ones.
  double match_sigma = 0.0;
};

/// Ground-truth stand-in for the classifier: mass concentrated on the
/// candidate nearest, in (u, v), to the true motion at `center`, rotated by
/// `rotation_deg`. Throws Error(Bounds) if the center is outside the field.
MotionDistribution oracle_predict(Pixel center, const MotionField& truth, const OracleOptions& options = {},
                                  double rotation_deg = 0.0,
                                  const CandidateSet& set = base_candidate_set());

class OraclePredictor final : public Predictor {
 public:
  OraclePredictor(MotionField truth, OracleOptions options = {});
  // Uses the patch's source pixel and rotation.
  MotionDistribution predict(const Patch& patch) const override;

 private:
  MotionField truth_;
  OracleOptions options_;
};

struct PatchPrediction {
  Pixel center;
  MotionDistribution distribution;
};

/// One prediction per stride-spaced 30 x 30 window, in row-major center order.
std::vector<PatchPrediction> predict_image(const ImageBuffer& image, const Predictor& predictor,
                                           int stride = kPatchStride);

}  // namespace nudeblur
