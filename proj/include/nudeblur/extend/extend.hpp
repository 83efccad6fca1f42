#pragma once

#include <array>
#include <map>
#include <vector>

#include "nudeblur/predict/predictor.hpp"

namespace nudeblur {

/// Rotations fed to the classifier, in degrees: branch k rotates by -6k and
/// contributes orientations o + 6k.
inline constexpr std::array<int, 5> kExtensionAngles{0, -6, -12, -18, -24};

/// Base-set predictions for one patch keyed by rotation angle (degrees).
using BranchPredictions = std::map<int, MotionDistribution>;

/// Concatenates the five branches into one distribution over the 361
/// extended candidates. The five identity entries are averaged and the result
/// renormalized. Throws Error(IncompleteInput) if a branch is missing or not
/// over the base set.
MotionDistribution extend_distribution(const BranchPredictions& preds);

/// Runs the predictor on the image and its four rotated copies, cropping each
/// rotated patch at the mapped center of the original one.
std::vector<PatchPrediction> predict_extended(const ImageBuffer& image, const Predictor& predictor,
                                              int stride = kPatchStride);

}  // namespace nudeblur
