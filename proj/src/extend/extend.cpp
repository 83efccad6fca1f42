#include "nudeblur/extend/extend.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nudeblur/core/parallel.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/extend/rotate.hpp"

namespace nudeblur {

MotionDistribution extend_distribution(const BranchPredictions& preds) {
  const CandidateSet& base = base_candidate_set();
  const CandidateSet& ext = extended_candidate_set();
  const std::size_t per_branch = ext.orientations().size() / base.orientations().size();

  MotionDistribution out{CandidateSetId::Extended, std::vector<double>(ext.size(), 0.0)};
  for (std::size_t k = 0; k < kExtensionAngles.size(); ++k) {
    const auto it = preds.find(kExtensionAngles[k]);
    if (it == preds.end()) {
      throw Error(ErrorKind::IncompleteInput,
                  "missing prediction for rotation " + std::to_string(kExtensionAngles[k]) + " degrees");
    }
    const MotionDistribution& d = it->second;
    if (d.set_id != CandidateSetId::Base || d.probs.size() != base.size()) {
      throw Error(ErrorKind::IncompleteInput, "branch predictions must be over the base candidate set");
    }
    out.probs[0] += d.probs[0] / static_cast<double>(kExtensionAngles.size());
    for (std::size_t li = 1; li < base.lengths().size(); ++li) {
      for (std::size_t oi = 0; oi < base.orientations().size(); ++oi) {
        // Base orientation o (index oi) plus 6k lands on extended index oi * 5 + k.
        out.probs[ext.index_at(li, oi * per_branch + k)] = d.probs[base.index_at(li, oi)];
      }
    }
  }
  const double z = out.sum();
  for (double& p : out.probs) p /= z;
  return out;
}

std::vector<PatchPrediction> predict_extended(const ImageBuffer& image, const Predictor& predictor, int stride) {
  const std::vector<Pixel> centers = patch_centers(image.width(), image.height(), stride);
  constexpr int half = kPatchSize / 2;
  std::vector<BranchPredictions> branches(centers.size());

  for (int angle : kExtensionAngles) {
    const RotatedImage rotated = rotate_image(image, angle);
    std::vector<MotionDistribution> results(centers.size());
    parallel_for(centers.size(), [&](std::size_t i) {
      const Point2 q = rotated.map.forward({static_cast<double>(centers[i].x), static_cast<double>(centers[i].y)});
      const Pixel mapped{std::clamp(static_cast<int>(std::lround(q.x)), half, rotated.image.width() - half),
                         std::clamp(static_cast<int>(std::lround(q.y)), half, rotated.image.height() - half)};
      Patch patch = extract_patch(rotated.image, mapped);
      patch.source = centers[i];
      patch.rotation_deg = angle;
      results[i] = predictor.predict(patch);
    });
    for (std::size_t i = 0; i < centers.size(); ++i) branches[i].emplace(angle, std::move(results[i]));
  }

  std::vector<PatchPrediction> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) out[i] = {centers[i], extend_distribution(branches[i])};
  return out;
}

}  // namespace nudeblur
