#include "nudeblur/predict/distribution.hpp"

#include <cmath>
#include <numeric>

namespace nudeblur {

std::size_t MotionDistribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

double MotionDistribution::sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

MotionDistribution uniform_distribution(CandidateSetId id) {
  const std::size_t n = candidate_set(id).size();
  return {id, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

MotionDistribution one_hot(CandidateSetId id, std::size_t index) {
  MotionDistribution d{id, std::vector<double>(candidate_set(id).size(), 0.0)};
  d.probs.at(index) = 1.0;
  return d;
}

bool is_normalized(const MotionDistribution& d, double tol) {
  if (d.probs.size() != d.set().size()) return false;
  for (double p : d.probs) {
    if (!std::isfinite(p) || p < 0.0) return false;
  }
  return std::abs(d.sum() - 1.0) <= tol;
}

}  // namespace nudeblur
