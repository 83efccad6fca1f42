#pragma once

#include <cstddef>
#include <vector>

#include "nudeblur/core/motion.hpp"

namespace nudeblur {

/// Probability vector over the candidates of one CandidateSet.
struct MotionDistribution {
  CandidateSetId set_id = CandidateSetId::Base;
  std::vector<double> probs;

  const CandidateSet& set() const { return candidate_set(set_id); }
  // Lowest index wins ties.
  std::size_t argmax() const;
  double sum() const;
};

MotionDistribution uniform_distribution(CandidateSetId id);
MotionDistribution one_hot(CandidateSetId id, std::size_t index);

/// True when entries are finite, >= 0, sum to 1 within `tol`, and the length
/// matches the set.
bool is_normalized(const MotionDistribution& d, double tol = 1e-6);

}  // namespace nudeblur
