#pragma once

#include <cstdint>

#include "nudeblur/core/motion_field.hpp"
#include "nudeblur/fuse/confidence.hpp"
#include "nudeblur/fuse/shortlist.hpp"

namespace nudeblur {

/// Smoothness-regularized labeling on the 4-connected pixel grid.
struct MrfParams {
  double lambda_smooth = 0.01;
  int bp_iterations = 30;
  double damping = 0.5;
  std::uint64_t rng_seed = 0;
  // Solve on every stride-th pixel and upsample labels by nearest neighbor.
  int grid_stride = 1;
};

void validate(const MrfParams& params);

/// E(M) = sum_p -C_p(m_p) + lambda * sum over undirected 4-neighbor edges of
/// |(u_p, v_p) - (u_q, v_q)|^2. Every field vector must be a member of the
/// volume's candidate set (Error(InvalidArgument) otherwise).
double energy(const MotionField& field, const ConfidenceVolume& volume, const MrfParams& params);
double smoothness_energy(const MotionField& field, double lambda);

/// Per-pixel most confident candidate.
MotionField unary_labeling(const ConfidenceVolume& volume);

/// Min-sum belief propagation with synchronous damped updates over the
/// per-pixel shortlists, then per-pixel belief argmin (ties to the lower
/// candidate index). The returned field never has higher energy than
/// unary_labeling(volume).
MotionField solve_mrf(const ConfidenceVolume& volume, const CandidateShortlist& shortlist,
                      const MrfParams& params = {});

}  // namespace nudeblur
