#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/motion_field.hpp"
#include "nudeblur/deconv/cg.hpp"
#include "nudeblur/deconv/gmm.hpp"
#include "nudeblur/deconv/operator.hpp"

namespace nudeblur {

struct HqsSchedule {
  double lambda_data = 2e5;
  std::vector<double> betas{50, 100, 200, 400, 800, 1600, 3200};
  double cg_tol = 1e-5;
  int cg_max_iter = 200;
  int patch_size = 8;
};

/// Throws InvalidArgument unless betas are positive and strictly increasing.
void validate(const HqsSchedule& schedule);

/// Every side x side window of a width x height plane at stride 1. Column i
/// holds the window whose top-left corner is (i % nx, i / nx), row-major.
struct PatchSet {
  int width = 0;
  int height = 0;
  int side = 8;
  Eigen::MatrixXd values;
  std::vector<int> component;  // mixture component chosen by solve_z, or empty

  int nx() const noexcept { return width - side + 1; }
  int ny() const noexcept { return height - side + 1; }
};

/// Throws InvalidArgument for multi-channel input or a plane smaller than side.
PatchSet extract_patches(const ImageBuffer& plane, int side);
/// sum_i R_i^T z_i as an image.
ImageBuffer aggregate_patches(const PatchSet& patches);
/// Number of windows covering each pixel (the diagonal of sum_i R_i^T R_i).
ImageBuffer patch_coverage(int width, int height, int side);

/// CG solve of [lambda K^T K + beta sum R^T R] I = lambda K^T O + beta sum R^T z
/// for single-channel O, starting from `init` (O when empty). Non-convergence
/// raises a warning and still returns the last iterate.
ImageBuffer solve_x(const NonUniformOperator& op, const ImageBuffer& observed, const PatchSet& patches, double lambda,
                    double beta, const CgOptions& cg = {}, const ImageBuffer& init = {}, CgResult* result = nullptr);

/// Per-patch MAP step at noise variance 1/beta: remove the DC, pick the
/// component with the highest posterior, Wiener-filter the residual, restore
/// the DC. Fills `component`.
PatchSet solve_z(const PatchSet& noisy, const GmmPrior& prior, double beta);
Eigen::VectorXd solve_z(const Eigen::VectorXd& patch, const GmmPrior& prior, double beta);

/// Half-quadratic surrogate at a fixed beta, with patch i held to mixture
/// component k_i = components[i]:
/// lambda/2 |K I - O|^2 + sum_i [beta/2 |R_i I - z_i|^2 + 1/2 |z_i - dc(z_i) - mu_k|^2_{Sigma_k^-1}].
/// The weight and normalizer of each component are constant here and left out.
double hqs_objective(const NonUniformOperator& op, const ImageBuffer& observed, const ImageBuffer& estimate,
                     const PatchSet& patches, const GmmPrior& prior, const std::vector<int>& components,
                     double lambda, double beta);

struct HqsStage {
  int channel = 0;
  double beta = 0.0;
  double before_z = 0.0;  // previous patches (R_i O at the first), this stage's components
  double after_z = 0.0;
  double after_x = 0.0;
  CgResult cg;
};

struct HqsTrace {
  std::vector<HqsStage> stages;
};

/// Non-blind deconvolution of O under the blur of `field`. Color images are
/// processed per channel with the same prior. Output clamped to [0, 1].
/// Passing a trace records the objective around every step (extra cost).
ImageBuffer deblur(const ImageBuffer& observed, const MotionField& field, const GmmPrior& prior,
                   const HqsSchedule& schedule = {}, HqsTrace* trace = nullptr);

}  // namespace nudeblur
