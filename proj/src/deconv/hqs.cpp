#include "nudeblur/deconv/hqs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nudeblur/core/warning.hpp"
#include "nudeblur/error.hpp"

namespace nudeblur {

void validate(const HqsSchedule& s) {
  if (!(s.lambda_data >= 0.0) || !std::isfinite(s.lambda_data)) {
    throw Error(ErrorKind::InvalidArgument, "lambda_data must be finite and >= 0");
  }
  for (std::size_t i = 0; i < s.betas.size(); ++i) {
    if (!(s.betas[i] > 0.0) || !std::isfinite(s.betas[i])) throw Error(ErrorKind::InvalidArgument, "beta must be positive");
    if (i > 0 && !(s.betas[i] > s.betas[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "beta schedule must be strictly increasing");
    }
  }
  if (!(s.cg_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "cg_tol must be positive");
  if (s.cg_max_iter < 1) throw Error(ErrorKind::InvalidArgument, "cg_max_iter must be >= 1");
  if (s.patch_size < 1) throw Error(ErrorKind::InvalidArgument, "patch_size must be >= 1");
}

PatchSet extract_patches(const ImageBuffer& plane, int side) {
  if (plane.channels() != 1) throw Error(ErrorKind::InvalidArgument, "patch extraction needs a single-channel plane");
  if (side < 1 || plane.width() < side || plane.height() < side) {
    throw Error(ErrorKind::InvalidArgument, "image is smaller than the " + std::to_string(side) + "x" +
                                                std::to_string(side) + " patch size");
  }
  PatchSet p{plane.width(), plane.height(), side, {}, {}};
  const int nx = p.nx();
  p.values.resize(side * side, static_cast<Eigen::Index>(nx) * p.ny());
  for (int py = 0; py < p.ny(); ++py) {
    for (int px = 0; px < nx; ++px) {
      auto col = p.values.col(static_cast<Eigen::Index>(py) * nx + px);
      for (int dy = 0; dy < side; ++dy) {
        for (int dx = 0; dx < side; ++dx) col[dy * side + dx] = plane.at(px + dx, py + dy);
      }
    }
  }
  return p;
}

ImageBuffer aggregate_patches(const PatchSet& p) {
  ImageBuffer out(p.width, p.height, 1);
  const int nx = p.nx();
  for (int py = 0; py < p.ny(); ++py) {
    for (int px = 0; px < nx; ++px) {
      const auto col = p.values.col(static_cast<Eigen::Index>(py) * nx + px);
      for (int dy = 0; dy < p.side; ++dy) {
        for (int dx = 0; dx < p.side; ++dx) out.at(px + dx, py + dy) += col[dy * p.side + dx];
      }
    }
  }
  return out;
}

ImageBuffer patch_coverage(int width, int height, int side) {
  ImageBuffer out(width, height, 1);
  // Windows covering column x start in [x - side + 1, x] intersected with [0, width - side].
  auto count = [side](int x, int extent) {
    return std::min(x, extent - side) - std::max(0, x - side + 1) + 1;
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = static_cast<double>(count(x, width) * count(y, height));
  }
  return out;
}

ImageBuffer solve_x(const NonUniformOperator& op, const ImageBuffer& observed, const PatchSet& patches, double lambda,
                    double beta, const CgOptions& cg, const ImageBuffer& init, CgResult* result) {
  if (observed.channels() != 1) throw Error(ErrorKind::InvalidArgument, "solve_x works on one channel");
  if (observed.width() != op.width() || observed.height() != op.height() || patches.width != op.width() ||
      patches.height != op.height()) {
    throw Error(ErrorKind::DimensionMismatch, "observed image, patches and operator differ in size");
  }
  if (!init.empty() && (init.width() != op.width() || init.height() != op.height() || init.channels() != 1)) {
    throw Error(ErrorKind::DimensionMismatch, "initial estimate does not match the observed image");
  }
  const ImageBuffer coverage = patch_coverage(op.width(), op.height(), patches.side);
  const ImageBuffer agg = aggregate_patches(patches);
  const std::size_t n = observed.pixel_count();

  std::vector<double> b(n);
  op.apply_adjoint_plane(observed.samples(), b);
  for (std::size_t i = 0; i < n; ++i) b[i] = lambda * b[i] + beta * agg.samples()[i];

  std::vector<double> tmp(n);
  const LinearMap a = [&](std::span<const double> in, std::span<double> out) {
    op.apply_plane(in, tmp);
    op.apply_adjoint_plane(tmp, out);
    for (std::size_t i = 0; i < n; ++i) out[i] = lambda * out[i] + beta * coverage.samples()[i] * in[i];
  };

  ImageBuffer x = init.empty() ? observed : init;
  const CgResult r = conjugate_gradient(a, b, x.samples(), cg);
  if (!r.converged) {
    warn("conjugate gradients stopped after " + std::to_string(r.iterations) + " iterations with relative residual " +
         std::to_string(r.relative_residual));
  }
  if (result) *result = r;
  return x;
}

PatchSet solve_z(const PatchSet& noisy, const GmmPrior& prior, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta must be positive");
  if (noisy.values.rows() != prior.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "patch dimension does not match the mixture");
  }
  const double noise = 1.0 / beta;
  const Eigen::Index count = noisy.values.cols();
  const Eigen::RowVectorXd dc = noisy.values.colwise().mean();
  const Eigen::MatrixXd residual = noisy.values.rowwise() - dc;

  // Posterior component per patch.
  Eigen::VectorXd best_score = Eigen::VectorXd::Constant(count, -std::numeric_limits<double>::infinity());
  std::vector<int> best(static_cast<std::size_t>(count), 0);
  for (std::size_t k = 0; k < prior.size(); ++k) {
    const Eigen::VectorXd s = prior.component_log_density(k, residual, noise);
    for (Eigen::Index i = 0; i < count; ++i) {
      if (s[i] > best_score[i]) {
        best_score[i] = s[i];
        best[static_cast<std::size_t>(i)] = static_cast<int>(k);
      }
    }
  }

  PatchSet out{noisy.width, noisy.height, noisy.side, Eigen::MatrixXd(noisy.values.rows(), count), best};
  for (std::size_t k = 0; k < prior.size(); ++k) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < count; ++i) {
      if (best[static_cast<std::size_t>(i)] == static_cast<int>(k)) cols.push_back(i);
    }
    if (cols.empty()) continue;
    const Eigen::VectorXd& mu = prior[k].mean;
    const Eigen::MatrixXd& v = prior.eigenvectors(k);
    const Eigen::ArrayXd gain = prior.eigenvalues(k).array() / (prior.eigenvalues(k).array() + noise);
    Eigen::MatrixXd centered(residual.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) centered.col(static_cast<Eigen::Index>(j)) = residual.col(cols[j]) - mu;
    Eigen::MatrixXd coeffs = v.transpose() * centered;
    coeffs.array().colwise() *= gain;
    const Eigen::MatrixXd filtered = (v * coeffs).colwise() + mu;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out.values.col(cols[j]) = filtered.col(static_cast<Eigen::Index>(j)).array() + dc[cols[j]];
    }
  }
  return out;
}

Eigen::VectorXd solve_z(const Eigen::VectorXd& patch, const GmmPrior& prior, double beta) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(patch.size()))));
  PatchSet one{side, side, side, patch, {}};
  return solve_z(one, prior, beta).values.col(0);
}

double hqs_objective(const NonUniformOperator& op, const ImageBuffer& observed, const ImageBuffer& estimate,
                     const PatchSet& patches, const GmmPrior& prior, const std::vector<int>& components,
                     double lambda, double beta) {
  if (observed.channels() != 1 || estimate.channels() != 1) {
    throw Error(ErrorKind::InvalidArgument, "objective works on one channel");
  }
  if (components.size() != static_cast<std::size_t>(patches.values.cols())) {
    throw Error(ErrorKind::DimensionMismatch, "need one mixture component per patch");
  }
  const std::size_t n = observed.pixel_count();
  std::vector<double> blurred(n);
  op.apply_plane(estimate.samples(), blurred);
  double data = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = blurred[i] - observed.samples()[i];
    data += r * r;
  }
  const PatchSet current = extract_patches(estimate, patches.side);
  const double coupling = (current.values - patches.values).squaredNorm();

  const Eigen::MatrixXd dc_free = patches.values.rowwise() - patches.values.colwise().mean();
  double quadratic = 0.0;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    std::vector<Eigen::Index> cols;
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (components[i] == static_cast<int>(k)) cols.push_back(static_cast<Eigen::Index>(i));
    }
    if (cols.empty()) continue;
    Eigen::MatrixXd centered(dc_free.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) centered.col(static_cast<Eigen::Index>(j)) = dc_free.col(cols[j]) - prior[k].mean;
    const Eigen::MatrixXd coeffs = prior.eigenvectors(k).transpose() * centered;
    quadratic += (coeffs.array().square().colwise() / prior.eigenvalues(k).array()).sum();
  }
  return 0.5 * lambda * data + 0.5 * beta * coupling + 0.5 * quadratic;
}

ImageBuffer deblur(const ImageBuffer& observed, const MotionField& field, const GmmPrior& prior,
                   const HqsSchedule& schedule, HqsTrace* trace) {
  validate(schedule);
  if (observed.width() != field.width() || observed.height() != field.height()) {
    throw Error(ErrorKind::DimensionMismatch, "motion field does not match the image size");
  }
  if (prior.dim() != schedule.patch_size * schedule.patch_size) {
    throw Error(ErrorKind::InvalidArgument, "prior dimension " + std::to_string(prior.dim()) + " does not match " +
                                                std::to_string(schedule.patch_size) + "x" +
                                                std::to_string(schedule.patch_size) + " patches");
  }
  if (trace) trace->stages.clear();
  if (schedule.betas.empty()) return observed;

  const NonUniformOperator op(field);
  const CgOptions cg{schedule.cg_tol, schedule.cg_max_iter};
  const double lambda = schedule.lambda_data;
  ImageBuffer out(observed.width(), observed.height(), observed.channels());
  for (int c = 0; c < observed.channels(); ++c) {
    const ImageBuffer o = observed.plane(c);
    ImageBuffer estimate = o;
    PatchSet z = extract_patches(estimate, schedule.patch_size);
    for (double beta : schedule.betas) {
      HqsStage stage{c, beta, 0.0, 0.0, 0.0, {}};
      PatchSet next = solve_z(extract_patches(estimate, schedule.patch_size), prior, beta);
      if (trace) {
        stage.before_z = hqs_objective(op, o, estimate, z, prior, next.component, lambda, beta);
        stage.after_z = hqs_objective(op, o, estimate, next, prior, next.component, lambda, beta);
      }
      z = std::move(next);
      estimate = solve_x(op, o, z, lambda, beta, cg, estimate, &stage.cg);
      if (trace) {
        stage.after_x = hqs_objective(op, o, estimate, z, prior, z.component, lambda, beta);
        trace->stages.push_back(stage);
      }
    }
    for (double& s : estimate.samples()) s = std::clamp(s, 0.0, 1.0);
    out.set_plane(c, estimate);
  }
  return out;
}

}  // namespace nudeblur
