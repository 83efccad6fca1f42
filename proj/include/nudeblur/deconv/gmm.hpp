#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nudeblur/core/image.hpp"

namespace nudeblur {

struct GmmComponent {
  double weight = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Gaussian mixture over DC-removed square patches (dim = side * side).
/// Construction checks that weights sum to 1 and every covariance factors
/// after at most 1e-6 of diagonal jitter; eigendecompositions are cached.
class GmmPrior {
 public:
  explicit GmmPrior(std::vector<GmmComponent> components);

  std::size_t size() const noexcept { return components_.size(); }
  int dim() const noexcept { return dim_; }
  const GmmComponent& operator[](std::size_t k) const { return components_[k]; }
  const std::vector<GmmComponent>& components() const noexcept { return components_; }

  const Eigen::MatrixXd& eigenvectors(std::size_t k) const { return eigvecs_[k]; }
  const Eigen::VectorXd& eigenvalues(std::size_t k) const { return eigvals_[k]; }

  /// log p(x) per column of x.
  Eigen::VectorXd log_density(const Eigen::MatrixXd& x) const;
  /// log(w_k N(x; mu_k, Sigma_k + noise_var I)) per column, for one component.
  Eigen::VectorXd component_log_density(std::size_t k, const Eigen::MatrixXd& x, double noise_var = 0.0) const;

 private:
  int dim_ = 0;
  std::vector<GmmComponent> components_;
  std::vector<Eigen::MatrixXd> eigvecs_;
  std::vector<Eigen::VectorXd> eigvals_;
};

/// "GMMP", u32 n_components, u32 dim, then per component f32 weight, dim f32
/// mean, dim x dim f32 covariance (row-major), little-endian.
std::vector<std::uint8_t> encode_gmm(const GmmPrior& prior);
GmmPrior decode_gmm(std::vector<std::uint8_t> bytes);
void save_gmm(const std::filesystem::path& path, const GmmPrior& prior);
GmmPrior load_gmm(const std::filesystem::path& path);

struct GmmFitOptions {
  int max_iterations = 200;
  double tolerance = 1e-5;  // relative log-likelihood change
  double jitter = 1e-6;
  int kmeans_iterations = 10;
  // Called after every E-step with the iteration number and log-likelihood.
  std::function<void(int, double)> progress;
};

struct GmmFitReport {
  std::vector<double> log_likelihood;  // per EM iteration, before its M-step
  int iterations = 0;
  std::size_t pruned = 0;
  bool converged = false;
};

/// EM fit on columns of `patches`. Needs at least 100 * n_components columns.
/// Deterministic for a given seed.
GmmPrior fit_gmm(const Eigen::MatrixXd& patches, int n_components, std::uint64_t seed,
                 const GmmFitOptions& options = {}, GmmFitReport* report = nullptr);

/// `count` random side x side grayscale patches from `images`, DC removed,
/// one per column.
Eigen::MatrixXd sample_training_patches(const std::vector<ImageBuffer>& images, std::size_t count,
                                        std::uint64_t seed, int side = 8);

}  // namespace nudeblur
