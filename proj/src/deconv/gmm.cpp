#include "nudeblur/deconv/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "nudeblur/core/binary_io.hpp"
#include "nudeblur/core/warning.hpp"
#include "nudeblur/error.hpp"

namespace nudeblur {

namespace {

constexpr double kMaxJitter = 1e-6;

Eigen::VectorXd logsumexp_columns(const Eigen::MatrixXd& a) {
  Eigen::VectorXd out(a.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const double m = a.col(i).maxCoeff();
    out[i] = std::isfinite(m) ? m + std::log((a.col(i).array() - m).exp().sum()) : m;
  }
  return out;
}

}  // namespace

GmmPrior::GmmPrior(std::vector<GmmComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::ModelFormat, "mixture has no components");
  dim_ = static_cast<int>(components_.front().mean.size());
  if (dim_ < 1) throw Error(ErrorKind::ModelFormat, "mixture dimension must be positive");
  double total = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const GmmComponent& c = components_[k];
    const std::string tag = "component " + std::to_string(k);
    if (c.mean.size() != dim_ || c.covariance.rows() != dim_ || c.covariance.cols() != dim_) {
      throw Error(ErrorKind::ModelFormat, tag + " has inconsistent dimensions");
    }
    if (!std::isfinite(c.weight) || c.weight < 0.0) throw Error(ErrorKind::ModelFormat, tag + " has an invalid weight");
    if (!c.mean.allFinite() || !c.covariance.allFinite()) {
      throw Error(ErrorKind::ModelFormat, tag + " has non-finite parameters");
    }
    total += c.weight;

    const Eigen::MatrixXd sym = 0.5 * (c.covariance + c.covariance.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(sym + kMaxJitter * Eigen::MatrixXd::Identity(dim_, dim_));
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::ModelFormat, tag + " covariance is not positive definite");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    eigvecs_.push_back(eig.eigenvectors());
    eigvals_.push_back(eig.eigenvalues().cwiseMax(kMaxJitter));
  }
  if (std::abs(total - 1.0) > 1e-4) {
    throw Error(ErrorKind::ModelFormat, "mixture weights sum to " + std::to_string(total) + ", not 1");
  }
}

Eigen::VectorXd GmmPrior::component_log_density(std::size_t k, const Eigen::MatrixXd& x, double noise_var) const {
  const GmmComponent& c = components_[k];
  if (c.weight <= 0.0) return Eigen::VectorXd::Constant(x.cols(), -std::numeric_limits<double>::infinity());
  const Eigen::ArrayXd var = eigvals_[k].array() + noise_var;
  const Eigen::MatrixXd proj = eigvecs_[k].transpose() * (x.colwise() - c.mean);
  const Eigen::VectorXd maha = (proj.array().square().colwise() / var).colwise().sum().transpose();
  const double constant =
      std::log(c.weight) - 0.5 * (var.log().sum() + dim_ * std::log(2.0 * std::numbers::pi));
  return (constant - 0.5 * maha.array()).matrix();
}

Eigen::VectorXd GmmPrior::log_density(const Eigen::MatrixXd& x) const {
  if (x.rows() != dim_) throw Error(ErrorKind::DimensionMismatch, "patch dimension does not match the mixture");
  Eigen::MatrixXd per(components_.size(), x.cols());
  for (std::size_t k = 0; k < components_.size(); ++k) per.row(k) = component_log_density(k, x).transpose();
  return logsumexp_columns(per);
}

std::vector<std::uint8_t> encode_gmm(const GmmPrior& prior) {
  binary::Writer w;
  w.magic("GMMP");
  w.u32(static_cast<std::uint32_t>(prior.size()));
  w.u32(static_cast<std::uint32_t>(prior.dim()));
  for (const GmmComponent& c : prior.components()) {
    w.f32(static_cast<float>(c.weight));
    for (Eigen::Index i = 0; i < c.mean.size(); ++i) w.f32(static_cast<float>(c.mean[i]));
    for (Eigen::Index r = 0; r < c.covariance.rows(); ++r) {
      for (Eigen::Index col = 0; col < c.covariance.cols(); ++col) w.f32(static_cast<float>(c.covariance(r, col)));
    }
  }
  return w.bytes();
}

GmmPrior decode_gmm(std::vector<std::uint8_t> bytes) {
  binary::Reader r(std::move(bytes), ErrorKind::ModelFormat, "GMMP");
  r.expect_magic("GMMP");
  const std::uint32_t n = r.u32();
  const std::uint32_t dim = r.u32();
  if (n == 0) r.fail("mixture has no components");
  if (dim == 0 || dim > 4096) r.fail("unsupported patch dimension " + std::to_string(dim));
  const std::uint64_t need = static_cast<std::uint64_t>(n) * (1 + dim + static_cast<std::uint64_t>(dim) * dim) * 4;
  if (r.remaining() < need) r.fail("file too short for " + std::to_string(n) + " components");
  std::vector<GmmComponent> comps(n);
  for (GmmComponent& c : comps) {
    c.weight = r.f32();
    c.mean.resize(dim);
    for (std::uint32_t i = 0; i < dim; ++i) c.mean[i] = r.f32();
    c.covariance.resize(dim, dim);
    for (std::uint32_t row = 0; row < dim; ++row) {
      for (std::uint32_t col = 0; col < dim; ++col) c.covariance(row, col) = r.f32();
    }
  }
  r.expect_end();
  return GmmPrior(std::move(comps));
}

void save_gmm(const std::filesystem::path& path, const GmmPrior& prior) {
  binary::write_file(path, encode_gmm(prior));
}

GmmPrior load_gmm(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = binary::read_file(path);
  try {
    return decode_gmm(std::move(bytes));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

namespace {

// k-means++ seeding followed by a few Lloyd iterations; returns hard labels.
std::vector<int> kmeans_labels(const Eigen::MatrixXd& x, int k, int iterations, std::mt19937_64& rng) {
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd centers(x.rows(), k);

  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.col(0) = x.col(pick(rng));
  Eigen::VectorXd d2 = (x.colwise() - centers.col(0)).colwise().squaredNorm().transpose();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen = pick(rng);
    if (total > 0.0) {
      double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (chosen = 0; chosen < n - 1; ++chosen) {
        target -= d2[chosen];
        if (target < 0.0) break;
      }
    }
    centers.col(j) = x.col(chosen);
    d2 = d2.cwiseMin((x.colwise() - centers.col(j)).colwise().squaredNorm().transpose());
  }

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int it = 0; it <= iterations; ++it) {
    const Eigen::MatrixXd cross = centers.transpose() * x;
    const Eigen::VectorXd csq = centers.colwise().squaredNorm().transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (csq - 2.0 * cross.col(i)).minCoeff(&best);
      labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    if (it == iterations) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(x.rows(), k);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.col(labels[static_cast<std::size_t>(i)]) += x.col(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int j = 0; j < k; ++j) {
      const std::size_t c = counts[static_cast<std::size_t>(j)];
      if (c > 0) centers.col(j) = sums.col(j) / static_cast<double>(c);
    }
  }
  return labels;
}

struct Mixture {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
};

// Weighted maximum-likelihood update from responsibilities (k x n), with
// diagonal jitter; components whose weight falls below 1e-8 are dropped.
Mixture m_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& resp, double jitter, std::size_t& pruned) {
  const Eigen::Index n = x.cols();
  Mixture m;
  for (Eigen::Index k = 0; k < resp.rows(); ++k) {
    const double nk = resp.row(k).sum();
    const double w = nk / static_cast<double>(n);
    if (!(w >= 1e-8)) {
      ++pruned;
      warn("mixture component " + std::to_string(k) + " has weight " + std::to_string(w) + " and was pruned");
      continue;
    }
    const Eigen::VectorXd r = resp.row(k).transpose();
    const Eigen::VectorXd mean = x * r / nk;
    const Eigen::MatrixXd centered = x.colwise() - mean;
    const Eigen::MatrixXd weighted = centered * r.asDiagonal();
    Eigen::MatrixXd cov(x.rows(), x.rows());
    cov.noalias() = weighted * centered.transpose();
    cov /= nk;
    cov = (0.5 * (cov + cov.transpose())).eval();
    cov.diagonal().array() += jitter;
    m.weights.push_back(w);
    m.means.push_back(mean);
    m.covs.push_back(std::move(cov));
  }
  const double total = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
  for (double& w : m.weights) w /= total;
  return m;
}

// Log-likelihood of x under the mixture; resp receives the posteriors.
double e_step(const Eigen::MatrixXd& x, const Mixture& m, Eigen::MatrixXd& resp) {
  const Eigen::Index k = static_cast<Eigen::Index>(m.weights.size());
  const Eigen::Index d = x.rows();
  resp.resize(k, x.cols());
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::LLT<Eigen::MatrixXd> llt(m.covs[static_cast<std::size_t>(j)]);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::InvalidArgument, "covariance lost positive definiteness during EM");
    }
    Eigen::MatrixXd z = x.colwise() - m.means[static_cast<std::size_t>(j)];
    llt.matrixL().solveInPlace(z);
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const double c = std::log(m.weights[static_cast<std::size_t>(j)]) -
                     0.5 * (logdet + static_cast<double>(d) * std::log(2.0 * std::numbers::pi));
    resp.row(j) = (c - 0.5 * z.colwise().squaredNorm().array()).matrix();
  }
  const Eigen::VectorXd lse = logsumexp_columns(resp);
  // Posteriors below e^-600 are flushed to zero; denormals would stall the M-step.
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const Eigen::ArrayXd lr = resp.col(i).array() - lse[i];
    resp.col(i) = (lr < -600.0).select(0.0, lr.exp()).matrix();
  }
  return lse.sum();
}

}  // namespace

GmmPrior fit_gmm(const Eigen::MatrixXd& patches, int n_components, std::uint64_t seed, const GmmFitOptions& options,
                 GmmFitReport* report) {
  if (n_components < 1) throw Error(ErrorKind::InvalidArgument, "n_components must be >= 1");
  if (patches.rows() < 1) throw Error(ErrorKind::InvalidArgument, "patches have no dimensions");
  if (patches.cols() < 100 * static_cast<Eigen::Index>(n_components)) {
    throw Error(ErrorKind::InvalidArgument, "need at least " + std::to_string(100 * n_components) +
                                                " patches for " + std::to_string(n_components) + " components, got " +
                                                std::to_string(patches.cols()));
  }
  GmmFitReport local;
  GmmFitReport& rep = report ? *report : local;
  rep = {};

  std::mt19937_64 rng(seed);
  const std::vector<int> labels = kmeans_labels(patches, n_components, options.kmeans_iterations, rng);
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n_components, patches.cols());
  for (Eigen::Index i = 0; i < patches.cols(); ++i) resp(labels[static_cast<std::size_t>(i)], i) = 1.0;
  Mixture m = m_step(patches, resp, options.jitter, rep.pruned);

  for (int it = 0; it < options.max_iterations; ++it) {
    const double ll = e_step(patches, m, resp);
    rep.log_likelihood.push_back(ll);
    rep.iterations = it + 1;
    if (options.progress) options.progress(rep.iterations, ll);
    if (rep.log_likelihood.size() >= 2) {
      const double prev = rep.log_likelihood[rep.log_likelihood.size() - 2];
      if (std::abs(ll - prev) <= options.tolerance * std::abs(ll)) {
        rep.converged = true;
        break;
      }
    }
    m = m_step(patches, resp, options.jitter, rep.pruned);
  }

  std::vector<GmmComponent> comps;
  for (std::size_t j = 0; j < m.weights.size(); ++j) comps.push_back({m.weights[j], m.means[j], m.covs[j]});
  return GmmPrior(std::move(comps));
}

Eigen::MatrixXd sample_training_patches(const std::vector<ImageBuffer>& images, std::size_t count, std::uint64_t seed,
                                        int side) {
  if (side < 1) throw Error(ErrorKind::InvalidArgument, "patch side must be positive");
  std::vector<ImageBuffer> gray;
  for (const ImageBuffer& img : images) {
    if (img.width() >= side && img.height() >= side) gray.push_back(to_grayscale(img));
  }
  if (gray.empty()) throw Error(ErrorKind::InvalidArgument, "no image is large enough for the patch size");

  std::mt19937_64 rng(seed);
  Eigen::MatrixXd out(side * side, static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    const ImageBuffer& img = gray[std::uniform_int_distribution<std::size_t>(0, gray.size() - 1)(rng)];
    const int x0 = std::uniform_int_distribution<int>(0, img.width() - side)(rng);
    const int y0 = std::uniform_int_distribution<int>(0, img.height() - side)(rng);
    auto col = out.col(static_cast<Eigen::Index>(i));
    for (int dy = 0; dy < side; ++dy) {
      for (int dx = 0; dx < side; ++dx) col[dy * side + dx] = img.at(x0 + dx, y0 + dy);
    }
    col.array() -= col.mean();
  }
  return out;
}

}  // namespace nudeblur
