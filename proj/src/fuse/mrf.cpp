#include "nudeblur/fuse/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nudeblur/core/parallel.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/simd/kernels.hpp"

namespace nudeblur {

void validate(const MrfParams& params) {
  if (!std::isfinite(params.lambda_smooth) || params.lambda_smooth < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "lambda_smooth must be finite and >= 0");
  }
  if (params.bp_iterations < 1) throw Error(ErrorKind::InvalidArgument, "bp_iterations must be >= 1");
  if (!(params.damping >= 0.0 && params.damping < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "damping must lie in [0, 1)");
  }
  if (params.grid_stride < 1) throw Error(ErrorKind::InvalidArgument, "grid_stride must be >= 1");
}

double smoothness_energy(const MotionField& field, double lambda) {
  double total = 0.0;
  auto edge = [&](const MotionVector& a, const MotionVector& b) {
    const Cartesian ca = to_cartesian(a);
    const Cartesian cb = to_cartesian(b);
    total += (ca.u - cb.u) * (ca.u - cb.u) + (ca.v - cb.v) * (ca.v - cb.v);
  };
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      if (x + 1 < field.width()) edge(field.at(x, y), field.at(x + 1, y));
      if (y + 1 < field.height()) edge(field.at(x, y), field.at(x, y + 1));
    }
  }
  return lambda * total;
}

double energy(const MotionField& field, const ConfidenceVolume& volume, const MrfParams& params) {
  if (field.width() != volume.width() || field.height() != volume.height()) {
    throw Error(ErrorKind::DimensionMismatch, "field and confidence volume differ in size");
  }
  const CandidateSet& set = volume.set();
  double unary = 0.0;
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      const auto idx = set.index_of(field.at(x, y));
      if (!idx) {
        throw Error(ErrorKind::InvalidArgument, "field vector at (" + std::to_string(x) + ", " + std::to_string(y) +
                                                    ") is not a candidate of the volume");
      }
      unary -= static_cast<double>(volume.at(x, y)[*idx]);
    }
  }
  return unary + smoothness_energy(field, params.lambda_smooth);
}

MotionField unary_labeling(const ConfidenceVolume& volume) {
  const CandidateSet& set = volume.set();
  MotionField out(volume.width(), volume.height());
  for (int y = 0; y < volume.height(); ++y) {
    for (int x = 0; x < volume.width(); ++x) {
      const std::span<const float> c = volume.at(x, y);
      out.at(x, y) = set[static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin())];
    }
  }
  return out;
}

namespace {

// Directions of the neighbor a message arrives from.
enum Dir { kLeft = 0, kRight = 1, kUp = 2, kDown = 3 };
constexpr Dir kOpposite[4] = {kRight, kLeft, kDown, kUp};
constexpr int kDx[4] = {-1, 1, 0, 0};
constexpr int kDy[4] = {0, 0, -1, 1};

// Min-sum BP over a W x H grid where node i has K labels with unary costs
// unary[i*K + a] and Cartesian coordinates (u, v)[i*K + a].
class GridBp {
 public:
  GridBp(int width, int height, std::size_t labels, std::vector<double> unary, std::vector<double> u,
         std::vector<double> v, const MrfParams& params)
      : w_(width), h_(height), k_(labels), unary_(std::move(unary)), u_(std::move(u)), v_(std::move(v)),
        params_(params) {
    const std::size_t n = static_cast<std::size_t>(w_) * h_ * 4 * k_;
    msgs_.assign(n, 0.0);
    next_.assign(n, 0.0);
  }

  void run() {
    for (int it = 0; it < params_.bp_iterations; ++it) {
      parallel_for(static_cast<std::size_t>(h_), [&](std::size_t row) { sweep_row(static_cast<int>(row)); });
      std::swap(msgs_, next_);
    }
  }

  // Label position (within the node's shortlist) minimizing the belief; ties
  // go to the lower candidate id.
  std::vector<std::size_t> decode(const std::vector<std::uint32_t>& ids) const {
    std::vector<std::size_t> out(static_cast<std::size_t>(w_) * h_);
    for (std::size_t node = 0; node < out.size(); ++node) {
      std::size_t best = 0;
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < k_; ++a) {
        double b = unary_[node * k_ + a];
        for (int d = 0; d < 4; ++d) b += msgs_[(node * 4 + d) * k_ + a];
        if (b < best_cost || (b == best_cost && ids[node * k_ + a] < ids[node * k_ + best])) {
          best_cost = b;
          best = a;
        }
      }
      out[node] = best;
    }
    return out;
  }

 private:
  void sweep_row(int y) {
    const auto& kernels = simd::active();
    const double lambda = params_.lambda_smooth;
    std::vector<double> h(k_);
    std::vector<double> msg(k_);
    for (int x = 0; x < w_; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w_ + x;
      for (int d = 0; d < 4; ++d) {
        const int qx = x + kDx[d];
        const int qy = y + kDy[d];
        if (qx < 0 || qy < 0 || qx >= w_ || qy >= h_) continue;
        const std::size_t q = static_cast<std::size_t>(qy) * w_ + qx;

        // h(a) = D_p(a) + incoming messages except from q, plus lambda |w_a|^2
        // so the pairwise minimum becomes an affine minimum in (u_b, v_b).
        for (std::size_t a = 0; a < k_; ++a) {
          double s = unary_[p * k_ + a];
          for (int e = 0; e < 4; ++e) {
            if (e != d) s += msgs_[(p * 4 + e) * k_ + a];
          }
          const double ua = u_[p * k_ + a];
          const double va = v_[p * k_ + a];
          h[a] = s + lambda * (ua * ua + va * va);
        }
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < k_; ++b) {
          const double ub = u_[q * k_ + b];
          const double vb = v_[q * k_ + b];
          msg[b] = kernels.min_affine(h.data(), &u_[p * k_], &v_[p * k_], k_, 2.0 * lambda * ub, 2.0 * lambda * vb) +
                   lambda * (ub * ub + vb * vb);
          lowest = std::min(lowest, msg[b]);
        }
        // Stored at q, tagged with the direction p lies in as seen from q.
        double* dst = &next_[(q * 4 + kOpposite[d]) * k_];
        const double* old = &msgs_[(q * 4 + kOpposite[d]) * k_];
        for (std::size_t b = 0; b < k_; ++b) {
          dst[b] = (1.0 - params_.damping) * (msg[b] - lowest) + params_.damping * old[b];
        }
      }
    }
  }

  int w_;
  int h_;
  std::size_t k_;
  std::vector<double> unary_;
  std::vector<double> u_;
  std::vector<double> v_;
  MrfParams params_;
  std::vector<double> msgs_;
  std::vector<double> next_;
};

}  // namespace

MotionField solve_mrf(const ConfidenceVolume& volume, const CandidateShortlist& list, const MrfParams& params) {
  validate(params);
  if (list.width() != volume.width() || list.height() != volume.height()) {
    throw Error(ErrorKind::DimensionMismatch, "shortlist and confidence volume differ in size");
  }
  const CandidateSet& set = volume.set();
  const int s = params.grid_stride;
  const int gw = (volume.width() + s - 1) / s;
  const int gh = (volume.height() + s - 1) / s;
  const std::size_t k = list.per_pixel();
  const std::size_t nodes = static_cast<std::size_t>(gw) * gh;

  std::vector<double> unary(nodes * k);
  std::vector<double> u(nodes * k);
  std::vector<double> v(nodes * k);
  std::vector<std::uint32_t> ids(nodes * k);
  for (int gy = 0; gy < gh; ++gy) {
    for (int gx = 0; gx < gw; ++gx) {
      const std::size_t node = static_cast<std::size_t>(gy) * gw + gx;
      const std::span<const std::uint32_t> labels = list.at(gx * s, gy * s);
      const std::span<const float> conf = volume.at(gx * s, gy * s);
      for (std::size_t a = 0; a < k; ++a) {
        const std::uint32_t id = labels[a];
        if (id >= set.size()) throw Error(ErrorKind::InvalidArgument, "shortlist label outside the candidate set");
        ids[node * k + a] = id;
        unary[node * k + a] = -static_cast<double>(conf[id]);
        u[node * k + a] = set.u()[id];
        v[node * k + a] = set.v()[id];
      }
    }
  }

  GridBp bp(gw, gh, k, std::move(unary), std::move(u), std::move(v), params);
  bp.run();
  const std::vector<std::size_t> best = bp.decode(ids);

  MotionField field(volume.width(), volume.height());
  for (int y = 0; y < volume.height(); ++y) {
    for (int x = 0; x < volume.width(); ++x) {
      const int gx = std::min((x + s / 2) / s, gw - 1);
      const int gy = std::min((y + s / 2) / s, gh - 1);
      const std::size_t node = static_cast<std::size_t>(gy) * gw + gx;
      field.at(x, y) = set[ids[node * k + best[node]]];
    }
  }

  MotionField fallback = unary_labeling(volume);
  if (energy(fallback, volume, params) < energy(field, volume, params)) return fallback;
  return field;
}

}  // namespace nudeblur
