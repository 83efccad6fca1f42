#include "nudeblur/core/motion.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nudeblur/error.hpp"

namespace nudeblur {

SinCos sincos_deg(double degrees) {
  double reduced = std::fmod(degrees, 360.0);
  if (reduced < 0.0) reduced += 360.0;
  if (reduced == 0.0) return {0.0, 1.0};
  if (reduced == 90.0) return {1.0, 0.0};
  if (reduced == 180.0) return {0.0, -1.0};
  if (reduced == 270.0) return {-1.0, 0.0};
  const double rad = reduced * std::numbers::pi / 180.0;
  return {std::sin(rad), std::cos(rad)};
}

MotionVector canonicalize(double length, double orientation_deg) {
  if (!std::isfinite(length) || !std::isfinite(orientation_deg)) {
    throw Error(ErrorKind::InvalidMotion, "motion vector has non-finite component");
  }
  if (length < 1.0) {
    throw Error(ErrorKind::InvalidMotion,
                "motion length " + std::to_string(length) + " is below 1 pixel");
  }
  if (length == 1.0) return MotionVector(1.0, 0.0);
  double o = std::fmod(orientation_deg, 180.0);
  if (o < 0.0) o += 180.0;
  // fmod of a tiny negative value can round up to exactly 180.
  if (o >= 180.0) o -= 180.0;
  return MotionVector(length, o + 0.0);
}

Cartesian to_cartesian(const MotionVector& m) {
  const SinCos sc = sincos_deg(m.orientation());
  return {m.length() * sc.cos, m.length() * sc.sin};
}

MotionVector from_cartesian(double u, double v, double snap) {
  double length = std::hypot(u, v);
  if (length < 1.0 && length >= 1.0 - snap) length = 1.0;
  if (length == 1.0) return canonicalize(1.0, 0.0);
  const double o = std::atan2(v, u) * 180.0 / std::numbers::pi;
  return canonicalize(length, o);
}

CandidateSet::CandidateSet(CandidateSetId id, std::vector<double> lengths,
                           std::vector<double> orientations)
    : id_(id), lengths_(std::move(lengths)), orientations_(std::move(orientations)) {
  vectors_.push_back(canonicalize(1.0, 0.0));
  for (std::size_t li = 1; li < lengths_.size(); ++li) {
    for (double o : orientations_) vectors_.push_back(canonicalize(lengths_[li], o));
  }
  u_.reserve(vectors_.size());
  v_.reserve(vectors_.size());
  for (const auto& m : vectors_) {
    const Cartesian c = to_cartesian(m);
    u_.push_back(c.u);
    v_.push_back(c.v);
  }
}

std::size_t CandidateSet::index_at(std::size_t length_index, std::size_t orientation_index) const {
  if (length_index >= lengths_.size() || orientation_index >= orientations_.size()) {
    throw Error(ErrorKind::Bounds, "candidate grid index out of range");
  }
  if (length_index == 0) return 0;
  return 1 + (length_index - 1) * orientations_.size() + orientation_index;
}

std::optional<std::size_t> CandidateSet::index_of(const MotionVector& m) const {
  constexpr double kTol = 1e-9;
  for (std::size_t li = 0; li < lengths_.size(); ++li) {
    if (std::abs(lengths_[li] - m.length()) > kTol) continue;
    if (li == 0) return 0;
    for (std::size_t oi = 0; oi < orientations_.size(); ++oi) {
      if (std::abs(orientations_[oi] - m.orientation()) <= kTol) return index_at(li, oi);
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::size_t CandidateSet::nearest(double u, double v) const {
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    const double du = u_[i] - u;
    const double dv = v_[i] - v;
    const double d = du * du + dv * dv;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

namespace {

std::vector<double> odd_lengths() {
  std::vector<double> out;
  for (int l = 1; l <= 25; l += 2) out.push_back(l);
  return out;
}

std::vector<double> orientation_grid(int step) {
  std::vector<double> out;
  for (int o = 0; o < 180; o += step) out.push_back(o);
  return out;
}

}  // namespace

const CandidateSet& base_candidate_set() {
  static const CandidateSet set(CandidateSetId::Base, odd_lengths(), orientation_grid(30));
  return set;
}

const CandidateSet& extended_candidate_set() {
  static const CandidateSet set(CandidateSetId::Extended, odd_lengths(), orientation_grid(6));
  return set;
}

const CandidateSet& candidate_set(CandidateSetId id) {
  return id == CandidateSetId::Base ? base_candidate_set() : extended_candidate_set();
}

}  // namespace nudeblur
