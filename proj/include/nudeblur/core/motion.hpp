#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nudeblur {

// Largest supported motion length, in pixels.
inline constexpr double kMaxMotionLength = 25.0;

// sin/cos of an angle given in degrees. Multiples of 90 degrees are exact so
// that axis-aligned kernels are bit-for-bit transposes of each other.
struct SinCos {
  double sin;
  double cos;
};
SinCos sincos_deg(double degrees);

struct Cartesian {
  double u;
  double v;
};

/// A linear motion: length in pixels (>= 1) and orientation in degrees,
/// canonically in [0, 180). Motions (l, o) and (l, o + 180) blur identically,
/// and every orientation at l = 1 is the identity, stored as o = 0.
class MotionVector {
 public:
  MotionVector() = default;

  double length() const noexcept { return length_; }
  double orientation() const noexcept { return orientation_; }

  friend bool operator==(const MotionVector&, const MotionVector&) = default;

 private:
  friend MotionVector canonicalize(double length, double orientation_deg);
  MotionVector(double l, double o) : length_(l), orientation_(o) {}

  double length_ = 1.0;
  double orientation_ = 0.0;
};

/// Throws Error(InvalidMotion) if length < 1 or either argument is not finite.
MotionVector canonicalize(double length, double orientation_deg);

/// (u, v) = (l cos o, l sin o); u runs along image columns, v along rows.
Cartesian to_cartesian(const MotionVector& m);

/// Polar view of a Cartesian motion. Lengths that fall below 1 by at most
/// `snap` (float round-off on identity motions) are snapped to 1.
MotionVector from_cartesian(double u, double v, double snap = 1e-3);

enum class CandidateSetId : unsigned char { Base = 0, Extended = 1 };

/// Discretized motion candidates. Index layout: the l = 1 identity is entry 0,
/// then row-major over lengths 3, 5, ..., 25 (outer) by orientations (inner).
class CandidateSet {
 public:
  CandidateSetId id() const noexcept { return id_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const MotionVector& operator[](std::size_t i) const { return vectors_[i]; }
  std::span<const MotionVector> vectors() const noexcept { return vectors_; }
  std::span<const double> lengths() const noexcept { return lengths_; }
  std::span<const double> orientations() const noexcept { return orientations_; }

  // Cartesian coordinates of every candidate, parallel to vectors().
  std::span<const double> u() const noexcept { return u_; }
  std::span<const double> v() const noexcept { return v_; }

  std::optional<std::size_t> index_of(const MotionVector& m) const;

  /// Index of the candidate at (length_index, orientation_index); length_index
  /// 0 is the identity and ignores the orientation.
  std::size_t index_at(std::size_t length_index, std::size_t orientation_index) const;

  /// Candidate closest to (u, v) in Euclidean distance; ties go to the lower index.
  std::size_t nearest(double u, double v) const;

 private:
  friend const CandidateSet& base_candidate_set();
  friend const CandidateSet& extended_candidate_set();
  CandidateSet(CandidateSetId id, std::vector<double> lengths, std::vector<double> orientations);

  CandidateSetId id_;
  std::vector<double> lengths_;
  std::vector<double> orientations_;
  std::vector<MotionVector> vectors_;
  std::vector<double> u_;
  std::vector<double> v_;
};

/// 73 candidates: lengths 1, 3, ..., 25 by orientations 0, 30, ..., 150.
const CandidateSet& base_candidate_set();
/// 361 candidates: lengths 1, 3, ..., 25 by orientations 0, 6, ..., 174.
const CandidateSet& extended_candidate_set();
const CandidateSet& candidate_set(CandidateSetId id);

}  // namespace nudeblur
