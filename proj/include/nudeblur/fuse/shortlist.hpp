#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nudeblur/fuse/confidence.hpp"

namespace nudeblur {

/// Per-pixel candidate labels: the top_k most confident (descending, ties to
/// the lower index) followed by `sampled` draws from the rest.
class CandidateShortlist {
 public:
  CandidateShortlist(int width, int height, std::size_t per_pixel);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t per_pixel() const noexcept { return k_; }

  std::span<std::uint32_t> at(int x, int y) { return {&labels_[index(x, y)], k_}; }
  std::span<const std::uint32_t> at(int x, int y) const { return {&labels_[index(x, y)], k_}; }

  friend bool operator==(const CandidateShortlist&, const CandidateShortlist&) = default;

 private:
  std::size_t index(int x, int y) const { return (static_cast<std::size_t>(y) * width_ + x) * k_; }

  int width_;
  int height_;
  std::size_t k_;
  std::vector<std::uint32_t> labels_;
};

/// Draws are uniform without replacement, from a generator seeded per pixel
/// by (seed, pixel index), so the result depends only on the inputs. Throws
/// Error(InvalidArgument) if top_k + sampled exceeds the candidate count.
CandidateShortlist shortlist(const ConfidenceVolume& volume, std::size_t top_k = 20, std::size_t sampled = 30,
                             std::uint64_t seed = 0);

}  // namespace nudeblur
