#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nudeblur/predict/predictor.hpp"

namespace nudeblur {

inline constexpr double kDefaultFusionSigma = 10.0;

/// Per-pixel confidences over a candidate set, stored pixel-major.
class ConfidenceVolume {
 public:
  ConfidenceVolume(int width, int height, CandidateSetId set_id);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  CandidateSetId set_id() const noexcept { return set_id_; }
  const CandidateSet& set() const { return candidate_set(set_id_); }
  std::size_t candidates() const noexcept { return n_; }

  std::span<float> at(int x, int y) { return {&data_[index(x, y)], n_}; }
  std::span<const float> at(int x, int y) const { return {&data_[index(x, y)], n_}; }
  std::span<const float> data() const noexcept { return data_; }

 private:
  std::size_t index(int x, int y) const { return (static_cast<std::size_t>(y) * width_ + x) * n_; }

  int width_;
  int height_;
  CandidateSetId set_id_;
  std::size_t n_;
  std::vector<float> data_;
};

/// Gaussian-weighted average of every patch distribution whose 30 x 30 window
/// covers the pixel, weight exp(-d^2 / (2 sigma^2)) with d the distance to the
/// patch center. Throws Error(Coverage) naming the first uncovered pixel.
ConfidenceVolume confidence_volume(std::span<const PatchPrediction> preds, int width, int height,
                                   double sigma = kDefaultFusionSigma);

/// "CONF", u32 width, u32 height, u32 candidate count, then the f32 volume
/// (pixel-major, candidates innermost), little-endian.
void write_confidence_volume(const std::filesystem::path& path, const ConfidenceVolume& volume);
ConfidenceVolume read_confidence_volume(const std::filesystem::path& path);

}  // namespace nudeblur
