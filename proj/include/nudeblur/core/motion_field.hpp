#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nudeblur/core/motion.hpp"

namespace nudeblur {

/// Per-pixel motion vectors, row-major.
class MotionField {
 public:
  MotionField() = default;
  MotionField(int width, int height, MotionVector fill = {});
  MotionField(int width, int height, std::vector<MotionVector> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  MotionVector& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const MotionVector& at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const MotionVector> data() const noexcept { return data_; }
  std::span<MotionVector> data() noexcept { return data_; }

  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  friend bool operator==(const MotionField&, const MotionField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<MotionVector> data_;
};

/// "MFLD", u32 width, u32 height, then height x width (u, v) f32 pairs, all
/// little-endian. Loading converts back to canonical polar form.
void write_motion_field(const std::filesystem::path& path, const MotionField& field);
MotionField read_motion_field(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_motion_field(const MotionField& field);
MotionField decode_motion_field(std::vector<std::uint8_t> bytes);

/// Replaces every vector by its nearest member of `set`.
MotionField quantize_field(const MotionField& field, const CandidateSet& set);

}  // namespace nudeblur
