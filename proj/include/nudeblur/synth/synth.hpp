#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/motion_field.hpp"

namespace nudeblur {

/// Constant field (u, v). Throws InvalidMotion if its length is below 1 or
/// above kMaxMotionLength.
MotionField field_translation(int width, int height, double u, double v);

/// In-plane camera rotation about (cx, cy) at omega radians per exposure:
/// length 1 + r |omega|, orientation perpendicular to the radius. Throws
/// InvalidArgument when the farthest pixel would exceed kMaxMotionLength.
MotionField field_rotation(int width, int height, double cx, double cy, double omega);

/// The same forward model the deconvolver inverts.
ImageBuffer blur_with_field(const ImageBuffer& sharp, const MotionField& field);

inline constexpr int kTrainingMargin = 13;
inline constexpr std::size_t kPatchBytes = 30 * 30 * 3;

/// One PTCH record: label in [0, 73) and 30x30 RGB samples, row-major.
struct PatchRecord {
  std::uint8_t label = 0;
  std::array<std::uint8_t, kPatchBytes> rgb{};
};

/// Where a record was cut from: the top-left corner of its 30x30 window in
/// source image `image`.
struct PatchOrigin {
  std::size_t image = 0;
  int x = 0;
  int y = 0;
};

/// Record i gets label i % 73 and is cut from a random source region, blurred
/// with that base candidate, away from a 13 pixel margin. Sources smaller
/// than 56 x 56 are skipped; throws InvalidArgument if none is usable.
std::vector<PatchRecord> make_training_patches(const std::vector<ImageBuffer>& images, std::size_t count,
                                               std::uint64_t seed, std::vector<PatchOrigin>* origins = nullptr);

/// "PTCH", u32 count, then per record u8 label and 2700 u8 samples.
std::vector<std::uint8_t> encode_patch_dataset(const std::vector<PatchRecord>& records);
std::vector<PatchRecord> decode_patch_dataset(std::vector<std::uint8_t> bytes);
std::vector<PatchRecord> read_patch_dataset(const std::filesystem::path& path);

std::vector<PatchOrigin> export_training_patches(const std::vector<ImageBuffer>& images, std::size_t count,
                                                 std::uint64_t seed, const std::filesystem::path& out);

}  // namespace nudeblur
