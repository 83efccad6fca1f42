#include "nudeblur/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nudeblur/core/binary_io.hpp"
#include "nudeblur/core/parallel.hpp"
#include "nudeblur/core/random.hpp"
#include "nudeblur/deconv/operator.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/predict/patch.hpp"

namespace nudeblur {

MotionField field_translation(int width, int height, double u, double v) {
  if (std::hypot(u, v) > kMaxMotionLength) {
    throw Error(ErrorKind::InvalidMotion, "translation length exceeds " + std::to_string(kMaxMotionLength));
  }
  return MotionField(width, height, from_cartesian(u, v));
}

MotionField field_rotation(int width, int height, double cx, double cy, double omega) {
  if (!std::isfinite(omega) || !std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorKind::InvalidArgument, "rotation parameters must be finite");
  }
  double max_radius = 0.0;
  for (double x : {0.0, width - 1.0}) {
    for (double y : {0.0, height - 1.0}) max_radius = std::max(max_radius, std::hypot(x - cx, y - cy));
  }
  if (max_radius * std::abs(omega) > kMaxMotionLength - 1.0) {
    throw Error(ErrorKind::InvalidArgument, "omega " + std::to_string(omega) + " gives motion longer than " +
                                                std::to_string(kMaxMotionLength) + " pixels");
  }
  MotionField field(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double r = std::hypot(dx, dy);
      const double length = std::clamp(1.0 + r * std::abs(omega), 1.0, kMaxMotionLength);
      const double radial = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
      field.at(x, y) = canonicalize(length, radial + 90.0);
    }
  }
  return field;
}

ImageBuffer blur_with_field(const ImageBuffer& sharp, const MotionField& field) {
  return NonUniformOperator(field).apply(sharp);
}

std::vector<PatchRecord> make_training_patches(const std::vector<ImageBuffer>& images, std::size_t count,
                                               std::uint64_t seed, std::vector<PatchOrigin>* origins) {
  constexpr int kRegion = kPatchSize + 2 * kTrainingMargin;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].width() >= kRegion && images[i].height() >= kRegion) usable.push_back(i);
  }
  if (usable.empty()) {
    throw Error(ErrorKind::InvalidArgument, "no source image is at least " + std::to_string(kRegion) + "x" +
                                                std::to_string(kRegion));
  }
  const CandidateSet& set = base_candidate_set();
  std::vector<PatchRecord> records(count);
  std::vector<PatchOrigin> where(count);
  parallel_for(count, [&](std::size_t i) {
    std::mt19937_64 rng = item_rng(seed, i);
    const std::size_t src = usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)];
    const ImageBuffer& image = images[src];
    const int x0 = std::uniform_int_distribution<int>(0, image.width() - kRegion)(rng);
    const int y0 = std::uniform_int_distribution<int>(0, image.height() - kRegion)(rng);
    const ImageBuffer region = to_rgb(image.crop(x0, y0, kRegion, kRegion));

    const std::size_t label = i % set.size();
    const ImageBuffer blurred = blur_with_field(region, MotionField(kRegion, kRegion, set[label]));
    PatchRecord& rec = records[i];
    rec.label = static_cast<std::uint8_t>(label);
    std::size_t k = 0;
    for (int y = 0; y < kPatchSize; ++y) {
      for (int x = 0; x < kPatchSize; ++x) {
        for (int c = 0; c < 3; ++c) {
          rec.rgb[k++] = quantize_u8(blurred.at(x + kTrainingMargin, y + kTrainingMargin, c));
        }
      }
    }
    where[i] = {src, x0 + kTrainingMargin, y0 + kTrainingMargin};
  });
  if (origins) *origins = std::move(where);
  return records;
}

std::vector<std::uint8_t> encode_patch_dataset(const std::vector<PatchRecord>& records) {
  binary::Writer w;
  w.magic("PTCH");
  w.u32(static_cast<std::uint32_t>(records.size()));
  for (const PatchRecord& r : records) {
    w.u8(r.label);
    for (std::uint8_t b : r.rgb) w.u8(b);
  }
  return w.bytes();
}

std::vector<PatchRecord> decode_patch_dataset(std::vector<std::uint8_t> bytes) {
  binary::Reader r(std::move(bytes), ErrorKind::Format, "PTCH");
  r.expect_magic("PTCH");
  const std::uint32_t count = r.u32();
  if (r.remaining() < static_cast<std::uint64_t>(count) * (1 + kPatchBytes)) {
    r.fail("file too short for " + std::to_string(count) + " records");
  }
  std::vector<PatchRecord> out(count);
  for (PatchRecord& rec : out) {
    rec.label = r.u8();
    if (rec.label >= base_candidate_set().size()) r.fail("label " + std::to_string(rec.label) + " out of range");
    for (std::uint8_t& b : rec.rgb) b = r.u8();
  }
  r.expect_end();
  return out;
}

std::vector<PatchRecord> read_patch_dataset(const std::filesystem::path& path) {
  try {
    return decode_patch_dataset(binary::read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<PatchOrigin> export_training_patches(const std::vector<ImageBuffer>& images, std::size_t count,
                                                 std::uint64_t seed, const std::filesystem::path& out) {
  std::vector<PatchOrigin> origins;
  const std::vector<PatchRecord> records = make_training_patches(images, count, seed, &origins);
  binary::write_file(out, encode_patch_dataset(records));
  return origins;
}

}  // namespace nudeblur
