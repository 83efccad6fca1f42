#include "nudeblur/core/motion_field.hpp"

#include <algorithm>

#include "nudeblur/core/binary_io.hpp"
#include "nudeblur/error.hpp"

namespace nudeblur {

MotionField::MotionField(int width, int height, MotionVector fill)
    : MotionField(width, height,
                  std::vector<MotionVector>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill)) {}

MotionField::MotionField(int width, int height, std::vector<MotionVector> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width <= 0 || height <= 0) throw Error(ErrorKind::Format, "motion field dimensions must be positive");
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorKind::Format, "motion field data does not match its dimensions");
  }
}

std::vector<std::uint8_t> encode_motion_field(const MotionField& field) {
  binary::Writer w;
  w.magic("MFLD");
  w.u32(static_cast<std::uint32_t>(field.width()));
  w.u32(static_cast<std::uint32_t>(field.height()));
  for (const MotionVector& m : field.data()) {
    const Cartesian c = to_cartesian(m);
    w.f32(static_cast<float>(c.u));
    w.f32(static_cast<float>(c.v));
  }
  return w.bytes();
}

MotionField decode_motion_field(std::vector<std::uint8_t> bytes) {
  binary::Reader r(std::move(bytes), ErrorKind::Format, "MFLD");
  r.expect_magic("MFLD");
  const std::uint32_t width = r.u32();
  const std::uint32_t height = r.u32();
  if (width == 0 || height == 0 || width > 1u << 16 || height > 1u << 16) r.fail("implausible dimensions");
  if (r.remaining() != static_cast<std::size_t>(width) * height * 8) {
    r.fail("payload size does not match " + std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<MotionVector> data;
  data.reserve(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i) {
    const double u = r.f32();
    const double v = r.f32();
    try {
      data.push_back(from_cartesian(u, v));
    } catch (const Error& e) {
      r.fail(std::string("invalid motion vector: ") + e.what());
    }
  }
  return MotionField(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

void write_motion_field(const std::filesystem::path& path, const MotionField& field) {
  binary::write_file(path, encode_motion_field(field));
}

MotionField read_motion_field(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = binary::read_file(path);
  try {
    return decode_motion_field(std::move(bytes));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

MotionField quantize_field(const MotionField& field, const CandidateSet& set) {
  MotionField out = field;
  for (MotionVector& m : out.data()) {
    const Cartesian c = to_cartesian(m);
    m = set[set.nearest(c.u, c.v)];
  }
  return out;
}

}  // namespace nudeblur
