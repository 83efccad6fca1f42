#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nudeblur/error.hpp"

// Little-endian helpers shared by the MFLD, CONF, CNNW, GMMP and PTCH formats.
namespace nudeblur::binary {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

/// Whole-file helpers; failures throw Error(Io) naming the path.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

class Writer {
 public:
  void magic(std::string_view tag) { bytes_.insert(bytes_.end(), tag.begin(), tag.end()); }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void f32(float v) { raw(&v, sizeof v); }

  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  void save(const std::filesystem::path& path) const { write_file(path, bytes_); }

 private:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  std::vector<std::uint8_t> bytes_;
};

/// Bounds-checked reader. Every failure reports the byte offset it hit and
/// throws with the kind supplied at construction.
class Reader {
 public:
  Reader(std::vector<std::uint8_t> bytes, ErrorKind kind, std::string what)
      : bytes_(std::move(bytes)), kind_(kind), what_(std::move(what)) {}

  static Reader open(const std::filesystem::path& path, ErrorKind kind);

  void expect_magic(std::string_view tag);
  std::uint8_t u8() { std::uint8_t v; raw(&v, 1); return v; }
  std::uint32_t u32() { std::uint32_t v; raw(&v, 4); return v; }
  float f32() { float v; raw(&v, 4); return v; }

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  void expect_end();
  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
  // For values already consumed: points the report at where they began.
  [[noreturn]] void fail_at(std::size_t offset, const std::string& message) const;

 private:
  void raw(void* out, std::size_t n);

  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  ErrorKind kind_;
  std::string what_;
};

}  // namespace nudeblur::binary
