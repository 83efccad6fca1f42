#include "nudeblur/core/binary_io.hpp"

#include <fstream>
#include <iterator>

namespace nudeblur::binary {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

Reader Reader::open(const std::filesystem::path& path, ErrorKind kind) {
  return Reader(read_file(path), kind, path.string());
}

void Reader::expect_magic(std::string_view tag) {
  std::string got(tag.size(), '\0');
  raw(got.data(), tag.size());
  if (got != tag) {
    pos_ -= tag.size();
    fail("bad magic, expected \"" + std::string(tag) + "\"");
  }
}

void Reader::expect_end() {
  if (pos_ != bytes_.size()) fail(std::to_string(remaining()) + " trailing bytes");
}

void Reader::fail_at(std::size_t offset, const std::string& message) const {
  throw Error(kind_, what_ + ": " + message + " at byte offset " + std::to_string(offset));
}

void Reader::raw(void* out, std::size_t n) {
  if (remaining() < n) fail("unexpected end of data (need " + std::to_string(n) + " bytes)");
  std::memcpy(out, bytes_.data() + pos_, n);
  pos_ += n;
}

}  // namespace nudeblur::binary
