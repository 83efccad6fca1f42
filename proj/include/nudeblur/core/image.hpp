#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nudeblur {

/// H x W x C image with samples in [0, 1], row-major, channels interleaved.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, double fill = 0.0);
  ImageBuffer(int width, int height, int channels, std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const noexcept { return samples_.empty(); }

  double& at(int x, int y, int c = 0) { return samples_[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return samples_[index(x, y, c)]; }

  // Edge-replicated read.
  double clamped(int x, int y, int c = 0) const;

  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }

  /// Single channel as its own 1-channel image.
  ImageBuffer plane(int c) const;
  void set_plane(int c, const ImageBuffer& plane);

  /// Crop [x0, x0 + w) x [y0, y0 + h); must lie inside the image.
  ImageBuffer crop(int x0, int y0, int w, int h) const;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<double> samples_;
};

/// Luma (Rec. 601 weights) of an RGB image; 1-channel images are returned as is.
ImageBuffer to_grayscale(const ImageBuffer& image);
/// Replicates a 1-channel image into three channels.
ImageBuffer to_rgb(const ImageBuffer& image);

/// 8-bit quantization by round-half-up after clamping to [0, 1].
std::uint8_t quantize_u8(double sample);

ImageBuffer read_png(const std::filesystem::path& path);
/// Writes 8-bit gray or RGB depending on the channel count.
void write_png(const std::filesystem::path& path, const ImageBuffer& image);

}  // namespace nudeblur
