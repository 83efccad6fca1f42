#include "nudeblur/core/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "nudeblur/error.hpp"

namespace nudeblur {

ImageBuffer::ImageBuffer(int width, int height, int channels, double fill)
    : ImageBuffer(width, height, channels,
                  std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) *
                                          std::max(channels, 0),
                                      fill)) {}

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<double> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) throw Error(ErrorKind::Format, "image dimensions must be positive");
  if (channels != 1 && channels != 3) throw Error(ErrorKind::Format, "images must have 1 or 3 channels");
  if (samples_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorKind::Format, "sample count does not match image dimensions");
  }
}

double ImageBuffer::clamped(int x, int y, int c) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return samples_[index(x, y, c)];
}

ImageBuffer ImageBuffer::plane(int c) const {
  ImageBuffer out(width_, height_, 1);
  for (std::size_t i = 0; i < pixel_count(); ++i) out.samples_[i] = samples_[i * channels_ + c];
  return out;
}

void ImageBuffer::set_plane(int c, const ImageBuffer& plane) {
  if (plane.width_ != width_ || plane.height_ != height_ || plane.channels_ != 1) {
    throw Error(ErrorKind::DimensionMismatch, "plane does not match image dimensions");
  }
  for (std::size_t i = 0; i < pixel_count(); ++i) samples_[i * channels_ + c] = plane.samples_[i];
}

ImageBuffer ImageBuffer::crop(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || x0 + w > width_ || y0 + h > height_) {
    throw Error(ErrorKind::Bounds, "crop window leaves the image");
  }
  ImageBuffer out(w, h, channels_);
  for (int y = 0; y < h; ++y) {
    const double* src = &samples_[index(x0, y0 + y, 0)];
    std::copy(src, src + static_cast<std::size_t>(w) * channels_, &out.samples_[out.index(0, y, 0)]);
  }
  return out;
}

ImageBuffer to_grayscale(const ImageBuffer& image) {
  if (image.channels() == 1) return image;
  ImageBuffer out(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.at(x, y) = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) + 0.114 * image.at(x, y, 2);
    }
  }
  return out;
}

ImageBuffer to_rgb(const ImageBuffer& image) {
  if (image.channels() == 3) return image;
  ImageBuffer out(image.width(), image.height(), 3);
  for (int c = 0; c < 3; ++c) out.set_plane(c, image);
  return out;
}

std::uint8_t quantize_u8(double sample) {
  const double s = std::clamp(sample, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(s * 255.0 + 0.5));
}

ImageBuffer read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw Error(ErrorKind::Io, "cannot read PNG " + path.string() + ": " + img.message);
  }
  const bool gray = (img.format & PNG_FORMAT_FLAG_COLOR) == 0;
  img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  const int channels = gray ? 1 : 3;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error(ErrorKind::Io, "cannot decode PNG " + path.string() + ": " + img.message);
  }
  std::vector<double> samples(buffer.size());
  std::transform(buffer.begin(), buffer.end(), samples.begin(), [](png_byte b) { return b / 255.0; });
  return ImageBuffer(static_cast<int>(img.width), static_cast<int>(img.height), channels, std::move(samples));
}

void write_png(const std::filesystem::path& path, const ImageBuffer& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = image.channels() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(image.samples().size());
  std::transform(image.samples().begin(), image.samples().end(), buffer.begin(), quantize_u8);
  if (!png_image_write_to_file(&img, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw Error(ErrorKind::Io, "cannot write PNG " + path.string() + ": " + img.message);
  }
}

}  // namespace nudeblur
