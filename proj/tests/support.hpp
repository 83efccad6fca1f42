#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/motion_field.hpp"

namespace test {

inline nudeblur::ImageBuffer noise_image(int w, int h, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nudeblur::ImageBuffer img(w, h, c);
  for (double& s : img.samples()) s = u(rng);
  return img;
}

// Sum of a few low-frequency waves, in [0, 1].
inline nudeblur::ImageBuffer smooth_image(int w, int h, int c = 1) {
  nudeblur::ImageBuffer img(w, h, c);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int k = 0; k < c; ++k) {
        img.at(x, y, k) = 0.5 + 0.2 * std::sin(0.11 * x + 0.7 * k) * std::cos(0.07 * y) + 0.1 * std::sin(0.05 * (x + y));
      }
    }
  }
  return img;
}

inline nudeblur::MotionField random_field(int w, int h, std::uint64_t seed, double max_length = 25.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(1.0, max_length);
  std::uniform_real_distribution<double> ori(0.0, 180.0);
  nudeblur::MotionField f(w, h);
  for (auto& m : f.data()) m = nudeblur::canonicalize(len(rng), ori(rng));
  return f;
}

inline std::filesystem::path data_dir() { return NUDEBLUR_DATA_DIR; }

inline std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "nudeblur_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace test
