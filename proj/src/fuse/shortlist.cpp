#include "nudeblur/fuse/shortlist.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "nudeblur/core/parallel.hpp"
#include "nudeblur/core/random.hpp"
#include "nudeblur/error.hpp"

namespace nudeblur {

CandidateShortlist::CandidateShortlist(int width, int height, std::size_t per_pixel)
    : width_(width), height_(height), k_(per_pixel), labels_(static_cast<std::size_t>(width) * height * per_pixel) {}

CandidateShortlist shortlist(const ConfidenceVolume& volume, std::size_t top_k, std::size_t sampled,
                             std::uint64_t seed) {
  const std::size_t n = volume.candidates();
  if (top_k + sampled > n || top_k + sampled == 0) {
    throw Error(ErrorKind::InvalidArgument, "shortlist size must lie in [1, " + std::to_string(n) + "]");
  }
  CandidateShortlist out(volume.width(), volume.height(), top_k + sampled);
  parallel_for(static_cast<std::size_t>(volume.height()), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    std::vector<std::uint32_t> order(n);
    for (int x = 0; x < volume.width(); ++x) {
      const std::span<const float> c = volume.at(x, y);
      std::iota(order.begin(), order.end(), 0u);
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k), order.end(),
                        [&](std::uint32_t a, std::uint32_t b) { return c[a] > c[b] || (c[a] == c[b] && a < b); });
      // Remainder in index order so the draws do not depend on sort internals.
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(top_k), order.end());

      const std::uint64_t pixel = static_cast<std::uint64_t>(y) * volume.width() + x;
      std::mt19937_64 rng = item_rng(seed, pixel);
      for (std::size_t i = 0; i < sampled; ++i) {
        const std::size_t lo = top_k + i;
        std::uniform_int_distribution<std::size_t> pick(lo, n - 1);
        std::swap(order[lo], order[pick(rng)]);
      }
      std::span<std::uint32_t> dst = out.at(x, y);
      std::copy(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k + sampled), dst.begin());
    }
  });
  return out;
}

}  // namespace nudeblur
