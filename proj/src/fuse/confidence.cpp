#include "nudeblur/fuse/confidence.hpp"

#include <cmath>
#include <string>

#include "nudeblur/core/binary_io.hpp"
#include "nudeblur/core/parallel.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/simd/kernels.hpp"

namespace nudeblur {

ConfidenceVolume::ConfidenceVolume(int width, int height, CandidateSetId set_id)
    : width_(width), height_(height), set_id_(set_id), n_(candidate_set(set_id).size()) {
  if (width <= 0 || height <= 0) throw Error(ErrorKind::Format, "volume dimensions must be positive");
  data_.assign(static_cast<std::size_t>(width) * height * n_, 0.0f);
}

ConfidenceVolume confidence_volume(std::span<const PatchPrediction> preds, int width, int height, double sigma) {
  if (preds.empty()) throw Error(ErrorKind::Coverage, "no patch predictions to fuse");
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "fusion sigma must be positive");
  const CandidateSetId id = preds.front().distribution.set_id;
  const std::size_t n = candidate_set(id).size();
  for (const auto& p : preds) {
    if (p.distribution.set_id != id || p.distribution.probs.size() != n) {
      throw Error(ErrorKind::InvalidArgument, "patch distributions are over different candidate sets");
    }
  }

  constexpr int half = kPatchSize / 2;
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  ConfidenceVolume volume(width, height, id);
  const auto& kernels = simd::active();

  std::vector<int> uncovered(static_cast<std::size_t>(height), -1);
  parallel_for(static_cast<std::size_t>(height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    std::vector<const PatchPrediction*> rows;
    for (const auto& p : preds) {
      if (y >= p.center.y - half && y < p.center.y + half) rows.push_back(&p);
    }
    std::vector<double> acc(n);
    for (int x = 0; x < width; ++x) {
      std::fill(acc.begin(), acc.end(), 0.0);
      double z = 0.0;
      for (const PatchPrediction* p : rows) {
        if (x < p->center.x - half || x >= p->center.x + half) continue;
        const double dx = x - p->center.x;
        const double dy = y - p->center.y;
        const double w = std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
        kernels.axpy(w, p->distribution.probs.data(), acc.data(), n);
        z += w;
      }
      if (z == 0.0) {
        uncovered[row] = x;
        return;
      }
      std::span<float> dst = volume.at(x, y);
      for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<float>(acc[i] / z);
    }
  });
  for (int y = 0; y < height; ++y) {
    if (uncovered[y] >= 0) {
      throw Error(ErrorKind::Coverage, "pixel (" + std::to_string(uncovered[y]) + ", " + std::to_string(y) +
                                           ") is not covered by any patch");
    }
  }
  return volume;
}

void write_confidence_volume(const std::filesystem::path& path, const ConfidenceVolume& volume) {
  binary::Writer w;
  w.magic("CONF");
  w.u32(static_cast<std::uint32_t>(volume.width()));
  w.u32(static_cast<std::uint32_t>(volume.height()));
  w.u32(static_cast<std::uint32_t>(volume.candidates()));
  for (float v : volume.data()) w.f32(v);
  w.save(path);
}

ConfidenceVolume read_confidence_volume(const std::filesystem::path& path) {
  binary::Reader r = binary::Reader::open(path, ErrorKind::Format);
  r.expect_magic("CONF");
  const std::uint32_t width = r.u32();
  const std::uint32_t height = r.u32();
  const std::uint32_t n = r.u32();
  CandidateSetId id;
  if (n == base_candidate_set().size()) {
    id = CandidateSetId::Base;
  } else if (n == extended_candidate_set().size()) {
    id = CandidateSetId::Extended;
  } else {
    r.fail("unknown candidate count " + std::to_string(n));
  }
  if (width == 0 || height == 0 || r.remaining() != static_cast<std::size_t>(width) * height * n * 4) {
    r.fail("payload size does not match header");
  }
  ConfidenceVolume volume(static_cast<int>(width), static_cast<int>(height), id);
  for (int y = 0; y < volume.height(); ++y) {
    for (int x = 0; x < volume.width(); ++x) {
      for (float& v : volume.at(x, y)) v = r.f32();
    }
  }
  return volume;
}

}  // namespace nudeblur
