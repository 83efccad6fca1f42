#include <doctest.h>

#include <cmath>

#include "nudeblur/error.hpp"
#include "nudeblur/extend/extend.hpp"
#include "nudeblur/extend/rotate.hpp"
#include "nudeblur/synth/synth.hpp"
#include "support.hpp"

using namespace nudeblur;

namespace {

std::size_t base_index(double l, double o) { return *base_candidate_set().index_of(canonicalize(l, o)); }
std::size_t ext_index(double l, double o) { return *extended_candidate_set().index_of(canonicalize(l, o)); }

BranchPredictions uniform_branches() {
  BranchPredictions p;
  for (int a : kExtensionAngles) p.emplace(a, uniform_distribution(CandidateSetId::Base));
  return p;
}

}  // namespace

TEST_CASE("rotation by zero is the identity") {
  const ImageBuffer img = test::noise_image(33, 20, 3, 1);
  const RotatedImage r = rotate_image(img, 0.0);
  CHECK(r.image == img);
  const Point2 p = r.map.forward({4.25, 7.5});
  CHECK(p.x == doctest::Approx(4.25));
  CHECK(p.y == doctest::Approx(7.5));
}

TEST_CASE("rotation fixes the center pixel") {
  for (int w : {30, 31, 64, 65}) {
    for (int h : {30, 41}) {
      for (double theta : {-24.0, -18.0, -12.0, -6.0, 6.0, 45.0}) {
        const RotationMap m(w, h, theta);
        CHECK(m.width() % 2 == w % 2);
        CHECK(m.height() % 2 == h % 2);
        const Point2 c = m.forward({(w - 1) / 2.0, (h - 1) / 2.0});
        CHECK(c.x == doctest::Approx((m.width() - 1) / 2.0));
        CHECK(c.y == doctest::Approx((m.height() - 1) / 2.0));
        const Point2 back = m.inverse(m.forward({3.0, 11.0}));
        CHECK(back.x == doctest::Approx(3.0));
        CHECK(back.y == doctest::Approx(11.0));
      }
    }
  }
}

TEST_CASE("rotation turns motion orientation by theta") {
  const RotationMap m(64, 64, -12.0);
  for (double o : {0.0, 30.0, 66.0, 150.0}) {
    const Cartesian d = to_cartesian(canonicalize(9, o));
    const Point2 a = m.forward({20.0, 20.0});
    const Point2 b = m.forward({20.0 + d.u, 20.0 + d.v});
    const MotionVector r = from_cartesian(b.x - a.x, b.y - a.y);
    CHECK(r.length() == doctest::Approx(9.0));
    CHECK(r.orientation() == doctest::Approx(canonicalize(9, o - 12.0).orientation()));
  }
}

TEST_CASE("rotation round trip on a smooth image") {
  const ImageBuffer img = test::smooth_image(64, 64, 1);
  const RotatedImage fwd = rotate_image(img, -6.0);
  const RotatedImage back = rotate_image(fwd.image, 6.0);
  // Compose the two maps to locate the original pixel in the final canvas.
  double sq = 0.0;
  int n = 0;
  for (int y = 12; y < 52; ++y) {
    for (int x = 12; x < 52; ++x) {
      const Point2 p = back.map.forward(fwd.map.forward({static_cast<double>(x), static_cast<double>(y)}));
      const int px = static_cast<int>(std::lround(p.x));
      const int py = static_cast<int>(std::lround(p.y));
      REQUIRE(std::abs(p.x - px) < 1e-6);
      REQUIRE(std::abs(p.y - py) < 1e-6);
      const double d = back.image.at(px, py) - img.at(x, y);
      sq += d * d;
      ++n;
    }
  }
  CHECK(std::sqrt(sq / n) < 0.02);
}

TEST_CASE("rotation rejects right angles") {
  CHECK_THROWS_AS(rotate_image(test::noise_image(8, 8, 1, 1), 90.0), Error);
}

TEST_CASE("extend: branch -24 maps 60 to 84") {
  BranchPredictions p = uniform_branches();
  p[-24] = one_hot(CandidateSetId::Base, base_index(9, 60));
  const MotionDistribution d = extend_distribution(p);
  CHECK(d.set_id == CandidateSetId::Extended);
  CHECK(is_normalized(d, 1e-9));
  CHECK(d.argmax() == ext_index(9, 84));
}

TEST_CASE("extend: every branch lands on o + 6k") {
  for (std::size_t k = 0; k < kExtensionAngles.size(); ++k) {
    for (double o : {0.0, 90.0, 150.0}) {
      BranchPredictions p = uniform_branches();
      p[kExtensionAngles[k]] = one_hot(CandidateSetId::Base, base_index(13, o));
      CHECK(extend_distribution(p).argmax() == ext_index(13, o + 6.0 * k));
    }
  }
  // 150 + 24 wraps to 174 (not below 180, so no wrap needed) and stays in range.
  BranchPredictions p = uniform_branches();
  p[-24] = one_hot(CandidateSetId::Base, base_index(25, 150));
  CHECK(extend_distribution(p).argmax() == ext_index(25, 174));
}

TEST_CASE("extend: uniform inputs give a uniform output") {
  const MotionDistribution d = extend_distribution(uniform_branches());
  REQUIRE(d.probs.size() == 361);
  for (double v : d.probs) CHECK(std::abs(v - 1.0 / 361.0) < 1e-9);
}

TEST_CASE("extend: identity entry is averaged") {
  BranchPredictions p = uniform_branches();
  p[0] = one_hot(CandidateSetId::Base, 0);
  const MotionDistribution d = extend_distribution(p);
  CHECK(d.argmax() == 0);
  // Unnormalized: identity (1 + 4/73)/5, other branch-0 entries 0, rest 1/73.
  const double identity = (1.0 + 4.0 / 73.0) / 5.0;
  const double z = identity + 4.0 * 72.0 / 73.0;
  CHECK(d.probs[0] == doctest::Approx(identity / z).epsilon(1e-12));
  CHECK(d.probs[ext_index(3, 6)] == doctest::Approx((1.0 / 73.0) / z).epsilon(1e-12));
  CHECK(d.probs[ext_index(3, 0)] == 0.0);
}

TEST_CASE("extend: restriction to a branch recovers its distribution up to scale") {
  BranchPredictions p;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int a : kExtensionAngles) {
    MotionDistribution d{CandidateSetId::Base, std::vector<double>(73)};
    for (double& v : d.probs) v = u(rng);
    const double s = d.sum();
    for (double& v : d.probs) v /= s;
    p.emplace(a, d);
  }
  const MotionDistribution e = extend_distribution(p);
  const CandidateSet& base = base_candidate_set();
  for (std::size_t k = 0; k < kExtensionAngles.size(); ++k) {
    const MotionDistribution& src = p[kExtensionAngles[k]];
    const double scale = e.probs[ext_index(3, 6.0 * k)] / src.probs[base_index(3, 0)];
    for (std::size_t i = 1; i < base.size(); ++i) {
      const MotionVector& m = base[i];
      CHECK(e.probs[ext_index(m.length(), m.orientation() + 6.0 * k)] ==
            doctest::Approx(scale * src.probs[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("extend: missing or malformed branch") {
  BranchPredictions p = uniform_branches();
  p.erase(-12);
  try {
    extend_distribution(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IncompleteInput);
    CHECK(std::string(e.what()).find("-12") != std::string::npos);
  }
  p = uniform_branches();
  p[-6] = uniform_distribution(CandidateSetId::Extended);
  CHECK_THROWS_AS(extend_distribution(p), Error);
}

TEST_CASE("predict_extended with the oracle") {
  const ImageBuffer sharp = test::smooth_image(48, 48, 3);
  const OracleOptions opts{0.0, 1.0};

  SUBCASE("66 degrees is reached through the -6 branch") {
    const MotionField gt = field_translation(48, 48, to_cartesian(canonicalize(9, 66)).u,
                                             to_cartesian(canonicalize(9, 66)).v);
    const ImageBuffer blurred = blur_with_field(sharp, gt);
    const auto preds = predict_extended(blurred, OraclePredictor(gt, opts));
    REQUIRE(preds.size() == 16);
    for (const auto& p : preds) CHECK(p.distribution.argmax() == ext_index(9, 66));
  }
  SUBCASE("base members are preserved") {
    const MotionField gt(48, 48, canonicalize(9, 30));
    const ImageBuffer blurred = blur_with_field(sharp, gt);
    const OraclePredictor oracle(gt, opts);
    const auto ext = predict_extended(blurred, oracle);
    const auto plain = predict_image(blurred, oracle);
    for (std::size_t i = 0; i < ext.size(); ++i) {
      CHECK(ext[i].distribution.set()[ext[i].distribution.argmax()] ==
            plain[i].distribution.set()[plain[i].distribution.argmax()]);
    }
  }
  SUBCASE("sharp image") {
    const MotionField gt(48, 48);
    for (const auto& p : predict_extended(sharp, OraclePredictor(gt, opts))) CHECK(p.distribution.argmax() == 0);
  }
}
