#include <doctest.h>

#include <cmath>
#include <limits>

#include "nudeblur/error.hpp"
#include "nudeblur/metrics/metrics.hpp"
#include "support.hpp"

using namespace nudeblur;

TEST_CASE("mse_motion examples") {
  const MotionField gt(4, 3, canonicalize(3, 0));
  CHECK(mse_motion(gt, gt) == 0.0);
  // (0, 4) against (3, 0): off by (3, 4) everywhere.
  CHECK(mse_motion(MotionField(4, 3, canonicalize(4, 90)), gt) == 12.5);

  const MotionField base(5, 4, canonicalize(5, 0));
  MotionField one = base;
  one.at(2, 1) = canonicalize(10, 0);
  CHECK(mse_motion(one, base) == 12.5 / 20.0);
}

TEST_CASE("mse_motion properties") {
  const MotionField a = test::random_field(9, 8, 1);
  const MotionField b = test::random_field(9, 8, 2);
  CHECK(mse_motion(a, b) == mse_motion(b, a));
  CHECK(mse_motion(a, b) > 0.0);
  CHECK_THROWS_AS(mse_motion(a, MotionField(8, 8)), Error);
}

TEST_CASE("psnr_motion examples") {
  CHECK(psnr_from_mse_motion(6.25) == 20.0);
  CHECK(psnr_from_mse_motion(625.0) == 0.0);
  const MotionField f = test::random_field(6, 6, 3);
  CHECK(psnr_motion(f, f) == std::numeric_limits<double>::infinity());
  CHECK(psnr_motion(MotionField(4, 3, canonicalize(4, 90)), MotionField(4, 3, canonicalize(3, 0))) ==
        psnr_from_mse_motion(12.5));
}

TEST_CASE("mse_ker examples") {
  const MotionField f = test::random_field(5, 5, 4);
  CHECK(mse_ker(f, f) == 0.0);
  // delta vs five taps of 0.2: (0.8^2 + 4 * 0.2^2) / 625.
  const double want = (0.8 * 0.8 + 4 * 0.2 * 0.2) / 625.0;
  CHECK(mse_ker(MotionField(3, 2), MotionField(3, 2, canonicalize(5, 0))) == doctest::Approx(want).epsilon(1e-14));
  // Support dependent.
  CHECK(mse_ker(MotionField(3, 2), MotionField(3, 2, canonicalize(5, 0)), 11) ==
        doctest::Approx(want * 625.0 / 121.0).epsilon(1e-14));
}

TEST_CASE("psnr_image examples") {
  const ImageBuffer a = test::noise_image(10, 10, 3, 5);
  CHECK(psnr_image(a, a) == std::numeric_limits<double>::infinity());

  ImageBuffer b(8, 8, 1, 0.5);
  ImageBuffer c(8, 8, 1, 0.6);
  CHECK(psnr_image(c, b) == doctest::Approx(20.0).epsilon(1e-12));

  ImageBuffer board(8, 8, 1);
  ImageBuffer inverse(8, 8, 1);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      board.at(x, y) = (x + y) % 2;
      inverse.at(x, y) = 1 - (x + y) % 2;
    }
  }
  CHECK(psnr_image(board, inverse) == 0.0);
  CHECK_THROWS_AS(psnr_image(board, ImageBuffer(8, 8, 3)), Error);
}
