#include <doctest.h>

#include <cmath>
#include <set>

#include "nudeblur/core/binary_io.hpp"
#include "nudeblur/deconv/operator.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/synth/synth.hpp"
#include "support.hpp"

using namespace nudeblur;

TEST_CASE("field_translation") {
  const MotionField a = field_translation(9, 7, 7.79, 4.5);
  for (const MotionVector& m : a.data()) {
    CHECK(m.length() == doctest::Approx(9.0).epsilon(1e-3));
    CHECK(m.orientation() == doctest::Approx(30.0).epsilon(1e-3));
  }
  CHECK(a == field_translation(9, 7, 7.79, 4.5));
  CHECK(field_translation(3, 3, 1, 0) == MotionField(3, 3, canonicalize(1, 0)));
  CHECK_THROWS_AS(field_translation(3, 3, 20, 20), Error);
}

TEST_CASE("field_rotation") {
  const MotionField f = field_rotation(41, 31, 20, 15, 0.2);
  CHECK(f.at(20, 15) == canonicalize(1, 0));
  CHECK(f.at(30, 15).orientation() == doctest::Approx(90.0));
  CHECK(f.at(30, 15).length() == doctest::Approx(3.0));
  CHECK(f.at(20, 5).orientation() == doctest::Approx(0.0));
  for (int x = 21; x < 41; ++x) CHECK(f.at(x, 15).length() > f.at(x - 1, 15).length());
  // Point symmetry about the center.
  CHECK(f.at(25, 20) == f.at(15, 10));
  for (const MotionVector& m : f.data()) {
    CHECK(m.length() >= 1.0);
    CHECK(m.length() <= kMaxMotionLength);
  }
  CHECK(f == field_rotation(41, 31, 20, 15, 0.2));
  CHECK(field_rotation(41, 31, 20, 15, -0.2) == f);
  CHECK_THROWS_AS(field_rotation(128, 128, 64, 64, 1.0), Error);
}

TEST_CASE("blur_with_field matches the operator") {
  const ImageBuffer img = test::noise_image(30, 25, 3, 1);
  const MotionField f = test::random_field(30, 25, 2);
  CHECK(blur_with_field(img, f) == NonUniformOperator(f).apply(img));
  CHECK(blur_with_field(img, MotionField(30, 25)) == img);
}

TEST_CASE("training patches") {
  const std::vector<ImageBuffer> images{test::noise_image(70, 60, 3, 3), test::noise_image(56, 90, 1, 4),
                                        test::noise_image(40, 40, 3, 5)};
  std::vector<PatchOrigin> origins;
  const auto records = make_training_patches(images, 146, 7, &origins);
  REQUIRE(records.size() == 146);
  std::vector<int> per_label(73, 0);
  for (const auto& r : records) ++per_label[r.label];
  for (int c : per_label) CHECK(c == 2);

  SUBCASE("one per label") {
    const auto one = make_training_patches(images, 73, 1);
    std::set<int> labels;
    for (const auto& r : one) labels.insert(r.label);
    CHECK(labels.size() == 73);
  }
  SUBCASE("labels match the blur of their source") {
    for (std::size_t i = 0; i < records.size(); i += 5) {
      const PatchOrigin& o = origins[i];
      CHECK(o.image != 2);  // too small
      const ImageBuffer region = to_rgb(images[o.image].crop(o.x - kTrainingMargin, o.y - kTrainingMargin, 56, 56));
      auto matches = [&](std::size_t label) {
        const ImageBuffer b = blur_with_field(region, MotionField(56, 56, base_candidate_set()[label]));
        std::size_t k = 0;
        for (int y = 0; y < 30; ++y) {
          for (int x = 0; x < 30; ++x) {
            for (int c = 0; c < 3; ++c) {
              if (quantize_u8(b.at(x + kTrainingMargin, y + kTrainingMargin, c)) != records[i].rgb[k++]) return false;
            }
          }
        }
        return true;
      };
      CHECK(matches(records[i].label));
      CHECK_FALSE(matches((records[i].label + 1) % 73));
    }
  }
  SUBCASE("file format and determinism") {
    const auto a = test::temp_path("a.ptch");
    const auto b = test::temp_path("b.ptch");
    export_training_patches(images, 80, 9, a);
    export_training_patches(images, 80, 9, b);
    const auto bytes_a = binary::read_file(a);
    CHECK(bytes_a == binary::read_file(b));
    CHECK(bytes_a.size() == 8 + 80 * 2701);
    CHECK(std::string(bytes_a.begin(), bytes_a.begin() + 4) == "PTCH");
    const auto back = read_patch_dataset(a);
    CHECK(encode_patch_dataset(back) == bytes_a);
    CHECK(back[5].label == 5);

    auto bad = bytes_a;
    bad[8] = 73;
    CHECK_THROWS_AS(decode_patch_dataset(bad), Error);
    bad = bytes_a;
    bad.pop_back();
    CHECK_THROWS_AS(decode_patch_dataset(bad), Error);
  }
  CHECK_THROWS_AS(make_training_patches({test::noise_image(50, 50, 3, 1)}, 4, 0), Error);
}
