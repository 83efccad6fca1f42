#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/motion_field.hpp"
#include "nudeblur/deconv/gmm.hpp"
#include "support.hpp"

using namespace nudeblur;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const auto out = test::temp_path("cli.out");
  const auto err = test::temp_path("cli.err");
  const std::string cmd = std::string(NUDEBLUR_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("cli: help and bad arguments") {
  CHECK(run("--help").status == 0);
  CHECK(run("estimate --help").status == 0);
  CHECK(run("--no-such-flag").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("eval --support 4 --est a --gt b").status == 2);
}

TEST_CASE("cli: eval") {
  const auto f = test::temp_path("f.mfld");
  const auto g = test::temp_path("g.mfld");
  write_motion_field(f, test::random_field(12, 10, 1));
  write_motion_field(g, MotionField(12, 10, canonicalize(9, 30)));

  Run r = run("eval --est " + q(f) + " --gt " + q(f));
  CHECK(r.status == 0);
  CHECK(r.out.find("mse_motion=0\n") != std::string::npos);
  CHECK(r.out.find("psnr_motion=inf") != std::string::npos);

  r = run("eval --est " + q(f) + " --gt " + q(g));
  CHECK(r.status == 0);
  CHECK(r.out.find("mse_ker=") != std::string::npos);

  const auto small = test::temp_path("small.mfld");
  write_motion_field(small, MotionField(11, 10));
  CHECK(run("eval --est " + q(f) + " --gt " + q(small)).status == 2);

  const auto missing = test::temp_path("missing.mfld");
  r = run("eval --est " + q(missing) + " --gt " + q(f));
  CHECK(r.status == 3);
  CHECK(r.err.find(missing.string()) != std::string::npos);

  const auto junk = test::temp_path("junk.mfld");
  std::ofstream(junk) << "not a field";
  CHECK(run("eval --est " + q(junk) + " --gt " + q(f)).status == 4);

  const auto a = test::temp_path("a.png");
  write_png(a, test::noise_image(12, 10, 3, 2));
  r = run("eval --image " + q(a) + " --ref " + q(a));
  CHECK(r.status == 0);
  CHECK(r.out.find("psnr_deblur=inf") != std::string::npos);
}

TEST_CASE("cli: synth and deblur") {
  const auto img = test::temp_path("s.png");
  write_png(img, test::smooth_image(40, 36, 3));
  const auto prefix = test::temp_path("rot");
  Run r = run("synth rotation --omega 0.05 --image " + q(img) + " --out " + q(prefix));
  CHECK(r.status == 0);
  const auto blurred = prefix.string() + ".png";
  const auto field = prefix.string() + ".mfld";
  REQUIRE(std::filesystem::exists(blurred));
  REQUIRE(std::filesystem::exists(field));
  CHECK(read_motion_field(field).width() == 40);

  const auto out = test::temp_path("d.png");
  r = run("deblur --image '" + blurred + "' --field '" + field + "' --beta-iters 0 --out " + q(out));
  CHECK(r.status == 0);
  CHECK(read_png(out) == read_png(blurred));

  const auto prior = test::temp_path("iso.gmmp");
  save_gmm(prior, GmmPrior({{1.0, Eigen::VectorXd::Zero(64), 0.01 * Eigen::MatrixXd::Identity(64, 64)}}));
  r = run("deblur --image '" + blurred + "' --field '" + field + "' --prior " + q(prior) + " --beta-iters 2 --out " +
          q(out));
  CHECK(r.status == 0);
  CHECK(read_png(out).width() == 40);

  const auto other = test::temp_path("other.mfld");
  write_motion_field(other, MotionField(39, 36));
  CHECK(run("deblur --image '" + blurred + "' --field " + q(other) + " --out " + q(out)).status == 2);

  CHECK(run("synth translation --u 30 --v 30 --image " + q(img) + " --out " + q(prefix)).status == 2);
}

TEST_CASE("cli: estimate") {
  const auto img = test::temp_path("e.png");
  write_png(img, test::smooth_image(36, 36, 3));
  const auto gt = test::temp_path("e_gt.mfld");
  write_motion_field(gt, MotionField(36, 36, canonicalize(9, 30)));
  const auto out = test::temp_path("e_est.mfld");
  const auto conf = test::temp_path("e.conf");

  Run r = run("estimate --image " + q(img) + " --oracle " + q(gt) + " --out " + q(out) + " --conf-out " + q(conf));
  CHECK(r.status == 0);
  // MFLD stores f32 (u, v), so compare after snapping back to the candidates.
  CHECK(quantize_field(read_motion_field(out), extended_candidate_set()) == MotionField(36, 36, canonicalize(9, 30)));
  CHECK(std::filesystem::exists(conf));

  const auto missing = test::temp_path("nope.cnnw");
  r = run("estimate --image " + q(img) + " --weights " + q(missing) + " --out " + q(out));
  CHECK(r.status == 3);
  CHECK(r.err.find(missing.string()) != std::string::npos);

  const auto junk = test::temp_path("junk.cnnw");
  std::ofstream(junk) << "CNNW";
  CHECK(run("estimate --image " + q(img) + " --weights " + q(junk) + " --out " + q(out)).status == 4);
  CHECK(run("estimate --image " + q(img) + " --weights " + q(junk) + " --oracle " + q(gt) + " --out " + q(out))
            .status == 2);
}
