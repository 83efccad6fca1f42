// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/motion_field.hpp"
#include "nudeblur/deconv/gmm.hpp"
#include "nudeblur/deconv/hqs.hpp"
#include "nudeblur/deconv/operator.hpp"
#include "nudeblur/fuse/mrf.hpp"
#include "nudeblur/metrics/metrics.hpp"
#include "nudeblur/pipeline.hpp"
#include "nudeblur/synth/synth.hpp"

using namespace nudeblur;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(bool ok, const char* name, const std::string& detail, double seconds) {
  std::printf("%s %-22s %s time=%.2fs\n", ok ? "PASS" : "FAIL", name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

MotionField random_field(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(1.0, 25.0);
  std::uniform_real_distribution<double> ori(0.0, 180.0);
  MotionField f(w, h);
  for (auto& m : f.data()) m = canonicalize(len(rng), ori(rng));
  return f;
}

ImageBuffer random_image(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageBuffer img(w, h, 1);
  for (double& s : img.samples()) s = u(rng);
  return img;
}

Eigen::Map<const Eigen::VectorXd> vec(const ImageBuffer& img) {
  return {img.samples().data(), static_cast<Eigen::Index>(img.samples().size())};
}

void adjoint_suite() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const NonUniformOperator op(random_field(32, 32, rng));
    const ImageBuffer x = random_image(32, 32, rng);
    const ImageBuffer y = random_image(32, 32, rng);
    const ImageBuffer kx = op.apply(x);
    const ImageBuffer kty = op.apply_adjoint(y);
    const double err = std::abs(vec(kx).dot(vec(y)) - vec(x).dot(vec(kty))) / (vec(kx).norm() * vec(y).norm());
    worst = std::max(worst, err);
  }
  const double t = seconds_since(t0);
  report(worst < 1e-6 && t < 10.0, "adjoint", "instances=100 max_rel=" + num(worst), t);
}

// Residual target for the dense comparison; at the default 1e-5 the solution
// error is up to cond(A) times larger.
const CgOptions kCgOracle{1e-8, 500};

void cg_suite() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> log_beta(std::log(50.0), std::log(3200.0));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const NonUniformOperator op(random_field(12, 12, rng));
    const ImageBuffer o = random_image(12, 12, rng);
    const PatchSet z = extract_patches(random_image(12, 12, rng), 8);
    const double lambda = 2e5;
    const double beta = std::exp(log_beta(rng));

    // Dense K from the per-pixel kernels with edge replication.
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(144, 144);
    for (int y = 0; y < 12; ++y) {
      for (int x = 0; x < 12; ++x) {
        for (const KernelTap& tap : op.kernel_at(x, y)) {
          k(y * 12 + x, std::clamp(y - tap.dy, 0, 11) * 12 + std::clamp(x - tap.dx, 0, 11)) += tap.weight;
        }
      }
    }
    const Eigen::VectorXd cov = vec(patch_coverage(12, 12, 8));
    const Eigen::MatrixXd a = lambda * k.transpose() * k + beta * Eigen::MatrixXd(cov.asDiagonal());
    const Eigen::VectorXd b = lambda * k.transpose() * vec(o) + beta * vec(aggregate_patches(z));
    const Eigen::VectorXd want = a.ldlt().solve(b);
    const ImageBuffer got = solve_x(op, o, z, lambda, beta, kCgOracle);
    worst = std::max(worst, (vec(got) - want).norm() / want.norm());
  }
  const double t = seconds_since(t0);
  report(worst < 1e-4 && t < 30.0, "cg_vs_dense", "systems=20 cg_tol=" + num(kCgOracle.tolerance) + " max_rel_err=" + num(worst), t);
}

void bp_suite() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> length(2, 10);
  std::uniform_int_distribution<std::uint32_t> label(0, 360);
  std::uniform_real_distribution<float> conf(0.0f, 1.0f);
  std::uniform_real_distribution<double> log_lambda(std::log(1e-5), std::log(1e-2));
  const CandidateSet& set = extended_candidate_set();
  int exact = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = length(rng);
    ConfidenceVolume volume(n, 1, CandidateSetId::Extended);
    CandidateShortlist list(n, 1, 4);
    for (int x = 0; x < n; ++x) {
      std::set<std::uint32_t> picked;
      while (picked.size() < 4) picked.insert(label(rng));
      std::size_t i = 0;
      for (std::uint32_t id : picked) {
        list.at(x, 0)[i++] = id;
        volume.at(x, 0)[id] = conf(rng);
      }
    }
    MrfParams params;
    params.lambda_smooth = std::exp(log_lambda(rng));

    // Exhaustive search over the 4^n shortlist labelings.
    auto chain_energy = [&](const std::vector<std::uint32_t>& ids) {
      double e = 0.0;
      for (int x = 0; x < n; ++x) e -= static_cast<double>(volume.at(x, 0)[ids[x]]);
      double s = 0.0;
      for (int x = 0; x + 1 < n; ++x) {
        const double du = set.u()[ids[x]] - set.u()[ids[x + 1]];
        const double dv = set.v()[ids[x]] - set.v()[ids[x + 1]];
        s += du * du + dv * dv;
      }
      return e + params.lambda_smooth * s;
    };
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> ids(n);
    const std::size_t total = std::size_t{1} << (2 * n);
    for (std::size_t code = 0; code < total; ++code) {
      for (int x = 0; x < n; ++x) ids[x] = list.at(x, 0)[(code >> (2 * x)) & 3];
      best = std::min(best, chain_energy(ids));
    }

    const MotionField f = solve_mrf(volume, list, params);
    for (int x = 0; x < n; ++x) ids[x] = static_cast<std::uint32_t>(*set.index_of(f.at(x, 0)));
    exact += chain_energy(ids) == best;
  }
  const double t = seconds_since(t0);
  report(exact == 50 && t < 10.0, "bp_chains", "exact=" + std::to_string(exact) + "/50", t);
}

ImageBuffer load_test_image(const std::string& name) { return read_png(fs::path(NUDEBLUR_DATA_DIR) / "images/test" / (name + ".png")); }

const OracleOptions kOracle{0.1, 1.0};

void oracle_suite() {
  const auto t0 = Clock::now();
  const ImageBuffer sharp = load_test_image("camera");
  const MotionField gt = field_rotation(sharp.width(), sharp.height(), 63.5, 63.5, 0.15);
  const ImageBuffer blurred = blur_with_field(sharp, gt);
  const OraclePredictor oracle(gt, kOracle);
  const MotionField target = quantize_field(gt, extended_candidate_set());

  EstimateOptions opts;
  const FieldEstimate full = estimate_field(blurred, oracle, opts);
  const double mse_full = mse_motion(full.field, target);
  const MotionField plain = unary_labeling(full.volume);
  const double mse_unary = mse_motion(plain, target);
  const double t = seconds_since(t0);

  // Reference: every pixel takes the quantized truth at its nearest patch
  // center, the best any center-sampled predictor can be expected to do.
  const std::vector<Pixel> centers = patch_centers(sharp.width(), sharp.height(), opts.stride);
  MotionField nearest(sharp.width(), sharp.height());
  for (int y = 0; y < nearest.height(); ++y) {
    for (int x = 0; x < nearest.width(); ++x) {
      const Pixel* best = &centers.front();
      for (const Pixel& c : centers) {
        if (std::hypot(c.x - x, c.y - y) < std::hypot(best->x - x, best->y - y)) best = &c;
      }
      nearest.at(x, y) = target.at(best->x, best->y);
    }
  }
  report(mse_full < 1.0 && mse_unary > mse_full && t < 120.0, "oracle_field",
         "mse_motion=" + num(mse_full) + " unary_mse_motion=" + num(mse_unary) +
             " nearest_center_mse_motion=" + num(mse_motion(nearest, target)),
         t);
}

void extension_suite() {
  const auto t0 = Clock::now();
  const ImageBuffer sharp = load_test_image("astronaut");
  const MotionVector m = canonicalize(9, 66);
  const MotionField gt(sharp.width(), sharp.height(), m);
  const ImageBuffer blurred = blur_with_field(sharp, gt);
  const OraclePredictor oracle(gt, kOracle);

  EstimateOptions opts;
  const MotionField ext = estimate_field(blurred, oracle, opts).field;
  opts.extended = false;
  const MotionField base = estimate_field(blurred, oracle, opts).field;
  std::size_t hits_ext = 0;
  std::size_t hits_base = 0;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    hits_ext += ext.data()[i] == m;
    hits_base += base.data()[i] == m;
  }
  const double frac_ext = static_cast<double>(hits_ext) / static_cast<double>(ext.size());
  const double frac_base = static_cast<double>(hits_base) / static_cast<double>(base.size());
  const double t = seconds_since(t0);
  report(frac_ext >= 0.99 && frac_base == 0.0 && t < 60.0, "extension_66deg",
         "extended_hits=" + num(frac_ext) + " base_hits=" + num(frac_base), t);
}

void metrics_suite() {
  const auto t0 = Clock::now();
  int ok = 0;
  int total = 0;
  auto check = [&](bool c) {
    ok += c;
    ++total;
  };
  const MotionField gt(16, 16, canonicalize(3, 0));
  check(mse_motion(gt, gt) == 0.0);
  check(mse_motion(MotionField(16, 16, canonicalize(4, 90)), gt) == 12.5);
  MotionField one(16, 16, canonicalize(5, 0));
  one.at(3, 4) = canonicalize(10, 0);
  check(mse_motion(one, MotionField(16, 16, canonicalize(5, 0))) == 12.5 / 256.0);
  check(psnr_from_mse_motion(6.25) == 20.0);
  check(psnr_from_mse_motion(625.0) == 0.0);
  check(std::isinf(psnr_motion(gt, gt)));
  check(mse_ker(gt, gt) == 0.0);
  const double ker = mse_ker(MotionField(4, 4), MotionField(4, 4, canonicalize(5, 0)));
  check(std::abs(ker - (0.64 + 4 * 0.04) / 625.0) < 1e-15);
  ImageBuffer a(8, 8, 1, 0.5);
  ImageBuffer b(8, 8, 1, 0.6);
  check(std::isinf(psnr_image(a, a)));
  check(std::abs(psnr_image(a, b) - 20.0) < 1e-9);
  ImageBuffer board(8, 8, 1);
  ImageBuffer inverse(8, 8, 1);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      board.at(x, y) = (x + y) % 2;
      inverse.at(x, y) = 1 - (x + y) % 2;
    }
  }
  check(psnr_image(board, inverse) == 0.0);
  report(ok == total, "metrics", "examples=" + std::to_string(ok) + "/" + std::to_string(total), seconds_since(t0));
}

struct DeblurCase {
  const char* image;
  MotionField field;
};

void deblur_suites() {
  const fs::path prior_path = fs::path(NUDEBLUR_DATA_DIR) / "prior.gmmp";
  const GmmPrior prior = load_gmm(prior_path);

  std::vector<DeblurCase> cases;
  cases.push_back({"camera", field_rotation(128, 128, 63.5, 63.5, 0.12)});
  cases.push_back({"astronaut", field_rotation(128, 128, 20.0, 100.0, 0.08)});
  cases.push_back({"coffee", field_translation(128, 128, 7.0, 4.0)});
  cases.push_back({"chelsea", field_rotation(128, 128, 90.0, 30.0, 0.1)});
  cases.push_back({"rocket", field_translation(128, 128, 0.0, 11.0)});

  std::vector<ImageBuffer> sharp;
  std::vector<ImageBuffer> blurred;
  for (const DeblurCase& c : cases) {
    sharp.push_back(load_test_image(c.image));
    blurred.push_back(blur_with_field(sharp.back(), c.field));
  }

  // Timed runs without tracing.
  auto t0 = Clock::now();
  std::string gains;
  double min_gain = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const ImageBuffer out = deblur(blurred[i], cases[i].field, prior);
    const double before = psnr_image(blurred[i], sharp[i]);
    const double after = psnr_image(out, sharp[i]);
    min_gain = std::min(min_gain, after - before);
    gains += std::string(gains.empty() ? "" : ",") + cases[i].image + ":" + num(before) + "->" + num(after);
  }
  double t = seconds_since(t0);
  report(min_gain >= 2.0 && t < 300.0, "deblur_gain", "min_gain_db=" + num(min_gain) + " " + gains, t);

  // Objective around every z- and x-step.
  t0 = Clock::now();
  double worst_increase = -std::numeric_limits<double>::infinity();
  std::string worst_where;
  std::size_t steps = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    HqsTrace trace;
    deblur(blurred[i], cases[i].field, prior, {}, &trace);
    for (const HqsStage& s : trace.stages) {
      const double z_inc = (s.after_z - s.before_z) / std::abs(s.before_z);
      const double x_inc = (s.after_x - s.after_z) / std::abs(s.after_z);
      for (const auto& [inc, step] : {std::pair{z_inc, "z"}, std::pair{x_inc, "x"}}) {
        ++steps;
        if (inc > worst_increase) {
          worst_increase = inc;
          worst_where = std::string(cases[i].image) + "/c" + std::to_string(s.channel) + "/beta" + num(s.beta) + "/" + step;
        }
      }
    }
  }
  t = seconds_since(t0);
  report(worst_increase <= 1e-6, "hqs_monotone",
         "steps=" + std::to_string(steps) + " max_rel_change=" + num(worst_increase) + " at " + worst_where, t);
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)()> suites[] = {
      {"adjoint", adjoint_suite},         {"cg_vs_dense", cg_suite}, {"bp_chains", bp_suite},
      {"oracle_field", oracle_suite},     {"extension_66deg", extension_suite},
      {"metrics", metrics_suite},         {"deblur", deblur_suites},
  };
  for (const auto& [name, run] : suites) {
    try {
      run();
    } catch (const std::exception& e) {
      report(false, name, std::string("error: ") + e.what(), 0.0);
    }
  }
  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
