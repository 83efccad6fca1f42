// nudeblur: estimate non-uniform motion blur fields and remove the blur.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/motion_field.hpp"
#include "nudeblur/core/parallel.hpp"
#include "nudeblur/deconv/gmm.hpp"
#include "nudeblur/deconv/hqs.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/metrics/metrics.hpp"
#include "nudeblur/pipeline.hpp"
#include "nudeblur/synth/synth.hpp"

namespace fs = std::filesystem;
using namespace nudeblur;

namespace {

constexpr int kExitArgs = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
      return kExitIo;
    case ErrorKind::ModelFormat:
    case ErrorKind::Format:
      return kExitFormat;
    default:
      return kExitArgs;
  }
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct EstimateArgs {
  std::string image;
  std::string weights;
  std::string oracle;
  double epsilon = 0.0;
  double oracle_sigma = 1.0;
  std::string out;
  std::string conf_out;
  bool no_extend = false;
  EstimateOptions opts;
};

int run_estimate(const EstimateArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ImageBuffer image = read_png(a.image);
  std::unique_ptr<Predictor> predictor;
  if (!a.oracle.empty()) {
    MotionField truth = read_motion_field(a.oracle);
    if (truth.width() != image.width() || truth.height() != image.height()) {
      throw Error(ErrorKind::DimensionMismatch, "oracle field does not match the image size");
    }
    predictor = std::make_unique<OraclePredictor>(std::move(truth), OracleOptions{a.epsilon, a.oracle_sigma});
  } else {
    predictor = std::make_unique<CnnPredictor>(load_model(a.weights));
  }
  EstimateOptions opts = a.opts;
  opts.extended = !a.no_extend;
  const FieldEstimate est = estimate_field(image, *predictor, opts);
  write_motion_field(a.out, est.field);
  if (!a.conf_out.empty()) write_confidence_volume(a.conf_out, est.volume);
  std::cout << "elapsed_s=" << fmt(seconds_since(t0)) << '\n';
  return 0;
}

struct DeblurArgs {
  std::string image;
  std::string field;
  std::string prior = NUDEBLUR_DEFAULT_PRIOR;
  std::string out;
  double lambda = 2e5;
  double beta0 = 50.0;
  double beta_ratio = 2.0;
  int beta_iters = 7;
  double cg_tol = 1e-5;
  int cg_iters = 200;
};

int run_deblur(const DeblurArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ImageBuffer image = read_png(a.image);
  const MotionField field = read_motion_field(a.field);
  if (field.width() != image.width() || field.height() != image.height()) {
    throw Error(ErrorKind::DimensionMismatch, "field is " + std::to_string(field.width()) + "x" +
                                                  std::to_string(field.height()) + " but the image is " +
                                                  std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  HqsSchedule schedule;
  schedule.lambda_data = a.lambda;
  schedule.cg_tol = a.cg_tol;
  schedule.cg_max_iter = a.cg_iters;
  schedule.betas.clear();
  for (int i = 0; i < a.beta_iters; ++i) schedule.betas.push_back(a.beta0 * std::pow(a.beta_ratio, i));
  validate(schedule);
  if (schedule.betas.empty()) {
    write_png(a.out, image);
  } else {
    write_png(a.out, deblur(image, field, load_gmm(a.prior), schedule));
  }
  std::cout << "elapsed_s=" << fmt(seconds_since(t0)) << '\n';
  return 0;
}

struct SynthArgs {
  std::string image;
  std::string out;
  double omega = 0.05;
  std::optional<double> cx;
  std::optional<double> cy;
  double u = 1.0;
  double v = 0.0;
};

int run_synth(const SynthArgs& a, bool rotation) {
  const ImageBuffer sharp = read_png(a.image);
  const MotionField field =
      rotation ? field_rotation(sharp.width(), sharp.height(), a.cx.value_or((sharp.width() - 1) / 2.0),
                                a.cy.value_or((sharp.height() - 1) / 2.0), a.omega)
               : field_translation(sharp.width(), sharp.height(), a.u, a.v);
  fs::path prefix = a.out;
  if (prefix.empty()) {
    prefix = fs::path(a.image).replace_extension();
    prefix += rotation ? "_rotation" : "_translation";
  }
  fs::path png = prefix;
  png += ".png";
  fs::path mfld = prefix;
  mfld += ".mfld";
  write_png(png, blur_with_field(sharp, field));
  write_motion_field(mfld, field);
  std::cout << "image=" << png.string() << "\nfield=" << mfld.string() << '\n';
  return 0;
}

struct EvalArgs {
  std::string est;
  std::string gt;
  std::string image;
  std::string ref;
  int support = 25;
};

int run_eval(const EvalArgs& a) {
  const bool fields = !a.est.empty() || !a.gt.empty();
  const bool images = !a.image.empty() || !a.ref.empty();
  if (fields && (a.est.empty() || a.gt.empty())) throw Error(ErrorKind::InvalidArgument, "--est and --gt go together");
  if (images && (a.image.empty() || a.ref.empty())) {
    throw Error(ErrorKind::InvalidArgument, "--image and --ref go together");
  }
  if (!fields && !images) throw Error(ErrorKind::InvalidArgument, "nothing to evaluate: give --est/--gt or --image/--ref");
  if (a.support < 1 || a.support % 2 == 0) throw Error(ErrorKind::InvalidArgument, "--support must be a positive odd number");
  if (fields) {
    const MotionField est = read_motion_field(a.est);
    const MotionField gt = read_motion_field(a.gt);
    const double mse = mse_motion(est, gt);
    std::cout << "mse_motion=" << fmt(mse) << '\n'
              << "psnr_motion=" << fmt(psnr_from_mse_motion(mse)) << '\n'
              << "mse_ker=" << fmt(mse_ker(est, gt, a.support)) << '\n';
  }
  if (images) {
    std::cout << "psnr_deblur=" << fmt(psnr_image(read_png(a.image), read_png(a.ref))) << '\n';
  }
  return 0;
}

std::vector<ImageBuffer> read_images(const std::vector<std::string>& paths) {
  std::vector<ImageBuffer> out;
  for (const std::string& p : paths) out.push_back(read_png(p));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-uniform motion blur estimation and removal"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  EstimateArgs est;
  CLI::App* c_est = app.add_subcommand("estimate", "Estimate a motion field from a blurry image");
  c_est->add_option("--image", est.image, "Blurry PNG")->required();
  auto* w_opt = c_est->add_option("--weights", est.weights, "CNNW classifier weights");
  auto* o_opt = c_est->add_option("--oracle", est.oracle, "Ground-truth MFLD field used as an oracle classifier");
  w_opt->excludes(o_opt);
  c_est->add_option("--epsilon", est.epsilon, "Oracle softness")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c_est->add_option("--oracle-sigma", est.oracle_sigma, "Oracle match width in pixels (0 = off)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  c_est->add_option("--out", est.out, "Output MFLD path")->required();
  c_est->add_option("--conf-out", est.conf_out, "Also write the CONF confidence volume");
  c_est->add_flag("--no-extend", est.no_extend, "Use the 73-candidate base set only");
  c_est->add_option("--stride", est.opts.stride, "Patch stride")->check(CLI::PositiveNumber);
  c_est->add_option("--sigma", est.opts.fusion_sigma, "Fusion Gaussian width")->check(CLI::PositiveNumber);
  c_est->add_option("--top-k", est.opts.top_k, "Shortlist: highest-confidence candidates");
  c_est->add_option("--sampled", est.opts.sampled, "Shortlist: random extra candidates");
  c_est->add_option("--lambda", est.opts.mrf.lambda_smooth, "MRF smoothness weight");
  c_est->add_option("--bp-iters", est.opts.mrf.bp_iterations, "Belief propagation sweeps");
  c_est->add_option("--damping", est.opts.mrf.damping, "Message damping in [0, 1)");
  c_est->add_option("--grid-stride", est.opts.mrf.grid_stride, "MRF grid stride");
  c_est->add_option("--seed", est.opts.mrf.rng_seed, "Shortlist sampling seed");

  DeblurArgs deb;
  CLI::App* c_deb = app.add_subcommand("deblur", "Non-blind deconvolution with a known field");
  c_deb->add_option("--image", deb.image, "Blurry PNG")->required();
  c_deb->add_option("--field", deb.field, "MFLD motion field")->required();
  c_deb->add_option("--prior", deb.prior, "GMMP patch prior")->capture_default_str();
  c_deb->add_option("--out", deb.out, "Output PNG")->required();
  c_deb->add_option("--lambda", deb.lambda, "Data term weight")->capture_default_str();
  c_deb->add_option("--beta0", deb.beta0, "First beta")->capture_default_str();
  c_deb->add_option("--beta-ratio", deb.beta_ratio, "Beta growth per iteration")->capture_default_str();
  c_deb->add_option("--beta-iters", deb.beta_iters, "Outer iterations (0 copies the input)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_deb->add_option("--cg-tol", deb.cg_tol, "CG relative residual tolerance")->capture_default_str();
  c_deb->add_option("--cg-iters", deb.cg_iters, "CG iteration cap")->capture_default_str();

  SynthArgs syn;
  CLI::App* c_syn = app.add_subcommand("synth", "Blur a sharp image with a synthetic camera-motion field");
  c_syn->require_subcommand(1);
  CLI::App* c_rot = c_syn->add_subcommand("rotation", "In-plane rotation about a center");
  CLI::App* c_tra = c_syn->add_subcommand("translation", "Uniform translation");
  for (CLI::App* sub : {c_rot, c_tra}) {
    sub->add_option("--image", syn.image, "Sharp PNG")->required();
    sub->add_option("--out", syn.out, "Output prefix (writes <prefix>.png and <prefix>.mfld)");
  }
  c_rot->add_option("--omega", syn.omega, "Rotation in radians over the exposure")->capture_default_str();
  c_rot->add_option("--cx", syn.cx, "Rotation center x (default image center)");
  c_rot->add_option("--cy", syn.cy, "Rotation center y (default image center)");
  c_tra->add_option("--u", syn.u, "Horizontal extent in pixels")->capture_default_str();
  c_tra->add_option("--v", syn.v, "Vertical extent in pixels")->capture_default_str();

  EvalArgs ev;
  CLI::App* c_eval = app.add_subcommand("eval", "Print key=value quality metrics");
  c_eval->add_option("--est", ev.est, "Estimated MFLD field");
  c_eval->add_option("--gt", ev.gt, "Ground-truth MFLD field");
  c_eval->add_option("--image", ev.image, "Deblurred PNG");
  c_eval->add_option("--ref", ev.ref, "Sharp reference PNG");
  c_eval->add_option("--support", ev.support, "Kernel support for mse_ker")->capture_default_str();

  std::vector<std::string> exp_images;
  std::size_t exp_count = 73 * 100;
  std::uint64_t exp_seed = 0;
  std::string exp_out;
  CLI::App* c_exp = app.add_subcommand("export-patches", "Write a PTCH training set for the classifier");
  c_exp->add_option("--images", exp_images, "Sharp source PNGs")->required();
  c_exp->add_option("--count", exp_count, "Number of records")->capture_default_str();
  c_exp->add_option("--seed", exp_seed, "Random seed")->capture_default_str();
  c_exp->add_option("--out", exp_out, "Output PTCH path")->required();

  std::vector<std::string> fit_images;
  std::size_t fit_patches = 200000;
  int fit_components = 20;
  std::uint64_t fit_seed = 0;
  int fit_iters = 200;
  std::string fit_out;
  CLI::App* c_fit = app.add_subcommand("fit-gmm", "Train the 8x8 patch prior");
  c_fit->add_option("--images", fit_images, "Training PNGs")->required();
  c_fit->add_option("--patches", fit_patches, "Number of training patches")->capture_default_str();
  c_fit->add_option("--components", fit_components, "Mixture components")->capture_default_str();
  c_fit->add_option("--seed", fit_seed, "Random seed")->capture_default_str();
  c_fit->add_option("--max-iter", fit_iters, "EM iteration cap")->capture_default_str();
  c_fit->add_option("--out", fit_out, "Output GMMP path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  }

  try {
    set_thread_count(threads);
    if (*c_est) {
      if (est.weights.empty() && est.oracle.empty()) {
        throw Error(ErrorKind::InvalidArgument, "estimate needs --weights or --oracle");
      }
      return run_estimate(est);
    }
    if (*c_deb) return run_deblur(deb);
    if (*c_rot) return run_synth(syn, true);
    if (*c_tra) return run_synth(syn, false);
    if (*c_eval) return run_eval(ev);
    if (*c_exp) {
      export_training_patches(read_images(exp_images), exp_count, exp_seed, exp_out);
      std::cout << "records=" << exp_count << '\n';
      return 0;
    }
    if (*c_fit) {
      const Eigen::MatrixXd patches = sample_training_patches(read_images(fit_images), fit_patches, fit_seed);
      GmmFitOptions opts;
      opts.max_iterations = fit_iters;
      const auto t0 = std::chrono::steady_clock::now();
      opts.progress = [&](int it, double ll) {
        std::cerr << "iteration " << it << " log_likelihood " << fmt(ll / static_cast<double>(patches.cols())) << " ("
                  << fmt(seconds_since(t0)) << " s)\n";
      };
      GmmFitReport report;
      const GmmPrior prior = fit_gmm(patches, fit_components, fit_seed, opts, &report);
      save_gmm(fit_out, prior);
      std::cout << "components=" << prior.size() << "\niterations=" << report.iterations
                << "\nlog_likelihood=" << fmt(report.log_likelihood.back() / static_cast<double>(patches.cols()))
                << "\nconverged=" << (report.converged ? 1 : 0) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kExitArgs;
}
