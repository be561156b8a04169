#include "adareg/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "adareg/denoise.hpp"
#include "adareg/error.hpp"
#include "adareg/flow.hpp"
#include "adareg/imgio.hpp"
#include "adareg/metrics.hpp"
#include "adareg/segment.hpp"
#include "adareg/synth.hpp"

namespace adareg::cli {

namespace {

constexpr const char* kUsageText =
    "usage: adareg <command> [options]\n"
    "\n"
    "commands:\n"
    "  denoise   adaptive or static TV denoising of one image\n"
    "  segment   two-phase segmentation of one image\n"
    "  flow      TV-L1 optical flow between two frames\n"
    "  sweep     parameter sweep writing a CSV table\n"
    "  synth     generate synthetic test inputs\n"
    "\n"
    "Run 'adareg <command> --help' for the options of a command.\n";

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io, "cannot open " + path + " for writing");
  os << text;
  if (!os) throw Error(Errc::io, "failed writing " + path);
}

std::string csv_header(const std::string& schema, const std::string& columns) {
  return "# adareg-csv v1 " + schema + "\n" + columns + "\n";
}

std::string trace_csv(const ConvergenceTrace& trace) {
  std::string s = csv_header("trace", "iter,energy,primal_res,dual_res,lambda_mean,lambda_std");
  for (const auto& r : trace.records) {
    s += std::to_string(r.iter) + "," + num(r.energy) + "," + num(r.primal_residual) + "," +
         num(r.dual_residual) + "," + num(r.lambda.mean) + "," + num(r.lambda.std_dev) + "\n";
  }
  return s;
}

std::string metrics_csv(const std::vector<std::pair<std::string, double>>& metrics) {
  std::string s = csv_header("metrics", "metric,value");
  for (const auto& [name, value] : metrics) s += name + "," + num(value) + "\n";
  return s;
}

enum class Task { Denoise, Segment, Flow };

// Weight flags shared by the solver commands.
struct WeightFlags {
  std::string mode = "adaptive";
  std::optional<double> lambda;
  double beta = 1.0;
  std::optional<double> epsilon;
  std::optional<double> kernel_sigma;

  void add(CLI::App& app, double default_beta) {
    beta = default_beta;
    app.add_option("--mode", mode, "static or adaptive")->check(CLI::IsMember({"static", "adaptive"}))
        ->capture_default_str();
    app.add_option("--lambda", lambda, "constant weight in (0, 1); static mode");
    app.add_option("--beta", beta, "residual scale; adaptive mode")->capture_default_str();
    app.add_option("--epsilon", epsilon, "weight floor, smoothed adaptive mode");
    app.add_option("--kernel-sigma", kernel_sigma, "residual smoothing sigma; 0 selects the plain weight");
  }

  AdaptiveWeightConfig adaptive(Task task, double b) const {
    double eps = 0.0;
    double sigma = 0.0;
    if (task == Task::Denoise) {
      const auto d = default_denoise_weight(b);
      eps = d.epsilon;
      sigma = d.kernel->sigma();
    } else if (task == Task::Segment) {
      const auto d = default_segment_weight(b);
      eps = d.epsilon;
      sigma = d.kernel->sigma();
    }
    if (epsilon) eps = *epsilon;
    if (kernel_sigma) sigma = *kernel_sigma;
    if (sigma < 0.0) throw Error(Errc::invalid_argument, "--kernel-sigma must be nonnegative");
    AdaptiveWeightConfig cfg;
    if (sigma == 0.0) {
      cfg.beta = b;
      cfg.epsilon = eps;
      cfg.mode = WeightMode::Plain;
    } else {
      if (!(eps >= 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "--epsilon must lie in [0, 1)");
      cfg = AdaptiveWeightConfig::smoothed(b, eps, sigma);
    }
    cfg.validate();
    return cfg;
  }

  WeightRule rule(Task task) const {
    WeightRule r;
    if (mode == "static") {
      if (!lambda) throw Error(Errc::invalid_argument, "static mode needs --lambda");
      r = StaticWeight{*lambda};
    } else {
      if (lambda) throw Error(Errc::invalid_argument, "--lambda is only valid with --mode static");
      r = adaptive(task, beta);
    }
    validate(r);
    return r;
  }
};

struct SolverFlags {
  SolverConfig cfg;

  void add(CLI::App& app, bool with_iters) {
    app.add_option("--mu", cfg.mu, "augmentation weight")->capture_default_str();
    app.add_option("--tau", cfg.tau, "proximal linearization weight")->capture_default_str();
    if (with_iters) app.add_option("--max-iters", cfg.max_iters, "iteration limit")->capture_default_str();
    app.add_option("--tol", cfg.tol_rel_change, "relative change stop; 0 disables")->capture_default_str();
    app.add_option("--lambda-every", cfg.lambda_update_every, "iterations between weight updates")
        ->capture_default_str();
  }
};

struct PyramidFlags {
  std::optional<int> levels;
  double scale = 0.5;
  int warps = PyramidConfig{}.warps_per_level;
  int inner = PyramidConfig{}.inner_iters;

  void add(CLI::App& app) {
    app.add_option("--levels", levels, "pyramid levels (default from image size)");
    app.add_option("--scale", scale, "pyramid downsampling factor")->capture_default_str();
    app.add_option("--warps", warps, "re-linearizations per level")->capture_default_str();
    app.add_option("--inner-iters", inner, "ADMM cycles per linearization")->capture_default_str();
  }

  PyramidConfig config(int w, int h) const {
    PyramidConfig p = PyramidConfig::defaults_for(w, h);
    if (levels) p.levels = *levels;
    p.scale = scale;
    p.warps_per_level = warps;
    p.inner_iters = inner;
    p.validate(w, h);
    return p;
  }
};

// False when help was requested and printed.
bool parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out) {
  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  }
  return true;
}

VectorField2 scored(const VectorField2& f, int border) { return border > 0 ? crop(f, border) : f; }

std::pair<double, double> flow_scores(const VectorField2& flow, const VectorField2& gt, int border) {
  if (flow.width() != gt.width() || flow.height() != gt.height()) {
    throw Error(Errc::dimension_mismatch, "ground-truth flow size differs from the frames");
  }
  const VectorField2 a = scored(flow, border);
  const VectorField2 b = scored(gt, border);
  return {angular_error(a, b), endpoint_error(a, b)};
}

// --- denoise -----------------------------------------------------------------

int cmd_denoise(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Adaptive or static TV denoising", "adareg denoise"};
  std::string input, output, trace_path, reference, lambda_out, metrics_out;
  WeightFlags weight;
  SolverFlags solver;
  app.add_option("--input", input, "noisy image (.pgm or .png)")->required();
  app.add_option("--output", output, "denoised image (.pgm or .png)")->required();
  weight.add(app, 0.3);
  solver.add(app, true);
  app.add_option("--trace", trace_path, "per-iteration CSV");
  app.add_option("--reference", reference, "clean image; prints psnr and ssim");
  app.add_option("--lambda-out", lambda_out, "final weight map image");
  app.add_option("--metrics-out", metrics_out, "metrics CSV (needs --reference)");
  if (!parse(app, args, out)) return kOk;

  const WeightRule rule = weight.rule(Task::Denoise);
  solver.cfg.validate();
  const ScalarField f = read_image(input);
  std::optional<ScalarField> ref;
  if (!reference.empty()) ref = read_image(reference);

  const DenoiseResult res = denoise(f, rule, solver.cfg);
  write_image(output, res.u);
  if (!trace_path.empty()) write_text(trace_path, trace_csv(res.trace));
  if (!lambda_out.empty()) write_image(lambda_out, res.lambda);
  if (ref) {
    const double p = psnr(res.u, *ref);
    const double s = ssim(res.u, *ref);
    out << "psnr=" << short_num(p) << " ssim=" << short_num(s) << "\n";
    if (!metrics_out.empty()) write_text(metrics_out, metrics_csv({{"psnr", p}, {"ssim", s}}));
  } else if (!metrics_out.empty()) {
    throw Error(Errc::invalid_argument, "--metrics-out needs --reference");
  }
  return kOk;
}

// --- segment -----------------------------------------------------------------

int cmd_segment(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Two-phase convex segmentation", "adareg segment"};
  std::string input, output, indicator_out, truth_path, trace_path, metrics_out;
  WeightFlags weight;
  SolverFlags solver;
  SegmentOptions opts;
  bool fixed_means = false;
  app.add_option("--input", input, "image (.pgm or .png)")->required();
  app.add_option("--output", output, "binary mask image")->required();
  weight.add(app, 0.5);
  solver.add(app, true);
  app.add_option("--theta", opts.theta, "threshold on the relaxed indicator")->capture_default_str();
  app.add_flag("--fixed-means", fixed_means, "keep the initial region means");
  app.add_option("--indicator-out", indicator_out, "relaxed indicator image");
  app.add_option("--truth", truth_path, "ground-truth mask; prints the F-measure");
  app.add_option("--trace", trace_path, "per-iteration CSV");
  app.add_option("--metrics-out", metrics_out, "metrics CSV (needs --truth)");
  if (!parse(app, args, out)) return kOk;

  const WeightRule rule = weight.rule(Task::Segment);
  solver.cfg.validate();
  if (!(opts.theta > 0.0 && opts.theta < 1.0)) throw Error(Errc::invalid_argument, "--theta must lie in (0, 1)");
  opts.update_means = !fixed_means;
  const ScalarField f = read_image(input);
  std::optional<BinaryMask> truth;
  if (!truth_path.empty()) truth = read_mask(truth_path);

  const SegmentResult res = segment(f, rule, solver.cfg, opts);
  write_mask(output, res.mask);
  if (!indicator_out.empty()) write_image(indicator_out, res.u);
  if (!trace_path.empty()) write_text(trace_path, trace_csv(res.trace));
  out << "c1=" << short_num(res.c1) << " c2=" << short_num(res.c2) << "\n";
  for (const auto& w : res.trace.warnings) out << "warning: " << w << "\n";
  if (truth) {
    if (truth->width != f.width() || truth->height != f.height()) {
      throw Error(Errc::dimension_mismatch, "truth mask size differs from the image");
    }
    const double fm = f_measure(res.mask, *truth);
    out << "f=" << short_num(fm) << "\n";
    if (!metrics_out.empty()) write_text(metrics_out, metrics_csv({{"f", fm}}));
  } else if (!metrics_out.empty()) {
    throw Error(Errc::invalid_argument, "--metrics-out needs --truth");
  }
  return kOk;
}

// --- flow --------------------------------------------------------------------

int cmd_flow(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Coarse-to-fine TV-L1 optical flow", "adareg flow"};
  std::string frame0, frame1, output, color, gt_path, trace_path, metrics_out;
  WeightFlags weight;
  SolverFlags solver;
  PyramidFlags pyramid;
  int border = 0;
  app.add_option("--frame0", frame0, "first frame")->required();
  app.add_option("--frame1", frame1, "second frame")->required();
  app.add_option("--output", output, "flow field (.flo)")->required();
  weight.add(app, 1.0);
  solver.add(app, false);
  pyramid.add(app);
  app.add_option("--color", color, "color-coded flow image (.ppm or .png)");
  app.add_option("--gt-flo", gt_path, "ground-truth flow; prints ae and ee");
  app.add_option("--border", border, "pixels excluded on each side when scoring")->capture_default_str();
  app.add_option("--trace", trace_path, "per-cycle CSV over all levels and warps");
  app.add_option("--metrics-out", metrics_out, "metrics CSV (needs --gt-flo)");
  if (!parse(app, args, out)) return kOk;

  const WeightRule rule = weight.rule(Task::Flow);
  solver.cfg.validate();
  if (border < 0) throw Error(Errc::invalid_argument, "--border must be nonnegative");
  const ScalarField i0 = read_image(frame0);
  const ScalarField i1 = read_image(frame1);
  require_same_shape(i0, i1, "flow frames");
  std::optional<VectorField2> gt;
  if (!gt_path.empty()) gt = read_flo(gt_path);

  const FlowResult res = flow_pyramid(i0, i1, rule, solver.cfg, pyramid.config(i0.width(), i0.height()));
  write_flo(output, res.flow);
  if (!color.empty()) write_rgb_image(color, flow_to_color(res.flow));
  if (!trace_path.empty()) write_text(trace_path, trace_csv(res.trace));
  if (gt) {
    const auto [ae, ee] = flow_scores(res.flow, *gt, border);
    out << "ae=" << short_num(ae) << " ee=" << short_num(ee) << "\n";
    if (!metrics_out.empty()) write_text(metrics_out, metrics_csv({{"ae", ae}, {"ee", ee}}));
  } else if (!metrics_out.empty()) {
    throw Error(Errc::invalid_argument, "--metrics-out needs --gt-flo");
  }
  return kOk;
}

// --- sweep -------------------------------------------------------------------

struct SweepRow {
  std::string param_name;
  double param_value = 0.0;
  std::string metric;
  double value = 0.0;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

struct SweepJob {
  std::string param_name;
  double param_value = 0.0;
  WeightRule rule;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions are rethrown
// in index order so failures do not depend on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int cmd_sweep(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Static-versus-adaptive parameter sweep", "adareg sweep"};
  app.set_config("--config", "", "flat key=value file with any of these options");
  app.allow_config_extras(CLI::config_extras_mode::error);
  std::string task_name, output_dir, input, reference, truth_path, frame0, frame1, gt_path;
  std::vector<double> statics, betas;
  std::vector<std::string> metrics;
  int jobs = 1;
  int border = 0;
  bool record_timing = false;
  WeightFlags weight;
  SolverFlags solver;
  PyramidFlags pyramid;
  app.add_option("--task", task_name, "denoise, segment or flow")
      ->required()
      ->check(CLI::IsMember({"denoise", "segment", "flow"}));
  app.add_option("--static-lambda", statics, "comma-separated constant weights")->delimiter(',');
  app.add_option("--adaptive-beta", betas, "comma-separated residual scales")->delimiter(',');
  app.add_option("--metrics", metrics, "psnr,ssim (denoise), f (segment), ae,ee (flow)")->delimiter(',');
  app.add_option("--output-dir", output_dir, "directory receiving sweep.csv")->required();
  app.add_option("--jobs", jobs, "concurrent solves")->capture_default_str();
  app.add_flag("--record-timing", record_timing, "add a wall_time_s column (not reproducible)");
  app.add_option("--input", input, "noisy image (denoise, segment)");
  app.add_option("--reference", reference, "clean image (denoise)");
  app.add_option("--truth", truth_path, "ground-truth mask (segment)");
  app.add_option("--frame0", frame0, "first frame (flow)");
  app.add_option("--frame1", frame1, "second frame (flow)");
  app.add_option("--gt-flo", gt_path, "ground-truth flow (flow)");
  app.add_option("--border", border, "pixels excluded on each side when scoring flow")->capture_default_str();
  app.add_option("--epsilon", weight.epsilon, "weight floor for the adaptive runs");
  app.add_option("--kernel-sigma", weight.kernel_sigma, "residual smoothing for the adaptive runs; 0 = plain");
  solver.add(app, true);
  pyramid.add(app);
  if (!parse(app, args, out)) return kOk;

  const Task task = task_name == "denoise" ? Task::Denoise : task_name == "segment" ? Task::Segment : Task::Flow;
  const std::map<Task, std::vector<std::string>> allowed{
      {Task::Denoise, {"psnr", "ssim"}}, {Task::Segment, {"f"}}, {Task::Flow, {"ae", "ee"}}};
  if (metrics.empty()) metrics = allowed.at(task);
  for (const auto& m : metrics) {
    const auto& ok = allowed.at(task);
    if (std::find(ok.begin(), ok.end(), m) == ok.end()) {
      throw Error(Errc::invalid_argument, "metric '" + m + "' does not apply to task " + task_name);
    }
  }
  if (statics.empty() && betas.empty()) {
    throw Error(Errc::invalid_argument, "sweep needs --static-lambda and/or --adaptive-beta values");
  }
  if (jobs < 1) throw Error(Errc::invalid_argument, "--jobs must be at least 1");
  if (border < 0) throw Error(Errc::invalid_argument, "--border must be nonnegative");
  solver.cfg.validate();

  std::vector<SweepJob> runs;
  for (double l : statics) {
    if (!(l > 0.0 && l < 1.0)) throw Error(Errc::invalid_argument, "static lambda " + num(l) + " outside (0, 1)");
    runs.push_back({"static_lambda", l, StaticWeight{l}});
  }
  for (double b : betas) {
    if (!(b > 0.0)) throw Error(Errc::invalid_argument, "beta " + num(b) + " must be positive");
    runs.push_back({"adaptive_beta", b, weight.adaptive(task, b)});
  }

  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw Error(Errc::invalid_argument, std::string("sweep task needs ") + flag);
  };
  std::optional<ScalarField> f, ref, i0, i1;
  std::optional<BinaryMask> truth;
  std::optional<VectorField2> gt;
  std::optional<PyramidConfig> pcfg;
  if (task == Task::Flow) {
    need(frame0, "--frame0");
    need(frame1, "--frame1");
    need(gt_path, "--gt-flo");
    i0 = read_image(frame0);
    i1 = read_image(frame1);
    require_same_shape(*i0, *i1, "flow frames");
    gt = read_flo(gt_path);
    pcfg = pyramid.config(i0->width(), i0->height());
  } else {
    need(input, "--input");
    f = read_image(input);
    if (task == Task::Denoise) {
      need(reference, "--reference");
      ref = read_image(reference);
      require_same_shape(*f, *ref, "reference image");
    } else {
      need(truth_path, "--truth");
      truth = read_mask(truth_path);
      if (truth->width != f->width() || truth->height != f->height()) {
        throw Error(Errc::dimension_mismatch, "truth mask size differs from the image");
      }
    }
  }

  std::vector<std::vector<SweepRow>> results(runs.size());
  parallel_for(runs.size(), jobs, [&](std::size_t k) {
    const SweepJob& job = runs[k];
    const auto t0 = std::chrono::steady_clock::now();
    std::map<std::string, double> values;
    std::size_t iterations = 0;
    if (task == Task::Denoise) {
      const DenoiseResult r = denoise(*f, job.rule, solver.cfg);
      iterations = r.trace.records.size();
      for (const auto& m : metrics) values[m] = m == "psnr" ? psnr(r.u, *ref) : ssim(r.u, *ref);
    } else if (task == Task::Segment) {
      const SegmentResult r = segment(*f, job.rule, solver.cfg);
      iterations = r.trace.records.size();
      values["f"] = f_measure(r.mask, *truth);
    } else {
      const FlowResult r = flow_pyramid(*i0, *i1, job.rule, solver.cfg, *pcfg);
      iterations = r.trace.records.size();
      const auto [ae, ee] = flow_scores(r.flow, *gt, border);
      values["ae"] = ae;
      values["ee"] = ee;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& m : metrics) results[k].push_back({job.param_name, job.param_value, m, values[m], iterations, secs});
  });

  std::string columns = "task,param_name,param_value,metric,value,iterations";
  if (record_timing) columns += ",wall_time_s";
  std::string csv = csv_header("sweep", columns);
  std::size_t rows = 0;
  for (const auto& group : results) {
    for (const auto& r : group) {
      csv += task_name + "," + r.param_name + "," + num(r.param_value) + "," + r.metric + "," + num(r.value) + "," +
             std::to_string(r.iterations);
      if (record_timing) csv += "," + num(r.seconds);
      csv += "\n";
      ++rows;
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw Error(Errc::io, "cannot create " + output_dir + ": " + ec.message());
  const std::string path = (std::filesystem::path(output_dir) / "sweep.csv").string();
  write_text(path, csv);
  out << "wrote " << rows << " rows to " << path << "\n";
  return kOk;
}

// --- synth -------------------------------------------------------------------

int cmd_synth(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Synthetic inputs with ground truth", "adareg synth"};
  std::string kind, output_dir, profile = "halfplane", shape = "disk", scene = "pattern", format = "pgm";
  int width = 128, height = 128;
  std::uint64_t seed = 1;
  double sigma_max = 0.0, lo = 0.25, hi = 0.75, tx = 2.0, ty = 1.0, fg_tx = -1.5, fg_ty = 1.0, texture_sigma = 1.5;
  app.add_option("--kind", kind, "biased-noise, phantom, translation or two-motion")
      ->required()
      ->check(CLI::IsMember({"biased-noise", "phantom", "translation", "two-motion"}));
  app.add_option("--output-dir", output_dir, "directory receiving the files")->required();
  app.add_option("--width", width)->capture_default_str();
  app.add_option("--height", height)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--sigma-max", sigma_max, "noise level at the far end of the profile")->capture_default_str();
  app.add_option("--profile", profile, "halfplane, radial or uniform")
      ->check(CLI::IsMember({"halfplane", "radial", "uniform"}))
      ->capture_default_str();
  app.add_option("--scene", scene, "biased-noise base image: pattern or phantom")
      ->check(CLI::IsMember({"pattern", "phantom"}))
      ->capture_default_str();
  app.add_option("--shape", shape, "phantom shape: disk or blob")
      ->check(CLI::IsMember({"disk", "blob"}))
      ->capture_default_str();
  app.add_option("--lo", lo, "phantom background level")->capture_default_str();
  app.add_option("--hi", hi, "phantom foreground level")->capture_default_str();
  app.add_option("--tx", tx, "translation x (background motion for two-motion)")->capture_default_str();
  app.add_option("--ty", ty, "translation y")->capture_default_str();
  app.add_option("--fg-tx", fg_tx, "foreground motion x (two-motion)")->capture_default_str();
  app.add_option("--fg-ty", fg_ty, "foreground motion y (two-motion)")->capture_default_str();
  app.add_option("--texture-sigma", texture_sigma, "smoothing of the random texture")->capture_default_str();
  app.add_option("--format", format, "image format: pgm or png")
      ->check(CLI::IsMember({"pgm", "png"}))
      ->capture_default_str();
  if (!parse(app, args, out)) return kOk;

  if (width < 1 || height < 1) throw Error(Errc::invalid_argument, "image size must be positive");
  const BiasProfile bias = profile == "halfplane" ? BiasProfile::HalfPlaneRamp
                           : profile == "radial"  ? BiasProfile::RadialRamp
                                                  : BiasProfile::Uniform;
  const PhantomShape phantom_shape = shape == "disk" ? PhantomShape::Disk : PhantomShape::Blob;

  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw Error(Errc::io, "cannot create " + output_dir + ": " + ec.message());
  const std::filesystem::path dir(output_dir);
  auto img = [&](const char* stem) { return (dir / (std::string(stem) + "." + format)).string(); };
  std::vector<std::string> written;
  auto put_image = [&](const char* stem, const ScalarField& f) {
    write_image(img(stem), f);
    written.push_back(img(stem));
  };
  auto put_mask = [&](const char* stem, const BinaryMask& m) {
    write_mask(img(stem), m);
    written.push_back(img(stem));
  };
  auto put_flow = [&](const VectorField2& w) {
    const std::string p = (dir / "truth.flo").string();
    write_flo(p, w);
    written.push_back(p);
  };

  const BiasedNoiseSpec noise{sigma_max, bias, seed};
  if (kind == "biased-noise" || kind == "phantom") {
    SyntheticScene s;
    if (kind == "biased-noise" && scene == "pattern") {
      s.clean = make_test_pattern(width, height);
    } else {
      s = make_two_level_phantom(width, height, lo, hi, phantom_shape);
    }
    put_image("clean", s.clean);
    put_image("noisy", add_biased_noise(s.clean, noise));
    if (s.truth_mask) put_mask("mask", *s.truth_mask);
  } else if (kind == "translation") {
    const SyntheticScene s = make_translation_pair(make_random_texture(width, height, seed, texture_sigma), {tx, ty});
    put_image("frame0", add_biased_noise(s.clean, noise));
    put_image("frame1", add_biased_noise(s.noisy, {sigma_max, bias, seed + 1}));
    put_flow(*s.truth_flow);
  } else {
    const SyntheticScene s =
        make_two_motion_pair(make_random_texture(width, height, seed, texture_sigma),
                             make_random_texture(width, height, seed + 1, texture_sigma), {tx, ty}, {fg_tx, fg_ty});
    put_image("frame0", add_biased_noise(s.clean, noise));
    put_image("frame1", add_biased_noise(s.noisy, {sigma_max, bias, seed + 1}));
    put_flow(*s.truth_flow);
    put_mask("mask", *s.truth_mask);
  }
  for (const auto& p : written) out << "wrote " << p << "\n";
  return kOk;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::dimension_mismatch:
    case Errc::invalid_interval:
    case Errc::invalid_residual:
    case Errc::invalid_weight:
    case Errc::unsupported_mode:
      return kUsage;
    case Errc::io:
    case Errc::parse:
    case Errc::bad_magic:
    case Errc::unsupported_format:
      return kIo;
    case Errc::divergence:
    case Errc::degenerate_region:
    case Errc::image_too_small:
      return kSolver;
  }
  return kSolver;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsageText;
    return kUsage;
  }
  const std::string& command = args.front();
  if (command == "--help" || command == "-h" || command == "help") {
    out << kUsageText;
    return kOk;
  }
  const std::map<std::string, int (*)(const std::vector<std::string>&, std::ostream&)> commands{
      {"denoise", cmd_denoise}, {"segment", cmd_segment}, {"flow", cmd_flow},
      {"sweep", cmd_sweep},     {"synth", cmd_synth},
  };
  const auto it = commands.find(command);
  if (it == commands.end()) {
    err << "adareg: unknown command '" << command << "'\n\n" << kUsageText;
    return kUsage;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    return it->second(rest, out);
  } catch (const CLI::FileError& e) {
    err << "adareg " << command << ": " << e.what() << "\n";
    return kIo;
  } catch (const CLI::ParseError& e) {
    err << "adareg " << command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "adareg " << command << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "adareg " << command << ": " << e.what() << "\n";
    return kIo;
  }
}

}  // namespace adareg::cli
