#include "adareg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adareg/error.hpp"

namespace adareg {

namespace {

constexpr int kMinLevelSide = 8;

int scaled_size(int n, double scale) { return std::max(1, static_cast<int>(std::lround(n * scale))); }

double sample_bilinear(const ScalarField& img, double px, double py) {
  const int w = img.width();
  const int h = img.height();
  px = std::clamp(px, 0.0, static_cast<double>(w - 1));
  py = std::clamp(py, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(px));
  const int y0 = static_cast<int>(std::floor(py));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ax = px - x0;
  const double ay = py - y0;
  const double top = (1.0 - ax) * img(x0, y0) + ax * img(x1, y0);
  const double bottom = (1.0 - ax) * img(x0, y1) + ax * img(x1, y1);
  return (1.0 - ay) * top + ay * bottom;
}

// Bilinear resize on pixel centers.
ScalarField resize_bilinear(const ScalarField& img, int width, int height) {
  ScalarField out(width, height);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      out(i, j) = sample_bilinear(img, (i + 0.5) * sx - 0.5, (j + 0.5) * sy - 0.5);
    }
  }
  return out;
}

bool known(double u, double v) { return std::abs(u) <= kUnknownFlow && std::abs(v) <= kUnknownFlow; }

void require_flow_shape(const VectorField2& a, const VectorField2& b, const char* what) {
  require_same_shape(a.x, b.x, what);
}

}  // namespace

PyramidConfig PyramidConfig::defaults_for(int width, int height) {
  PyramidConfig p;
  const int side = std::min(width, height);
  p.levels = side >= 16 ? static_cast<int>(std::floor(std::log2(side / 16.0))) + 1 : 1;
  return p;
}

void PyramidConfig::validate(int width, int height) const {
  if (levels < 1) throw Error(Errc::invalid_argument, "pyramid needs at least one level");
  if (!(scale > 0.0 && scale < 1.0)) throw Error(Errc::invalid_argument, "pyramid scale must lie in (0, 1)");
  if (warps_per_level < 1) throw Error(Errc::invalid_argument, "warps_per_level must be at least 1");
  if (inner_iters < 1) throw Error(Errc::invalid_argument, "inner_iters must be at least 1");
  int w = width;
  int h = height;
  for (int l = 1; l < levels; ++l) {
    w = scaled_size(w, scale);
    h = scaled_size(h, scale);
  }
  if (w < kMinLevelSide || h < kMinLevelSide) {
    throw Error(Errc::image_too_small, "coarsest pyramid level is " + std::to_string(w) + "x" + std::to_string(h) +
                                           ", needs at least " + std::to_string(kMinLevelSide) + " px a side");
  }
}

ScalarField warp_bilinear(const ScalarField& img, const VectorField2& flow) {
  require_same_shape(img, flow.x, "warp");
  ScalarField out(img.width(), img.height());
  for (int j = 0; j < img.height(); ++j) {
    for (int i = 0; i < img.width(); ++i) {
      out(i, j) = sample_bilinear(img, i + flow.x(i, j), j + flow.y(i, j));
    }
  }
  return out;
}

VectorField2 central_gradient(const ScalarField& img) {
  const int w = img.width();
  const int h = img.height();
  VectorField2 g(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (w > 1) {
        if (i == 0) {
          g.x(i, j) = img(1, j) - img(0, j);
        } else if (i == w - 1) {
          g.x(i, j) = img(i, j) - img(i - 1, j);
        } else {
          g.x(i, j) = 0.5 * (img(i + 1, j) - img(i - 1, j));
        }
      }
      if (h > 1) {
        if (j == 0) {
          g.y(i, j) = img(i, 1) - img(i, 0);
        } else if (j == h - 1) {
          g.y(i, j) = img(i, j) - img(i, j - 1);
        } else {
          g.y(i, j) = 0.5 * (img(i, j + 1) - img(i, j - 1));
        }
      }
    }
  }
  return g;
}

LinearizedData linearize(const ScalarField& I0, const ScalarField& I1, const VectorField2& v0) {
  require_same_shape(I0, I1, "linearize frames");
  require_same_shape(I0, v0.x, "linearize flow");
  LinearizedData d;
  const ScalarField warped = warp_bilinear(I1, v0);
  d.It = ScalarField(I0.width(), I0.height());
  for (std::size_t i = 0; i < I0.size(); ++i) d.It[i] = warped[i] - I0[i];
  VectorField2 g = central_gradient(warped);
  d.Ix = std::move(g.x);
  d.Iy = std::move(g.y);
  d.v0 = v0;
  return d;
}

ScalarField linearized_residual(const LinearizedData& data, const ScalarField& u, const ScalarField& v) {
  require_same_shape(data.It, u, "linearized residual");
  require_same_shape(data.It, v, "linearized residual");
  ScalarField rho(u.width(), u.height());
  for (std::size_t i = 0; i < u.size(); ++i) {
    rho[i] = data.It[i] + data.Ix[i] * (u[i] - data.v0.x[i]) + data.Iy[i] * (v[i] - data.v0.y[i]);
  }
  return rho;
}

double flow_energy(const LinearizedData& data, const ScalarField& u, const ScalarField& v,
                   const ScalarField& lambda) {
  const ScalarField rho = linearized_residual(data, u, v);
  const VectorField2 gu = gradient(u);
  const VectorField2 gv = gradient(v);
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e += lambda[i] * std::abs(rho[i]) +
         (1.0 - lambda[i]) * (std::hypot(gu.x[i], gu.y[i]) + std::hypot(gv.x[i], gv.y[i]));
  }
  return e;
}

namespace {

ScalarField abs_field(ScalarField f) {
  for (double& v : f.data()) v = std::abs(v);
  return f;
}

}  // namespace

FlowState initial_flow_state(const LinearizedData& data, const WeightRule& rule) {
  validate(rule);
  const int w = data.It.width();
  const int h = data.It.height();
  FlowState st;
  st.u = data.v0.x;
  st.v = data.v0.y;
  st.y = gradient(st.u);
  st.z = gradient(st.v);
  st.s = data.It;
  st.p = VectorField2(w, h);
  st.q = VectorField2(w, h);
  st.r = ScalarField(w, h);
  st.lambda = weight_from_residual(rule, abs_field(data.It), nullptr);
  return st;
}

FlowState relinearized_state(const LinearizedData& data, const WeightRule& rule, FlowState prev) {
  validate(rule);
  require_same_shape(data.It, prev.u, "relinearized state");
  prev.u = data.v0.x;
  prev.v = data.v0.y;
  prev.s = data.It;
  prev.r = ScalarField(data.It.width(), data.It.height());
  prev.lambda = weight_from_residual(rule, abs_field(data.It), nullptr);
  return prev;
}

FlowState flow_level(const LinearizedData& data, const WeightRule& rule, const SolverConfig& cfg, FlowState st,
                     ConvergenceTrace* trace) {
  cfg.validate();
  validate(rule);
  require_same_shape(data.It, st.u, "flow level state");
  const int w = st.u.width();
  const int h = st.u.height();
  const double mu = cfg.mu;
  const double tau = cfg.tau;
  const std::size_t n = st.u.size();

  ScalarField u_next(w, h);
  ScalarField v_next(w, h);
  std::optional<double> bound;
  for (int k = 0; k < cfg.max_iters; ++k) {
    // (a) joint pixelwise 2x2 solve for (u, v).
    VectorField2 cu = gradient(st.u);
    VectorField2 cv = gradient(st.v);
    for (std::size_t i = 0; i < n; ++i) {
      cu.x[i] += st.p.x[i] - st.y.x[i];
      cu.y[i] += st.p.y[i] - st.y.y[i];
      cv.x[i] += st.q.x[i] - st.z.x[i];
      cv.y[i] += st.q.y[i] - st.z.y[i];
    }
    const ScalarField div_u = divergence(cu);
    const ScalarField div_v = divergence(cv);
    for (std::size_t i = 0; i < n; ++i) {
      const double ix = data.Ix[i];
      const double iy = data.Iy[i];
      const double b = data.It[i] - ix * data.v0.x[i] - iy * data.v0.y[i] - st.s[i] + st.r[i];
      const double a11 = mu * ix * ix + tau;
      const double a12 = mu * ix * iy;
      const double a22 = mu * iy * iy + tau;
      const double r1 = tau * st.u[i] + mu * div_u[i] - mu * ix * b;
      const double r2 = tau * st.v[i] + mu * div_v[i] - mu * iy * b;
      const double det = a11 * a22 - a12 * a12;
      u_next[i] = (a22 * r1 - a12 * r2) / det;
      v_next[i] = (a11 * r2 - a12 * r1) / det;
    }

    // (b), (c), (d): isotropic shrinkage of the gradient splits, scalar
    // shrinkage of the data split, multiplier ascent.
    const VectorField2 gu = gradient(u_next);
    const VectorField2 gv = gradient(v_next);
    const ScalarField rho = linearized_residual(data, u_next, v_next);
    double primal_sq = 0.0;
    double dual_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t_reg = (1.0 - st.lambda[i]) / mu;
      const double t_data = st.lambda[i] / mu;
      const Vec2 yn = shrink_vector2({gu.x[i] + st.p.x[i], gu.y[i] + st.p.y[i]}, t_reg);
      const Vec2 zn = shrink_vector2({gv.x[i] + st.q.x[i], gv.y[i] + st.q.y[i]}, t_reg);
      const double sn = soft_shrink(rho[i] + st.r[i], t_data);

      dual_sq += (yn.x - st.y.x[i]) * (yn.x - st.y.x[i]) + (yn.y - st.y.y[i]) * (yn.y - st.y.y[i]) +
                 (zn.x - st.z.x[i]) * (zn.x - st.z.x[i]) + (zn.y - st.z.y[i]) * (zn.y - st.z.y[i]) +
                 (sn - st.s[i]) * (sn - st.s[i]);
      const double e1 = gu.x[i] - yn.x, e2 = gu.y[i] - yn.y;
      const double e3 = gv.x[i] - zn.x, e4 = gv.y[i] - zn.y;
      const double e5 = rho[i] - sn;
      primal_sq += e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4 + e5 * e5;

      st.p.x[i] += e1;
      st.p.y[i] += e2;
      st.q.x[i] += e3;
      st.q.y[i] += e4;
      st.r[i] += e5;
      st.y.x[i] = yn.x;
      st.y.y[i] = yn.y;
      st.z.x[i] = zn.x;
      st.z.y[i] = zn.y;
      st.s[i] = sn;
    }

    const double energy = trace ? flow_energy(data, u_next, v_next, st.lambda) : 0.0;

    double diff_sq = 0.0;
    double ref_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diff_sq += (u_next[i] - st.u[i]) * (u_next[i] - st.u[i]) + (v_next[i] - st.v[i]) * (v_next[i] - st.v[i]);
      ref_sq += st.u[i] * st.u[i] + st.v[i] * st.v[i];
    }
    std::swap(st.u, u_next);
    std::swap(st.v, v_next);

    if (!all_finite(st.u) || !all_finite(st.v) || !all_finite(st.r) || !all_finite(st.p) || !all_finite(st.q)) {
      throw Error(Errc::divergence, "non-finite flow iterate at cycle " + std::to_string(k + 1));
    }

    // (e) weight from the current linearized misfit.
    if (is_adaptive(rule) && (k + 1) % cfg.lambda_update_every == 0) {
      st.lambda = weight_from_residual(rule, abs_field(rho), &bound);
    }

    if (trace) {
      IterationRecord rec;
      rec.iter = static_cast<int>(trace->records.size()) + 1;
      rec.energy = energy;
      rec.primal_residual = std::sqrt(primal_sq);
      rec.dual_residual = mu * std::sqrt(dual_sq);
      rec.lambda = weight_stats(st.lambda);
      rec.lambda_bound = bound;
      trace->records.push_back(rec);
    }

    // The first cycle after (re)linearization starts from s = rho(w), where
    // the flow step is the identity; only later cycles may stop early.
    if (k > 0 && cfg.tol_rel_change > 0.0) {
      const double rel = ref_sq > 0.0 ? std::sqrt(diff_sq / ref_sq) : std::sqrt(diff_sq);
      if (rel < cfg.tol_rel_change) break;
    }
  }
  return st;
}

ScalarField downsample(const ScalarField& img, double scale) {
  if (!(scale > 0.0 && scale < 1.0)) throw Error(Errc::invalid_argument, "downsample scale must lie in (0, 1)");
  const double sigma = 0.6 * std::sqrt(1.0 / (scale * scale) - 1.0);
  const ScalarField blurred = convolve_gaussian(img, GaussianKernel(sigma));
  return resize_bilinear(blurred, scaled_size(img.width(), scale), scaled_size(img.height(), scale));
}

VectorField2 upsample_flow(const VectorField2& flow, int width, int height) {
  VectorField2 out(resize_bilinear(flow.x, width, height), resize_bilinear(flow.y, width, height));
  const double fx = static_cast<double>(width) / flow.width();
  const double fy = static_cast<double>(height) / flow.height();
  for (double& v : out.x.data()) v *= fx;
  for (double& v : out.y.data()) v *= fy;
  return out;
}

FlowResult flow_pyramid(const ScalarField& I0, const ScalarField& I1, const WeightRule& rule,
                        const SolverConfig& cfg, const PyramidConfig& pcfg) {
  cfg.validate();
  validate(rule);
  require_same_shape(I0, I1, "flow frames");
  pcfg.validate(I0.width(), I0.height());
  if (!all_finite(I0) || !all_finite(I1)) throw Error(Errc::invalid_argument, "frames must be finite");

  std::vector<ScalarField> p0{I0};
  std::vector<ScalarField> p1{I1};
  for (int l = 1; l < pcfg.levels; ++l) {
    p0.push_back(downsample(p0.back(), pcfg.scale));
    p1.push_back(downsample(p1.back(), pcfg.scale));
  }

  SolverConfig level_cfg = cfg;
  level_cfg.max_iters = pcfg.inner_iters;

  FlowResult out;
  VectorField2 w;
  for (int l = pcfg.levels - 1; l >= 0; --l) {
    const ScalarField& a = p0[static_cast<std::size_t>(l)];
    const ScalarField& b = p1[static_cast<std::size_t>(l)];
    w = w.size() == 0 ? VectorField2(a.width(), a.height()) : upsample_flow(w, a.width(), a.height());

    FlowState st;
    for (int k = 0; k < pcfg.warps_per_level; ++k) {
      const LinearizedData data = linearize(a, b, w);
      st = k == 0 ? initial_flow_state(data, rule) : relinearized_state(data, rule, std::move(st));
      st = flow_level(data, rule, level_cfg, std::move(st), &out.trace);
      w = VectorField2(st.u, st.v);
    }
    if (l == 0) out.lambda = st.lambda;
  }
  out.flow = std::move(w);
  return out;
}

double endpoint_error(const VectorField2& w, const VectorField2& gt) {
  require_flow_shape(w, gt, "endpoint error");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!known(gt.x[i], gt.y[i])) continue;
    acc += std::hypot(w.x[i] - gt.x[i], w.y[i] - gt.y[i]);
    ++count;
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

double angular_error(const VectorField2& w, const VectorField2& gt) {
  require_flow_shape(w, gt, "angular error");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!known(gt.x[i], gt.y[i])) continue;
    const double u = w.x[i], v = w.y[i];
    const double ug = gt.x[i], vg = gt.y[i];
    ++count;
    if (u == ug && v == vg) continue;
    const double c = (u * ug + v * vg + 1.0) / (std::sqrt(u * u + v * v + 1.0) * std::sqrt(ug * ug + vg * vg + 1.0));
    acc += std::acos(std::clamp(c, -1.0, 1.0));
  }
  return count ? acc / static_cast<double>(count) * 180.0 / std::numbers::pi : 0.0;
}

}  // namespace adareg
