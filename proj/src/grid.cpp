#include "adareg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adareg/error.hpp"

namespace adareg {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(Errc::invalid_argument,
                "field dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

ScalarField::ScalarField(int width, int height, double fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ScalarField::ScalarField(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::dimension_mismatch, "data length " + std::to_string(data_.size()) + " does not match " +
                                              std::to_string(width) + "x" + std::to_string(height));
  }
}

VectorField2::VectorField2(ScalarField xs, ScalarField ys) : x(std::move(xs)), y(std::move(ys)) {
  require_same_shape(x, y, "vector field components");
}

std::size_t BinaryMask::count() const noexcept {
  std::size_t n = 0;
  for (auto b : bits) n += b != 0;
  return n;
}

BinaryMask BinaryMask::complement() const {
  BinaryMask out = *this;
  for (auto& b : out.bits) b = b != 0 ? 0 : 1;
  return out;
}

GaussianKernel::GaussianKernel(double sigma)
    : GaussianKernel(sigma, std::max(1, static_cast<int>(std::ceil(3.0 * sigma)))) {}

GaussianKernel::GaussianKernel(double sigma, int radius) : sigma_(sigma), radius_(radius) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(Errc::invalid_argument, "gaussian sigma must be positive");
  }
  if (radius < 1) {
    throw Error(Errc::invalid_argument, "gaussian radius must be at least 1");
  }
  weights_.resize(static_cast<std::size_t>(2 * radius + 1));
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int k = -radius; k <= radius; ++k) {
    weights_[static_cast<std::size_t>(k + radius)] = std::exp(-static_cast<double>(k * k) * inv);
  }
  // Sum symmetric pairs outward from the tails so both halves see identical rounding.
  double total = weights_[static_cast<std::size_t>(radius)];
  for (int k = radius; k >= 1; --k) {
    total += 2.0 * weights_[static_cast<std::size_t>(radius + k)];
  }
  for (double& w : weights_) w /= total;
  const double center = weights_[static_cast<std::size_t>(radius)];
  max_weight_2d_ = center * center;
}

VectorField2 gradient(const ScalarField& u) {
  const int w = u.width();
  const int h = u.height();
  VectorField2 g(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double c = u(i, j);
      g.x(i, j) = i + 1 < w ? u(i + 1, j) - c : 0.0;
      g.y(i, j) = j + 1 < h ? u(i, j + 1) - c : 0.0;
    }
  }
  return g;
}

ScalarField divergence(const VectorField2& p) {
  const int w = p.width();
  const int h = p.height();
  ScalarField d(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double dx = (i + 1 < w ? p.x(i, j) : 0.0) - (i > 0 ? p.x(i - 1, j) : 0.0);
      const double dy = (j + 1 < h ? p.y(i, j) : 0.0) - (j > 0 ? p.y(i, j - 1) : 0.0);
      d(i, j) = dx + dy;
    }
  }
  return d;
}

ScalarField convolve_gaussian(const ScalarField& u, const GaussianKernel& g) {
  const int w = u.width();
  const int h = u.height();
  const int r = g.radius();
  const auto weights = g.weights();
  ScalarField tmp(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += weights[static_cast<std::size_t>(k + r)] * u(std::clamp(i + k, 0, w - 1), j);
      }
      tmp(i, j) = acc;
    }
  }
  ScalarField out(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += weights[static_cast<std::size_t>(k + r)] * tmp(i, std::clamp(j + k, 0, h - 1));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

double soft_shrink(double x, double threshold) noexcept {
  if (x > threshold) return x - threshold;
  if (x < -threshold) return x + threshold;
  return 0.0;
}

Vec2 shrink_vector2(Vec2 v, double threshold) noexcept {
  const double n = std::hypot(v.x, v.y);
  if (n <= threshold) return {0.0, 0.0};
  const double s = 1.0 - threshold / n;
  return {v.x * s, v.y * s};
}

ScalarField project_box(const ScalarField& u, double lo, double hi) {
  if (lo > hi) {
    throw Error(Errc::invalid_interval, "lower bound " + std::to_string(lo) + " exceeds upper bound " +
                                            std::to_string(hi));
  }
  ScalarField out = u;
  for (double& v : out.data()) v = std::clamp(v, lo, hi);
  return out;
}

double dot(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double dot(const VectorField2& a, const VectorField2& b) { return dot(a.x, b.x) + dot(a.y, b.y); }

double norm2(const ScalarField& a) { return std::sqrt(dot(a, a)); }

double norm2(const VectorField2& a) { return std::sqrt(dot(a, a)); }

double sum(const ScalarField& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v;
  return acc;
}

double min_value(const ScalarField& a) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : a.data()) m = std::min(m, v);
  return m;
}

double max_value(const ScalarField& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : a.data()) m = std::max(m, v);
  return m;
}

bool all_finite(const ScalarField& a) noexcept {
  return std::all_of(a.data().begin(), a.data().end(), [](double v) { return std::isfinite(v); });
}

bool all_finite(const VectorField2& a) noexcept { return all_finite(a.x) && all_finite(a.y); }

ScalarField transpose(const ScalarField& u) {
  ScalarField t(u.height(), u.width());
  for (int j = 0; j < u.height(); ++j) {
    for (int i = 0; i < u.width(); ++i) t(j, i) = u(i, j);
  }
  return t;
}

VectorField2 transpose(const VectorField2& v) { return VectorField2(transpose(v.y), transpose(v.x)); }

ScalarField crop(const ScalarField& u, int margin) {
  if (margin < 0 || 2 * margin >= u.width() || 2 * margin >= u.height()) {
    throw Error(Errc::invalid_argument, "crop margin " + std::to_string(margin) + " too large");
  }
  ScalarField out(u.width() - 2 * margin, u.height() - 2 * margin);
  for (int j = 0; j < out.height(); ++j) {
    for (int i = 0; i < out.width(); ++i) out(i, j) = u(i + margin, j + margin);
  }
  return out;
}

VectorField2 crop(const VectorField2& v, int margin) { return VectorField2(crop(v.x, margin), crop(v.y, margin)); }

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(Errc::dimension_mismatch, std::string(what) + ": " + std::to_string(a.width()) + "x" +
                                              std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                                              "x" + std::to_string(b.height()));
  }
}

}  // namespace adareg
