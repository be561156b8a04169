#pragma once

// Dense 2-D fields and the primitives every solver is assembled from:
// forward-difference gradient and its negative adjoint, separable Gaussian
// smoothing, and the proximal maps used in the splitting updates.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adareg {

/// W x H grid of reals, row-major (index = y * width + x).
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int width, int height, double fill = 0.0);
  ScalarField(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  double operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const ScalarField& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Grid of 2-vectors stored as two component planes.
struct VectorField2 {
  VectorField2() = default;
  VectorField2(int width, int height, double fill = 0.0) : x(width, height, fill), y(width, height, fill) {}
  VectorField2(ScalarField xs, ScalarField ys);

  int width() const noexcept { return x.width(); }
  int height() const noexcept { return x.height(); }
  std::size_t size() const noexcept { return x.size(); }
  bool same_shape(const ScalarField& f) const noexcept { return x.same_shape(f); }
  bool same_shape(const VectorField2& v) const noexcept { return x.same_shape(v.x); }

  friend bool operator==(const VectorField2&, const VectorField2&) = default;

  ScalarField x;
  ScalarField y;
};

/// Binary W x H mask; entries are 0 or 1.
struct BinaryMask {
  BinaryMask() = default;
  BinaryMask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::uint8_t operator()(int x, int y) const noexcept {
    return bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  std::uint8_t& operator()(int x, int y) noexcept {
    return bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  std::size_t count() const noexcept;
  BinaryMask complement() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Truncated, renormalized 1-D Gaussian used separably in x and y.
class GaussianKernel {
 public:
  /// radius = ceil(3 * sigma), at least 1.
  explicit GaussianKernel(double sigma);
  GaussianKernel(double sigma, int radius);

  double sigma() const noexcept { return sigma_; }
  int radius() const noexcept { return radius_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Center weight of the separable 2-D kernel, i.e. its largest entry.
  double max_weight_2d() const noexcept { return max_weight_2d_; }

 private:
  double sigma_;
  int radius_;
  std::vector<double> weights_;
  double max_weight_2d_;
};

// Forward differences; the last column (x) and last row (y) are zero.
VectorField2 gradient(const ScalarField& u);
// Negative adjoint of gradient: <gradient(u), p> == -<u, divergence(p)>.
ScalarField divergence(const VectorField2& p);

// Separable convolution with replicate padding at the borders.
ScalarField convolve_gaussian(const ScalarField& u, const GaussianKernel& g);

double soft_shrink(double x, double threshold) noexcept;
Vec2 shrink_vector2(Vec2 v, double threshold) noexcept;

/// Per-pixel clamp to [lo, hi]; throws Errc::invalid_interval when lo > hi.
ScalarField project_box(const ScalarField& u, double lo, double hi);

// Reductions run in index order so results are reproducible.
double dot(const ScalarField& a, const ScalarField& b);
double dot(const VectorField2& a, const VectorField2& b);
double norm2(const ScalarField& a);
double norm2(const VectorField2& a);
double sum(const ScalarField& a);
double min_value(const ScalarField& a);
double max_value(const ScalarField& a);
bool all_finite(const ScalarField& a) noexcept;
bool all_finite(const VectorField2& a) noexcept;

ScalarField transpose(const ScalarField& u);
VectorField2 transpose(const VectorField2& v);  // swaps the component roles as well

/// Drops `margin` pixels from every side.
ScalarField crop(const ScalarField& u, int margin);
VectorField2 crop(const VectorField2& v, int margin);

/// Throws Errc::dimension_mismatch naming `what` unless shapes agree.
void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what);

}  // namespace adareg
