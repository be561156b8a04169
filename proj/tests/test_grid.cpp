#include <cmath>
#include <random>

#include "adareg/error.hpp"
#include "adareg/grid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adareg;

TEST_SUITE("grid") {

TEST_CASE("field construction validates dimensions") {
  CHECK_THROWS_AS(ScalarField(0, 3), Error);
  CHECK_THROWS_AS(ScalarField(2, 2, std::vector<double>(3)), Error);
  ScalarField f(3, 2, 1.5);
  CHECK(f.size() == 6);
  CHECK(f(2, 1) == 1.5);
}

TEST_CASE("gradient of a constant is zero") {
  const VectorField2 g = gradient(ScalarField(7, 5, 0.3));
  CHECK(norm2(g) == 0.0);
}

TEST_CASE("gradient of a 1xN ramp") {
  ScalarField u(6, 1);
  for (int i = 0; i < 6; ++i) u(i, 0) = i;
  const VectorField2 g = gradient(u);
  for (int i = 0; i < 5; ++i) CHECK(g.x(i, 0) == 1.0);
  CHECK(g.x(5, 0) == 0.0);
  CHECK(norm2(g.y) == 0.0);
}

TEST_CASE("gradient matches a naive double loop") {
  std::mt19937_64 rng(3);
  const ScalarField u = oracle::random_field(8, 8, rng);
  CHECK(gradient(u) == oracle::naive_gradient(u));
}

TEST_CASE("divergence of zero is zero") { CHECK(norm2(divergence(VectorField2(5, 4))) == 0.0); }

TEST_CASE("divergence of an x impulse") {
  VectorField2 p(5, 5);
  p.x(2, 2) = 1.0;
  const ScalarField d = divergence(p);
  CHECK(d(2, 2) == 1.0);
  CHECK(d(3, 2) == -1.0);
  CHECK(std::abs(sum(d)) == 0.0);
  double others = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) others += std::abs(d[i]);
  CHECK(others == 2.0);
}

TEST_CASE("gradient and divergence are negative adjoints") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> side(1, 64);
  for (int t = 0; t < 100; ++t) {
    const int w = side(rng), h = side(rng);
    const ScalarField u = oracle::random_field(w, h, rng, -1.0, 1.0);
    const VectorField2 p = oracle::random_vector_field(w, h, rng);
    const double lhs = dot(gradient(u), p);
    const double rhs = dot(u, divergence(p));
    CHECK(std::abs(lhs + rhs) <= 1e-10 * (norm2(u) * norm2(p) + 1.0));
  }
}

TEST_CASE("gaussian kernel invariants") {
  for (double sigma : {0.1, 0.5, 1.0, 2.0, 3.7}) {
    const GaussianKernel g(sigma);
    CHECK(g.radius() == std::max(1, static_cast<int>(std::ceil(3.0 * sigma))));
    double s = 0.0;
    const auto w = g.weights();
    REQUIRE(w.size() == static_cast<std::size_t>(2 * g.radius() + 1));
    for (std::size_t i = 0; i < w.size(); ++i) {
      s += w[i];
      CHECK(w[i] == w[w.size() - 1 - i]);
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
    const double c = w[static_cast<std::size_t>(g.radius())];
    CHECK(g.max_weight_2d() == doctest::Approx(c * c).epsilon(1e-15));
    CHECK(g.max_weight_2d() > 0.0);
  }
  CHECK_THROWS_AS(GaussianKernel(0.0), Error);
  CHECK_THROWS_AS(GaussianKernel(1.0, 0), Error);
}

TEST_CASE("convolution keeps constants") {
  const ScalarField c(9, 7, 0.42);
  const ScalarField out = convolve_gaussian(c, GaussianKernel(1.3));
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i] - 0.42) <= 1e-12);
}

TEST_CASE("narrow kernel is close to identity") {
  std::mt19937_64 rng(5);
  const ScalarField u = oracle::random_field(10, 10, rng);
  const GaussianKernel g(0.1, 1);
  const ScalarField out = convolve_gaussian(u, g);
  const double tail = g.weights()[0];
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(out[i] - u[i]) <= 4.0 * tail + 1e-15);
}

TEST_CASE("impulse response is the outer product of the weights") {
  const GaussianKernel g(1.2);
  const int r = g.radius();
  const int n = 4 * r + 3;
  ScalarField u(n, n);
  const int c = n / 2;
  u(c, c) = 1.0;
  const ScalarField out = convolve_gaussian(u, g);
  const auto w = g.weights();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int dx = i - c, dy = j - c;
      const double expect = (std::abs(dx) <= r && std::abs(dy) <= r)
                                ? w[static_cast<std::size_t>(dx + r)] * w[static_cast<std::size_t>(dy + r)]
                                : 0.0;
      CHECK(std::abs(out(i, j) - expect) <= 1e-9);
    }
  }
}

TEST_CASE("convolution obeys the max principle") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const ScalarField u = oracle::random_field(13, 9, rng, -2.0, 3.0);
    const ScalarField out = convolve_gaussian(u, GaussianKernel(0.8 + 0.3 * t));
    CHECK(min_value(out) >= min_value(u) - 1e-12);
    CHECK(max_value(out) <= max_value(u) + 1e-12);
  }
}

TEST_CASE("soft shrink cases") {
  CHECK(soft_shrink(0.5, 0.2) == doctest::Approx(0.3));
  CHECK(soft_shrink(0.1, 0.2) == 0.0);
  CHECK(soft_shrink(-0.5, 0.2) == doctest::Approx(-0.3));
  CHECK(soft_shrink(-0.2, 0.2) == 0.0);
}

TEST_CASE("soft shrink is monotone and 1-Lipschitz") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int t = 0; t < 1000; ++t) {
    const double a = d(rng), b = d(rng), mu = std::abs(d(rng));
    const double sa = soft_shrink(a, mu), sb = soft_shrink(b, mu);
    CHECK(std::abs(sa - sb) <= std::abs(a - b) + 1e-15);
    if (a <= b) CHECK(sa <= sb);
  }
}

TEST_CASE("soft shrink matches a grid-search prox") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dx(-2.0, 2.0), dm(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double x = dx(rng), mu = dm(rng);
    CHECK(std::abs(soft_shrink(x, mu) - oracle::prox_abs_grid(x, mu, 1e-5)) <= 1e-4);
  }
}

TEST_CASE("vector shrink cases") {
  CHECK(shrink_vector2({3, 4}, 5) == Vec2{0, 0});
  CHECK(shrink_vector2({3, 4}, 0) == Vec2{3, 4});
  const Vec2 h = shrink_vector2({3, 4}, 2.5);
  CHECK(h.x == doctest::Approx(1.5));
  CHECK(h.y == doctest::Approx(2.0));
}

TEST_CASE("vector shrink never grows the norm and matches a grid prox") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-2.0, 2.0), dm(0.0, 1.5);
  for (int t = 0; t < 100; ++t) {
    const Vec2 v{d(rng), d(rng)};
    const double mu = dm(rng);
    const Vec2 s = shrink_vector2(v, mu);
    CHECK(std::hypot(s.x, s.y) <= std::hypot(v.x, v.y) + 1e-15);
    const auto [gx, gy] = oracle::prox_norm2_grid(v.x, v.y, mu, 1e-5);
    CHECK(std::abs(s.x - gx) <= 1e-4);
    CHECK(std::abs(s.y - gy) <= 1e-4);
  }
}

TEST_CASE("box projection") {
  ScalarField u(3, 1, std::vector<double>{-0.5, 0.4, 1.7});
  const ScalarField p = project_box(u, 0.0, 1.0);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.4);
  CHECK(p[2] == 1.0);
  CHECK(project_box(p, 0.0, 1.0) == p);
  std::mt19937_64 rng(9);
  const ScalarField inside = oracle::random_field(6, 6, rng);
  CHECK(project_box(inside, 0.0, 1.0) == inside);
  CHECK_THROWS_AS(project_box(u, 1.0, 0.0), Error);
  try {
    (void)project_box(u, 1.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_interval);
  }
}

TEST_CASE("transpose swaps axes and gradient components") {
  std::mt19937_64 rng(12);
  const ScalarField u = oracle::random_field(5, 3, rng);
  const ScalarField t = transpose(u);
  CHECK(t.width() == 3);
  CHECK(t.height() == 5);
  CHECK(t(2, 4) == u(4, 2));
  CHECK(transpose(gradient(u)) == gradient(t));
}

TEST_CASE("crop") {
  ScalarField u(6, 5);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 6; ++i) u(i, j) = 10 * j + i;
  const ScalarField c = crop(u, 1);
  CHECK(c.width() == 4);
  CHECK(c.height() == 3);
  CHECK(c(0, 0) == 11);
  CHECK_THROWS_AS(crop(u, 3), Error);
}

}  // TEST_SUITE
