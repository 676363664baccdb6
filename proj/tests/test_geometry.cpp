#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "polylap/error.hpp"
#include "polylap/geometry.hpp"
#include "polylap/rng.hpp"

using namespace polylap;
using std::numbers::pi;

TEST_CASE("torus_distance examples") {
  CHECK(torus_distance(TorusPoint{0.1}, TorusPoint{0.9}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(torus_distance(TorusPoint{0.37, 0.2}, TorusPoint{0.37, 0.2}) == 0.0);
  CHECK(torus_distance(TorusPoint{0.0, 0.0}, TorusPoint{0.5, 0.5}) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK_THROWS_AS(torus_distance(TorusPoint{0.1}, TorusPoint{0.1, 0.2}), ValidationError);
}

TEST_CASE("TorusPoint reduces mod 1") {
  const TorusPoint p{1.25, -0.25, 3.0};
  CHECK(p[0] == doctest::Approx(0.25));
  CHECK(p[1] == doctest::Approx(0.75));
  CHECK(p[2] == 0.0);
  CHECK(wrap_unit(-1e-18) < 1.0);
  CHECK(wrap_unit(-1e-18) >= 0.0);
}

TEST_CASE("torus_distance is a metric on random triples") {
  CounterRng rng(11, 0);
  for (int d = 1; d <= 3; ++d) {
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> x(d), y(d), z(d);
      for (int l = 0; l < d; ++l) {
        x[l] = rng.uniform();
        y[l] = rng.uniform();
        z[l] = rng.uniform();
      }
      const double xy = torus_distance(x, y), yx = torus_distance(y, x);
      const double xz = torus_distance(x, z), zy = torus_distance(z, y);
      REQUIRE(xy >= 0.0);
      REQUIRE(xy == yx);
      REQUIRE(torus_distance(x, x) == 0.0);
      REQUIRE(xy <= xz + zy + 1e-15);
      REQUIRE(xy <= std::sqrt(double(d)) / 2 + 1e-15);
    }
  }
}

TEST_CASE("kernel profile invariants on a grid") {
  for (auto k : {KernelProfile::indicator(), KernelProfile::plateau()}) {
    double prev = k(0.0);
    for (int i = 0; i <= 1200; ++i) {
      const double t = i * 0.001;
      const double v = k(t);
      if (t <= 0.5) REQUIRE(v > 0.5);
      if (t >= 1.0) REQUIRE(v == 0.0);
      REQUIRE(v <= prev);
      prev = v;
    }
  }
  CHECK(KernelProfile::parse("plateau").kind == KernelKind::Plateau);
  CHECK_THROWS_AS(KernelProfile::parse("tent"), ValidationError);
}

TEST_CASE("density evaluation and validation") {
  const auto u = DensitySpec::uniform();
  const std::vector<double> x{0.3};
  CHECK(eval_density(u, x) == 1.0);
  const auto c = DensitySpec::cosine_bump(0.5, {1});
  CHECK(eval_density(c, std::vector<double>{0.0}) == doctest::Approx(1.5));
  CHECK(eval_density(c, std::vector<double>{0.5}) == doctest::Approx(0.5));
  CHECK(c.rho_min() == doctest::Approx(0.5));
  CHECK(c.rho_max() == doctest::Approx(1.5));
  CHECK_THROWS_AS(DensitySpec::cosine_bump(1.0, {1}).validate(1), ValidationError);
  CHECK_THROWS_AS(DensitySpec::cosine_bump(0.5, {0}).validate(1), ValidationError);
  CHECK_THROWS_AS(DensitySpec::cosine_bump(0.5, {1}).validate(2), ValidationError);
}

TEST_CASE("density integrates to one") {
  // Midpoint rule is exact for trigonometric polynomials of low degree.
  const auto c = DensitySpec::cosine_bump(0.7, {2, 1});
  const int m = 64;
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) acc += eval_density(c, std::vector<double>{(i + 0.5) / m, (j + 0.5) / m});
  CHECK(acc / (m * m) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("sample_cloud determinism and range") {
  const auto a = sample_cloud(DensitySpec::uniform(), 4, 1, 7);
  const auto b = sample_cloud(DensitySpec::uniform(), 4, 1, 7);
  CHECK(a.size() == 4);
  CHECK(a.coords == b.coords);
  for (double v : a.coords) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  const auto one = sample_cloud(DensitySpec::uniform(), 1, 3, 1);
  CHECK(one.size() == 1);
  for (double v : one.coords) CHECK((v >= 0.0 && v < 1.0));
  CHECK(sample_cloud(DensitySpec::uniform(), 4, 1, 8).coords != a.coords);
}

TEST_CASE("cosine bump sampling matches bin masses and KS bound") {
  const double a = 0.5;
  const std::size_t n = 100000;
  const auto cloud = sample_cloud(DensitySpec::cosine_bump(a, {1}), n, 1, 2024);
  auto cdf = [a](double x) { return x + a / (2 * pi) * std::sin(2 * pi * x); };
  std::vector<int> counts(10, 0);
  for (double v : cloud.coords) counts[std::min(9, static_cast<int>(v * 10))]++;
  for (int b = 0; b < 10; ++b) {
    const double p = cdf((b + 1) / 10.0) - cdf(b / 10.0);
    const double se = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(counts[b] - n * p) < 3 * se);
  }
  std::vector<double> xs = cloud.coords;
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(xs[i]);
    ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
  }
  CHECK(ks < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("sigma_eta analytic values") {
  CHECK(sigma_eta(KernelProfile::indicator(), 1) == doctest::Approx(2.0 / 3).epsilon(1e-9));
  CHECK(sigma_eta(KernelProfile::indicator(), 2) == doctest::Approx(pi / 4).epsilon(1e-9));
  CHECK(sigma_eta(KernelProfile::indicator(), 3) == doctest::Approx(4 * pi / 15).epsilon(1e-9));
  // Plateau, d = 1: 2 (int_0^1/2 r^2 + int_1/2^1 2(1-r) r^2) = 5/16.
  CHECK(sigma_eta(KernelProfile::plateau(), 1) == doctest::Approx(5.0 / 16).epsilon(1e-9));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * pi / 3));
}

TEST_CASE("sort_line_cloud orders coordinates") {
  auto cloud = sample_cloud(DensitySpec::uniform(), 500, 1, 3);
  sort_line_cloud(cloud);
  CHECK(std::is_sorted(cloud.coords.begin(), cloud.coords.end()));
  CHECK_THROWS_AS(PointCloud::from_coords(2, {0.1, 0.2, 0.3}), ValidationError);
}
