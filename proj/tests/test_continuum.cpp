#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "polylap/continuum.hpp"
#include "polylap/error.hpp"
#include "polylap/experiments.hpp"

using namespace polylap;
using std::numbers::pi;

namespace {

FourierFunction cos1() { return FourierFunction(1).add({1}, 1.0, 0.0); }

FourierFunction default_g() { return FourierFunction(1).add({1}, 1.0, 0.0).add({2}, 0.0, 0.5); }

}  // namespace

TEST_CASE("FourierFunction canonical form and evaluation") {
  auto f = FourierFunction::parse(1, "-1:1:2 1:0.5:0 0:3:0");
  REQUIRE(f.modes().size() == 2);
  const std::vector<double> x{0.13};
  const double want = std::cos(-2 * pi * 0.13) + 2 * std::sin(-2 * pi * 0.13) + 0.5 * std::cos(2 * pi * 0.13) + 3;
  CHECK(f(x) == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(FourierFunction(1).add({0}, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(FourierFunction(2).add({1}, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(FourierFunction::parse(1, "1:a:0"), ValidationError);
  CHECK(FourierFunction::parse(2, "1,-2:1:0").bandwidth() == 2);
  CHECK(FourierFunction::constant(1, -2.0).l2_norm_uniform() == doctest::Approx(2.0));
  CHECK(cos1().l2_norm_uniform() == doctest::Approx(1 / std::sqrt(2.0)));
  const auto round = FourierFunction::parse(1, default_g().to_string());
  CHECK((round - default_g()).l2_norm_uniform() == 0.0);
}

TEST_CASE("uniform continuum operator") {
  const double sigma = 2.0 / 3;
  CHECK(continuum_laplacian_uniform(FourierFunction::constant(1, 1.0), sigma, 1).l2_norm_uniform() == 0.0);
  const auto lg = continuum_laplacian_uniform(cos1(), sigma, 1);
  REQUIRE(lg.modes().size() == 1);
  CHECK(lg.modes()[0].a == doctest::Approx(26.318945069571623).epsilon(1e-14));
  CHECK(continuum_eigenvalue(sigma, 1.0) == doctest::Approx(26.318945069571623).epsilon(1e-14));
  const auto u = continuum_solve_uniform(cos1(), 0.01, 1, sigma);
  CHECK(u.modes()[0].a == doctest::Approx(0.7916468899017787).epsilon(1e-14));
  CHECK((continuum_solve_uniform(default_g(), 0.0, 2, sigma) - default_g()).l2_norm_uniform() == 0.0);
  CHECK(bias_bound(cos1(), 0.01, 1, sigma) == doctest::Approx(0.18610304532370345).epsilon(1e-14));
  CHECK(exact_bias(cos1(), 0.01, 1, sigma) == doctest::Approx(0.1473278970317596).epsilon(1e-14));
  CHECK(bias_bound(cos1(), 0.0, 1, sigma) == 0.0);
}

TEST_CASE("resolvent round trip and bias inequalities") {
  const double sigma = 2.0 / 3;
  const auto g2 = FourierFunction::parse(2, "1,0:1:0 1,1:0:-0.4 0,3:0.2:0.1 0,0:2:0");
  for (const auto& g : {default_g(), g2}) {
    const double sig = g.dim() == 1 ? sigma : pi / 4;
    for (int s : {1, 2, 3}) {
      for (double tau : {1e-3, 1e-2, 1e-1, 1.0}) {
        const auto u = continuum_solve_uniform(g, tau, s, sig);
        const auto back = u.map_modes([&](double k2) { return 1 + tau * std::pow(continuum_eigenvalue(sig, k2), s); });
        CHECK((back - g).l2_norm_uniform() <= 1e-14 * g.l2_norm_uniform());
        const double b = exact_bias(g, tau, s, sig);
        CHECK(b == doctest::Approx((u - g).l2_norm_uniform()).epsilon(1e-12));
        CHECK(b < bias_bound(g, tau, s, sig));
        const double lhs = continuum_laplacian_uniform(g - u, sig, s / 2.0).l2_norm_uniform();
        const double rhs = std::sqrt(tau / 2) * continuum_laplacian_uniform(g, sig, s).l2_norm_uniform();
        CHECK(lhs <= rhs);
      }
    }
  }
}

TEST_CASE("nonlocal Laplacian closed form and constants") {
  auto vcos = [](std::span<const double> x) { return std::cos(2 * pi * x[0]); };
  const std::vector<double> x0{0.0};
  for (double eps : {0.5, 0.3, 0.2, 0.1, 0.05, 0.01}) {
    const double want = nonlocal_laplacian_cosine_1d(eps);
    CHECK(want == doctest::Approx(4 / (eps * eps) * (1 - std::sin(2 * pi * eps) / (2 * pi * eps))));
    const double got = nonlocal_laplacian(vcos, DensitySpec::uniform(), eps, KernelProfile::indicator(), x0, 64);
    CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
  }
  auto one = [](std::span<const double>) { return 1.0; };
  const std::vector<double> x2{0.3, 0.8};
  CHECK(nonlocal_laplacian(one, DensitySpec::cosine_bump(0.5, {1, 1}), 0.2, KernelProfile::plateau(), x2, 16) == 0.0);
  CHECK_THROWS_AS(nonlocal_laplacian(vcos, DensitySpec::uniform(), 0.6, KernelProfile::indicator(), x0, 64), ValidationError);
  CHECK_THROWS_AS(nonlocal_laplacian(vcos, DensitySpec::uniform(), 0.1, KernelProfile::indicator(), x0, 4), ValidationError);
}

TEST_CASE("nonlocal Laplacian is second-order consistent") {
  // Uniform density: compare with sigma 4 pi^2 |k|^2 g at a point.
  const auto g = FourierFunction::parse(2, "1,0:1:0 1,2:0:0.5");
  auto v = [&](std::span<const double> x) { return g(x); };
  const std::vector<double> x{0.1, 0.35};
  for (auto kernel : {KernelProfile::indicator(), KernelProfile::plateau()}) {
    const double target = continuum_laplacian_uniform(g, sigma_eta(kernel, 2), 1)(x);
    std::vector<double> le, lerr;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      const double val = nonlocal_laplacian(v, DensitySpec::uniform(), eps, kernel, x, 48);
      le.push_back(std::log(eps));
      lerr.push_back(std::log(std::abs(val - target)));
    }
    const auto fit = fit_line(le, lerr);
    CHECK(fit.slope >= 1.7);
    CHECK(fit.slope <= 2.3);
  }
}

TEST_CASE("nonlocal Laplacian with non-uniform density approaches the weighted operator") {
  // Delta_rho phi = -(sigma/rho)(rho^2 phi')' for rho = 1 + 0.5 cos 2 pi x,
  // phi = sin 2 pi x:  4 pi^2 sigma sin(2 pi x)(1 + 1.5 cos 2 pi x).
  const double sigma = 2.0 / 3;
  const double xv = 0.2;
  const double target = 4 * pi * pi * sigma * std::sin(2 * pi * xv) * (1 + 1.5 * std::cos(2 * pi * xv));
  auto v = [](std::span<const double> x) { return std::sin(2 * pi * x[0]); };
  const auto rho = DensitySpec::cosine_bump(0.5, {1});
  std::vector<double> le, lerr;
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    const double val = nonlocal_laplacian(v, rho, eps, KernelProfile::indicator(), std::vector<double>{xv}, 64);
    le.push_back(std::log(eps));
    lerr.push_back(std::log(std::abs(val - target)));
  }
  const auto fit = fit_line(le, lerr);
  CHECK(fit.slope >= 1.7);
  CHECK(fit.slope <= 2.3);
}

TEST_CASE("pseudo-spectral operator") {
  const double sigma = 2.0 / 3;
  const auto ones1 = GridField::sample(1, 32, [](std::span<const double>) { return 1.0; });
  const auto phi = GridField::sample(1, 32, [](std::span<const double> x) { return std::cos(2 * pi * x[0]); });
  const auto out = pseudo_spectral_continuum_laplacian(phi, ones1, sigma);
  const auto ref = continuum_laplacian_uniform(cos1(), sigma, 1);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out.values[i] - ref(out.point(i))) <= 1e-10);

  const auto flat = pseudo_spectral_continuum_laplacian(ones1, ones1, sigma);
  for (double vv : flat.values) CHECK(std::abs(vv) <= 1e-12);

  const auto rho = GridField::sample(1, 32, [](std::span<const double> x) { return 1 + 0.5 * std::cos(2 * pi * x[0]); });
  const auto sphi = GridField::sample(1, 32, [](std::span<const double> x) { return std::sin(2 * pi * x[0]); });
  const auto w = pseudo_spectral_continuum_laplacian(sphi, rho, sigma);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = w.point(i)[0];
    const double want = 4 * pi * pi * sigma * std::sin(2 * pi * x) * (1 + 1.5 * std::cos(2 * pi * x));
    CHECK(std::abs(w.values[i] - want) <= 1e-9);
  }
}

TEST_CASE("pseudo-spectral operator in two dimensions") {
  const double sigma = pi / 4;
  const auto g = FourierFunction::parse(2, "1,0:1:0 2,-1:0.3:0.7 0,3:0:1");
  const auto phi = GridField::sample(2, 24, [&](std::span<const double> x) { return g(x); });
  const auto ones = GridField::sample(2, 24, [](std::span<const double>) { return 1.0; });
  const auto out = pseudo_spectral_continuum_laplacian(phi, ones, sigma);
  const auto ref = continuum_laplacian_uniform(g, sigma, 1);
  double scale = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) scale = std::max(scale, std::abs(ref(out.point(i))));
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out.values[i] - ref(out.point(i))) <= 1e-12 * scale);
}

TEST_CASE("pseudo-spectral validation") {
  const auto phi = GridField::sample(1, 16, [](std::span<const double>) { return 1.0; });
  auto bad = phi;
  bad.values[3] = 0.0;
  CHECK_THROWS_AS(pseudo_spectral_continuum_laplacian(phi, bad, 1.0), ValidationError);
  const auto other = GridField::sample(1, 8, [](std::span<const double>) { return 1.0; });
  CHECK_THROWS_AS(pseudo_spectral_continuum_laplacian(phi, other, 1.0), ValidationError);
  GridField odd{1, 5, std::vector<double>(5, 1.0)};
  CHECK_THROWS_AS(odd.validate(), ValidationError);
}

TEST_CASE("l2_mu_norm") {
  CHECK(l2_mu_norm(cos1(), DensitySpec::uniform()) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(l2_mu_norm(FourierFunction::constant(1, -3.0), DensitySpec::cosine_bump(0.4, {2})) ==
        doctest::Approx(3.0).epsilon(1e-14));
  CHECK(l2_mu_norm(cos1(), DensitySpec::cosine_bump(0.5, {1})) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  // int cos^2(2 pi x)(1 + 0.5 cos 4 pi x) dx = 1/2 + 1/8.
  CHECK(l2_mu_norm(cos1(), DensitySpec::cosine_bump(0.5, {2})) == doctest::Approx(std::sqrt(0.625)).epsilon(1e-14));
  const std::vector<double> vals{3.0, -4.0};
  CHECK(l2_mu_norm(vals) == doctest::Approx(std::sqrt(12.5)));
}
