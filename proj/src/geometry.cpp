#include "polylap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "polylap/error.hpp"
#include "polylap/rng.hpp"

namespace polylap {

double wrap_unit(double v) {
  double r = v - std::floor(v);
  // floor can leave r == 1 for tiny negative v.
  if (r >= 1.0) r = 0.0;
  return r;
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (auto& c : coords_) c = wrap_unit(c);
}

double torus_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("torus_distance: dimension mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  return std::sqrt(torus_distance_sq_unchecked(x.data(), y.data(), static_cast<int>(x.size())));
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  return torus_distance(x.coords(), y.coords());
}

DensitySpec DensitySpec::cosine_bump(double amplitude, std::vector<int> mode) {
  DensitySpec s;
  s.kind = DensityKind::CosineBump;
  s.amplitude = amplitude;
  s.mode = std::move(mode);
  return s;
}

void DensitySpec::validate(int d) const {
  if (kind == DensityKind::Uniform) return;
  if (!(amplitude >= 0.0 && amplitude < 1.0)) {
    throw ValidationError("density: amplitude must lie in [0, 1)");
  }
  if (static_cast<int>(mode.size()) != d) {
    throw ValidationError("density: mode vector has dimension " + std::to_string(mode.size()) +
                          ", expected " + std::to_string(d));
  }
  if (std::all_of(mode.begin(), mode.end(), [](int k) { return k == 0; })) {
    throw ValidationError("density: mode vector must be nonzero (rho must integrate to 1)");
  }
}

double DensitySpec::rho_min() const {
  return kind == DensityKind::Uniform ? 1.0 : 1.0 - amplitude;
}

double DensitySpec::rho_max() const {
  return kind == DensityKind::Uniform ? 1.0 : 1.0 + amplitude;
}

std::string DensitySpec::describe() const {
  if (kind == DensityKind::Uniform) return "uniform";
  std::ostringstream os;
  os << "cosine(a=" << amplitude << ",k=";
  for (std::size_t i = 0; i < mode.size(); ++i) os << (i ? "," : "") << mode[i];
  os << ")";
  return os.str();
}

double eval_density(const DensitySpec& spec, std::span<const double> x) {
  if (spec.kind == DensityKind::Uniform) return 1.0;
  double phase = 0.0;
  for (std::size_t l = 0; l < x.size() && l < spec.mode.size(); ++l) phase += spec.mode[l] * x[l];
  return 1.0 + spec.amplitude * std::cos(2.0 * std::numbers::pi * phase);
}

KernelProfile KernelProfile::parse(std::string_view name) {
  if (name == "indicator") return indicator();
  if (name == "plateau") return plateau();
  throw ValidationError("unknown kernel '" + std::string(name) + "' (expected indicator|plateau)");
}

std::vector<double> KernelProfile::breakpoints() const {
  if (kind == KernelKind::Plateau) return {0.5};
  return {};
}

std::string_view KernelProfile::name() const {
  return kind == KernelKind::Indicator ? "indicator" : "plateau";
}

PointCloud PointCloud::from_coords(int dim, std::vector<double> coords) {
  if (dim < 1) throw ValidationError("point cloud: dimension must be >= 1");
  if (coords.size() % static_cast<std::size_t>(dim) != 0) {
    throw ValidationError("point cloud: coordinate count not divisible by dimension");
  }
  PointCloud c;
  c.dim = dim;
  c.coords = std::move(coords);
  for (auto& v : c.coords) v = wrap_unit(v);
  return c;
}

PointCloud sample_cloud(const DensitySpec& spec, std::size_t n, int d, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_cloud: n must be >= 1");
  if (d < 1) throw ValidationError("sample_cloud: d must be >= 1");
  spec.validate(d);

  PointCloud cloud;
  cloud.dim = d;
  cloud.density = spec;
  cloud.seed = seed;
  cloud.coords.resize(n * static_cast<std::size_t>(d));

  CounterRng rng(seed, stream::kCloud);
  const auto ud = static_cast<std::size_t>(d);
  if (spec.kind == DensityKind::Uniform) {
    for (auto& c : cloud.coords) c = rng.uniform();
    return cloud;
  }

  const double rho_max = spec.rho_max();
  // Mean acceptance probability is 1/rho_max.
  const double cap = 1000.0 * static_cast<double>(n) * rho_max;
  std::vector<double> proposal(ud);
  double proposals = 0.0;
  for (std::size_t i = 0; i < n;) {
    if (++proposals > cap) {
      throw ValidationError("sample_cloud: rejection cap exceeded; density spec is malformed");
    }
    for (auto& c : proposal) c = rng.uniform();
    if (rng.uniform() * rho_max < eval_density(spec, proposal)) {
      std::copy(proposal.begin(), proposal.end(), cloud.coords.begin() + i * ud);
      ++i;
    }
  }
  return cloud;
}

void sort_line_cloud(PointCloud& cloud) {
  if (cloud.dim != 1) throw ValidationError("sort_line_cloud: cloud must be one-dimensional");
  std::sort(cloud.coords.begin(), cloud.coords.end());
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double sigma_eta(const KernelProfile& kernel, int d) {
  if (d < 1) throw ValidationError("sigma_eta: d must be >= 1");
  // \int_{S^{d-1}} theta_1^2 dtheta = |S^{d-1}| / d = (d * |B_1|) / d.
  const double angular = unit_ball_volume(d);

  std::vector<double> knots{0.0};
  for (double b : kernel.breakpoints()) knots.push_back(b);
  knots.push_back(1.0);

  auto radial = [&](double r) { return kernel(r) * std::pow(r, d + 1); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    // The integrand at r == 1 is excluded by eta's support; integrate on the
    // open panel so the endpoint value does not matter.
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        radial, knots[i], knots[i + 1], 15, 1e-14);
  }
  return angular * total;
}

}  // namespace polylap
