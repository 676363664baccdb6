#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polylap {

/// A point on the unit-period torus [0,1)^d.  Coordinates are reduced
/// mod 1 on construction.
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<double> coords);
  TorusPoint(std::initializer_list<double> coords) : TorusPoint(std::vector<double>(coords)) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const { return coords_; }
  double operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }

 private:
  std::vector<double> coords_;
};

/// Reduces a real to [0, 1).
double wrap_unit(double v);

/// Euclidean length of the coordinatewise minimal displacement on the torus.
/// Throws ValidationError on dimension mismatch.
double torus_distance(std::span<const double> x, std::span<const double> y);
double torus_distance(const TorusPoint& x, const TorusPoint& y);

/// Squared torus distance without the dimension check (hot loops).
inline double torus_distance_sq_unchecked(const double* x, const double* y, int d) {
  double acc = 0.0;
  for (int l = 0; l < d; ++l) {
    double delta = x[l] > y[l] ? x[l] - y[l] : y[l] - x[l];
    if (delta > 0.5) delta = 1.0 - delta;
    acc += delta * delta;
  }
  return acc;
}

enum class DensityKind { Uniform, CosineBump };

/// Sampling density on the torus: rho = 1 or rho(x) = 1 + a cos(2 pi k.x).
struct DensitySpec {
  DensityKind kind = DensityKind::Uniform;
  double amplitude = 0.0;
  std::vector<int> mode;

  static DensitySpec uniform() { return {}; }
  static DensitySpec cosine_bump(double amplitude, std::vector<int> mode);

  /// Throws ValidationError unless a in [0,1) and k is a nonzero vector of
  /// dimension d (CosineBump only).
  void validate(int d) const;
  double rho_min() const;
  double rho_max() const;
  std::string describe() const;
};

double eval_density(const DensitySpec& spec, std::span<const double> x);

enum class KernelKind { Indicator, Plateau };

/// Radial kernel profile eta: [0, inf) -> [0, inf), supported on [0, 1).
struct KernelProfile {
  KernelKind kind = KernelKind::Indicator;

  static KernelProfile indicator() { return {KernelKind::Indicator}; }
  static KernelProfile plateau() { return {KernelKind::Plateau}; }
  /// Parses "indicator" or "plateau"; throws ValidationError otherwise.
  static KernelProfile parse(std::string_view name);

  double operator()(double t) const {
    if (t >= 1.0) return 0.0;
    if (kind == KernelKind::Indicator) return 1.0;
    return t <= 0.5 ? 1.0 : 2.0 * (1.0 - t);
  }
  /// Interior points in (0,1) where eta is not smooth.
  std::vector<double> breakpoints() const;
  std::string_view name() const;
};

/// Row-major n x d coordinates in [0,1) plus provenance.
struct PointCloud {
  int dim = 1;
  std::vector<double> coords;
  DensitySpec density;
  std::uint64_t seed = 0;

  std::size_t size() const { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  static PointCloud from_coords(int dim, std::vector<double> coords);
};

/// n iid draws from the density by rejection against uniform proposals.
/// Deterministic in (spec, n, d, seed).
PointCloud sample_cloud(const DensitySpec& spec, std::size_t n, int d, std::uint64_t seed);

/// Sorts a one-dimensional cloud in place (node order is arbitrary for iid
/// samples; sorted order enables the windowed line operator).
void sort_line_cloud(PointCloud& cloud);

/// sigma_eta = \int_{R^d} eta(|h|) h_1^2 dh.
///
/// Splits into the closed-form angular factor |S^{d-1}|/d and a radial
/// integral \int_0^1 eta(r) r^{d+1} dr evaluated by adaptive Gauss-Kronrod
/// between kernel breakpoints.
double sigma_eta(const KernelProfile& kernel, int d);

/// Lebesgue measure of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace polylap
