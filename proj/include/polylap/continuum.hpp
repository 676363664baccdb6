#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "polylap/geometry.hpp"

namespace polylap {

/// One term a cos(2 pi k.x) + b sin(2 pi k.x).
struct FourierMode {
  std::vector<int> k;
  double a = 0.0;
  double b = 0.0;
};

/// Finite trigonometric polynomial on the unit torus.
///
/// Modes are kept in canonical form: k and -k are merged (the first nonzero
/// entry of k is positive) and the k = 0 term carries only a cosine
/// coefficient, so Parseval applies term by term.  Mode k is an eigenfunction
/// of -Laplacian with eigenvalue 4 pi^2 |k|^2.
class FourierFunction {
 public:
  explicit FourierFunction(int dim = 1) : dim_(dim) {}

  static FourierFunction constant(int dim, double c);
  /// Parses whitespace-separated triples "k1,..,kd:a:b".
  static FourierFunction parse(int dim, const std::string& text);

  /// Adds a term; throws ValidationError on dimension mismatch or a sine
  /// coefficient on the zero mode.
  FourierFunction& add(std::vector<int> k, double a, double b);

  int dim() const { return dim_; }
  const std::vector<FourierMode>& modes() const { return modes_; }

  double operator()(std::span<const double> x) const;
  /// Values at every point of a cloud.
  std::vector<double> sample(const PointCloud& cloud) const;

  /// Multiplies each mode by f(|k|^2).
  FourierFunction map_modes(const std::function<double(double)>& f) const;

  /// Exact L2 norm under the uniform density (Parseval).
  double l2_norm_uniform() const;
  /// Largest |k_l| over modes and axes.
  int bandwidth() const;
  std::string to_string() const;

 private:
  int dim_;
  std::vector<FourierMode> modes_;
};

FourierFunction operator-(const FourierFunction& f, const FourierFunction& g);

/// Eigenvalue of the uniform-density continuum operator on mode k:
///   sigma 4 pi^2 |k|^2.
double continuum_eigenvalue(double sigma, double k_norm_sq);

/// Delta_rho^s g for rho == 1: each mode scaled by (sigma 4 pi^2 |k|^2)^s.
/// Non-integer s gives the spectral fractional power.
FourierFunction continuum_laplacian_uniform(const FourierFunction& g, double sigma, double s);

/// Minimiser of the continuum energy for rho == 1: mode coefficients of g
/// divided by 1 + tau (sigma 4 pi^2 |k|^2)^s.
FourierFunction continuum_solve_uniform(const FourierFunction& g, double tau, int s, double sigma);

/// tau ||Delta_rho^s g||_{L2}, the upper bound on ||u*_tau - g||.
double bias_bound(const FourierFunction& g, double tau, int s, double sigma);
/// ||u*_tau - g||_{L2} in closed form.
double exact_bias(const FourierFunction& g, double tau, int s, double sigma);

/// (2/eps^2) \int eta_eps(|x - y|) (v(x) - v(y)) rho(y) dy by tensor
/// Gauss-Legendre quadrature on the cube [-eps, eps]^d, with panels split
/// at 0 and at the kernel breakpoints; quad_m nodes per panel per axis.
double nonlocal_laplacian(const std::function<double(std::span<const double>)>& v,
                          const DensitySpec& rho, double eps, const KernelProfile& kernel,
                          std::span<const double> x, int quad_m);

/// Closed form of the nonlocal operator for v = cos(2 pi x), d = 1,
/// uniform rho, indicator kernel, evaluated at x = 0.
double nonlocal_laplacian_cosine_1d(double eps);

/// Values on the regular periodic grid {j/m}^d, row-major (last axis fastest).
struct GridField {
  int dim = 1;
  int m = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// Throws ValidationError unless m >= 4, m even and |values| = m^d.
  void validate() const;
  /// Grid coordinates of flat index `idx`.
  std::vector<double> point(std::size_t idx) const;

  static GridField sample(int dim, int m, const std::function<double(std::span<const double>)>& f);
};

/// -(sigma/rho) div(rho^2 grad phi) with FFT-based spectral derivatives.
/// Exact for band-limited phi and rho with bandwidth below m/4.  Throws
/// ValidationError on mismatched grids or non-positive rho.
GridField pseudo_spectral_continuum_laplacian(const GridField& phi, const GridField& rho,
                                              double sigma);

/// ||f||_{L2(mu)} for a Fourier function under density rho.  Uniform rho is
/// exact by Parseval; otherwise the periodic trapezoid rule on a grid fine
/// enough that f^2 rho is resolved exactly.
double l2_mu_norm(const FourierFunction& f, const DensitySpec& rho);
/// Empirical L2(mu_n) norm of sampled values.
double l2_mu_norm(std::span<const double> values);

}  // namespace polylap
