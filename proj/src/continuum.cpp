#include "polylap/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>
#include <boost/math/special_functions/legendre.hpp>

#include "polylap/error.hpp"
#include "polylap/format.hpp"

namespace polylap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm_sq(const std::vector<int>& k) {
  double s = 0.0;
  for (int v : k) s += static_cast<double>(v) * v;
  return s;
}

}  // namespace

FourierFunction FourierFunction::constant(int dim, double c) {
  FourierFunction f(dim);
  f.add(std::vector<int>(static_cast<std::size_t>(dim), 0), c, 0.0);
  return f;
}

FourierFunction& FourierFunction::add(std::vector<int> k, double a, double b) {
  if (static_cast<int>(k.size()) != dim_) {
    throw ValidationError("FourierFunction: mode has dimension " + std::to_string(k.size()) +
                          ", expected " + std::to_string(dim_));
  }
  const auto first = std::find_if(k.begin(), k.end(), [](int v) { return v != 0; });
  if (first == k.end()) {
    if (b != 0.0) throw ValidationError("FourierFunction: zero mode cannot carry a sine term");
  } else if (*first < 0) {
    for (auto& v : k) v = -v;
    b = -b;
  }
  for (auto& m : modes_) {
    if (m.k == k) {
      m.a += a;
      m.b += b;
      return *this;
    }
  }
  modes_.push_back({std::move(k), a, b});
  return *this;
}

FourierFunction FourierFunction::parse(int dim, const std::string& text) {
  FourierFunction f(dim);
  std::istringstream is(text);
  std::string triple;
  while (is >> triple) {
    const auto c1 = triple.find(':');
    const auto c2 = triple.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ValidationError("signal term '" + triple + "' must look like k1,..,kd:a:b");
    }
    std::vector<int> k;
    std::istringstream ks(triple.substr(0, c1));
    std::string comp;
    while (std::getline(ks, comp, ',')) k.push_back(static_cast<int>(parse_int(comp, "mode index")));
    f.add(std::move(k), parse_double(triple.substr(c1 + 1, c2 - c1 - 1), "cosine coefficient"),
          parse_double(triple.substr(c2 + 1), "sine coefficient"));
  }
  if (f.modes_.empty()) throw ValidationError("signal: no Fourier terms given");
  return f;
}

double FourierFunction::operator()(std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& m : modes_) {
    double phase = 0.0;
    for (std::size_t l = 0; l < m.k.size(); ++l) phase += m.k[l] * x[l];
    phase *= kTwoPi;
    acc += m.a * std::cos(phase);
    if (m.b != 0.0) acc += m.b * std::sin(phase);
  }
  return acc;
}

std::vector<double> FourierFunction::sample(const PointCloud& cloud) const {
  if (cloud.dim != dim_) throw ValidationError("FourierFunction::sample: dimension mismatch");
  std::vector<double> out(cloud.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
    out[static_cast<std::size_t>(i)] = (*this)(cloud.point(static_cast<std::size_t>(i)));
  }
  return out;
}

FourierFunction FourierFunction::map_modes(const std::function<double(double)>& f) const {
  FourierFunction out(dim_);
  out.modes_ = modes_;
  for (auto& m : out.modes_) {
    const double factor = f(norm_sq(m.k));
    m.a *= factor;
    m.b *= factor;
  }
  return out;
}

double FourierFunction::l2_norm_uniform() const {
  double acc = 0.0;
  for (const auto& m : modes_) {
    if (norm_sq(m.k) == 0.0) {
      acc += m.a * m.a;
    } else {
      acc += 0.5 * (m.a * m.a + m.b * m.b);
    }
  }
  return std::sqrt(acc);
}

int FourierFunction::bandwidth() const {
  int bw = 0;
  for (const auto& m : modes_) {
    for (int v : m.k) bw = std::max(bw, std::abs(v));
  }
  return bw;
}

std::string FourierFunction::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (i) os << ' ';
    for (std::size_t l = 0; l < modes_[i].k.size(); ++l) os << (l ? "," : "") << modes_[i].k[l];
    os << ':' << format_double(modes_[i].a) << ':' << format_double(modes_[i].b);
  }
  return os.str();
}

FourierFunction operator-(const FourierFunction& f, const FourierFunction& g) {
  FourierFunction out = f;
  for (const auto& m : g.modes()) out.add(m.k, -m.a, -m.b);
  return out;
}

double continuum_eigenvalue(double sigma, double k_norm_sq) {
  return sigma * 4.0 * std::numbers::pi * std::numbers::pi * k_norm_sq;
}

FourierFunction continuum_laplacian_uniform(const FourierFunction& g, double sigma, double s) {
  return g.map_modes([&](double k2) {
    if (k2 == 0.0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(continuum_eigenvalue(sigma, k2), s);
  });
}

FourierFunction continuum_solve_uniform(const FourierFunction& g, double tau, int s, double sigma) {
  if (!(tau >= 0.0)) throw ValidationError("continuum_solve_uniform: tau must be >= 0");
  return g.map_modes([&](double k2) {
    const double lambda = k2 == 0.0 ? 0.0 : std::pow(continuum_eigenvalue(sigma, k2), s);
    return 1.0 / (1.0 + tau * lambda);
  });
}

double bias_bound(const FourierFunction& g, double tau, int s, double sigma) {
  if (!(tau >= 0.0)) throw ValidationError("bias_bound: tau must be >= 0");
  return tau * continuum_laplacian_uniform(g, sigma, s).l2_norm_uniform();
}

double exact_bias(const FourierFunction& g, double tau, int s, double sigma) {
  if (!(tau >= 0.0)) throw ValidationError("exact_bias: tau must be >= 0");
  // g - u*_tau has mode factor tau lambda / (1 + tau lambda); computing it
  // directly avoids cancellation for small tau.
  return g.map_modes([&](double k2) {
            const double lambda = k2 == 0.0 ? 0.0 : std::pow(continuum_eigenvalue(sigma, k2), s);
            return tau * lambda / (1.0 + tau * lambda);
          })
      .l2_norm_uniform();
}

namespace {

struct Rule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule1d gauss_legendre(int m) {
  Rule1d rule;
  const auto zeros = boost::math::legendre_p_zeros<double>(m);
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(m, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes.push_back(z);
    rule.weights.push_back(w);
    if (z != 0.0) {
      rule.nodes.push_back(-z);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

}  // namespace

double nonlocal_laplacian(const std::function<double(std::span<const double>)>& v,
                          const DensitySpec& rho, double eps, const KernelProfile& kernel,
                          std::span<const double> x, int quad_m) {
  if (!(eps > 0.0) || eps > 0.5) throw ValidationError("nonlocal_laplacian: eps must lie in (0, 1/2]");
  if (quad_m < 8) throw ValidationError("nonlocal_laplacian: quad_m must be >= 8");
  const int d = static_cast<int>(x.size());

  // Panel edges on [-1, 1] (units of eps).
  std::vector<double> edges{-1.0, 0.0, 1.0};
  for (double b : kernel.breakpoints()) {
    edges.push_back(b);
    edges.push_back(-b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const Rule1d base = gauss_legendre(quad_m);
  Rule1d axis;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (std::size_t q = 0; q < base.nodes.size(); ++q) {
      axis.nodes.push_back(eps * (mid + half * base.nodes[q]));
      axis.weights.push_back(eps * half * base.weights[q]);
    }
  }

  const std::size_t per_axis = axis.nodes.size();
  std::size_t total = 1;
  for (int l = 0; l < d; ++l) total *= per_axis;

  const double vx = v(x);
  const double inv_eps_d = std::pow(eps, -d);
  double acc = 0.0;
  std::vector<double> y(static_cast<std::size_t>(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    double r2 = 0.0;
    for (int l = 0; l < d; ++l) {
      const std::size_t q = rest % per_axis;
      rest /= per_axis;
      const double h = axis.nodes[q];
      w *= axis.weights[q];
      r2 += h * h;
      y[static_cast<std::size_t>(l)] = wrap_unit(x[static_cast<std::size_t>(l)] + h);
    }
    const double k = kernel(std::sqrt(r2) / eps);
    if (k == 0.0) continue;
    acc += w * k * (vx - v(y)) * eval_density(rho, y);
  }
  return 2.0 / (eps * eps) * inv_eps_d * acc;
}

double nonlocal_laplacian_cosine_1d(double eps) {
  const double z = kTwoPi * eps;
  return 4.0 / (eps * eps) * (1.0 - std::sin(z) / z);
}

void GridField::validate() const {
  if (m < 4 || m % 2 != 0) throw ValidationError("GridField: m must be even and >= 4");
  std::size_t expect = 1;
  for (int l = 0; l < dim; ++l) expect *= static_cast<std::size_t>(m);
  if (values.size() != expect) throw ValidationError("GridField: value count is not m^d");
}

std::vector<double> GridField::point(std::size_t idx) const {
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (int l = dim - 1; l >= 0; --l) {
    p[static_cast<std::size_t>(l)] = static_cast<double>(idx % static_cast<std::size_t>(m)) / m;
    idx /= static_cast<std::size_t>(m);
  }
  return p;
}

GridField GridField::sample(int dim, int m, const std::function<double(std::span<const double>)>& f) {
  GridField g{dim, m, {}};
  std::size_t total = 1;
  for (int l = 0; l < dim; ++l) total *= static_cast<std::size_t>(m);
  g.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) g.values[i] = f(g.point(i));
  g.validate();
  return g;
}

namespace {

// FFTW planning is not thread-safe.
std::mutex& fftw_plan_mutex() {
  static std::mutex mu;
  return mu;
}

class ComplexFft {
 public:
  ComplexFft(int dim, int m) : size_(1) {
    std::vector<int> dims(static_cast<std::size_t>(dim), m);
    for (int l = 0; l < dim; ++l) size_ *= static_cast<std::size_t>(m);
    buf_ = fftw_alloc_complex(size_);
    std::lock_guard lock(fftw_plan_mutex());
    fwd_ = fftw_plan_dft(dim, dims.data(), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(dim, dims.data(), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~ComplexFft() {
    std::lock_guard lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::vector<std::complex<double>> forward(std::span<const double> real) {
    for (std::size_t i = 0; i < size_; ++i) {
      buf_[i][0] = real[i];
      buf_[i][1] = 0.0;
    }
    fftw_execute(fwd_);
    std::vector<std::complex<double>> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = {buf_[i][0], buf_[i][1]};
    return out;
  }

  /// Normalised inverse transform; returns the real part.
  std::vector<double> inverse_real(std::span<const std::complex<double>> spec) {
    for (std::size_t i = 0; i < size_; ++i) {
      buf_[i][0] = spec[i].real();
      buf_[i][1] = spec[i].imag();
    }
    fftw_execute(bwd_);
    std::vector<double> out(size_);
    const double inv = 1.0 / static_cast<double>(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = buf_[i][0] * inv;
    return out;
  }

 private:
  std::size_t size_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// Signed wavenumber along `axis` for a flat index; Nyquist maps to 0 so
/// odd derivatives stay real.
int wavenumber(std::size_t idx, int axis, int dim, int m) {
  for (int l = dim - 1; l > axis; --l) idx /= static_cast<std::size_t>(m);
  const int j = static_cast<int>(idx % static_cast<std::size_t>(m));
  if (j == m / 2) return 0;
  return j < m / 2 ? j : j - m;
}

}  // namespace

GridField pseudo_spectral_continuum_laplacian(const GridField& phi, const GridField& rho,
                                              double sigma) {
  phi.validate();
  rho.validate();
  if (phi.dim != rho.dim || phi.m != rho.m) {
    throw ValidationError("pseudo_spectral_continuum_laplacian: grids do not match");
  }
  for (double r : rho.values) {
    if (!(r > 0.0)) throw ValidationError("pseudo_spectral_continuum_laplacian: rho must be positive");
  }
  const std::size_t size = phi.size();
  ComplexFft fft(phi.dim, phi.m);
  const auto phi_hat = fft.forward(phi.values);

  std::vector<std::complex<double>> div_hat(size, {0.0, 0.0});
  std::vector<std::complex<double>> work(size);
  for (int axis = 0; axis < phi.dim; ++axis) {
    for (std::size_t i = 0; i < size; ++i) {
      const double k = kTwoPi * wavenumber(i, axis, phi.dim, phi.m);
      work[i] = std::complex<double>(0.0, k) * phi_hat[i];
    }
    auto flux = fft.inverse_real(work);
    for (std::size_t i = 0; i < size; ++i) flux[i] *= rho.values[i] * rho.values[i];
    const auto flux_hat = fft.forward(flux);
    for (std::size_t i = 0; i < size; ++i) {
      const double k = kTwoPi * wavenumber(i, axis, phi.dim, phi.m);
      div_hat[i] += std::complex<double>(0.0, k) * flux_hat[i];
    }
  }
  const auto div = fft.inverse_real(div_hat);
  GridField out{phi.dim, phi.m, std::vector<double>(size)};
  for (std::size_t i = 0; i < size; ++i) out.values[i] = -sigma / rho.values[i] * div[i];
  return out;
}

double l2_mu_norm(const FourierFunction& f, const DensitySpec& rho) {
  if (rho.kind == DensityKind::Uniform) return f.l2_norm_uniform();
  rho.validate(f.dim());
  int rho_bw = 0;
  for (int k : rho.mode) rho_bw = std::max(rho_bw, std::abs(k));
  // The periodic trapezoid rule on m points is exact below bandwidth m.
  int m = 2 * f.bandwidth() + rho_bw + 1;
  m = std::max(4, m + (m % 2));
  const GridField grid = GridField::sample(f.dim(), m, [&](std::span<const double> x) {
    const double v = f(x);
    return v * v * eval_density(rho, x);
  });
  double acc = 0.0;
  for (double v : grid.values) acc += v;
  return std::sqrt(std::max(0.0, acc / static_cast<double>(grid.size())));
}

double l2_mu_norm(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace polylap
