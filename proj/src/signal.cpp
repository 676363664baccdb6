#include "polylap/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polylap/error.hpp"

namespace polylap {

namespace {
constexpr std::size_t kBlock = 4096;
}

double deterministic_dot(std::span<const double> a, std::span<const double> b) {
  check_length(b.size(), a.size(), "deterministic_dot");
  const std::size_t n = a.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  if (blocks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[static_cast<std::size_t>(blk)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double dot_mu(std::span<const double> a, std::span<const double> b) {
  if (a.empty()) return 0.0;
  return deterministic_dot(a, b) / static_cast<double>(a.size());
}

double norm_mu(std::span<const double> u) { return std::sqrt(dot_mu(u, u)); }

double distance_mu(std::span<const double> a, std::span<const double> b) {
  check_length(b.size(), a.size(), "distance_mu");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return norm_mu(diff);
}

void check_length(std::size_t got, std::size_t expected, const char* what) {
  if (got != expected) {
    throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(got) +
                          " vs " + std::to_string(expected) + ")");
  }
}

}  // namespace polylap
