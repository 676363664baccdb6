#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polylap/graph.hpp"

namespace polylap {

/// Graph Laplacian of the indicator-kernel eps-graph on a sorted
/// one-dimensional torus cloud, applied without storing any edges.
///
/// In sorted cyclic order the neighbours of x_p form a contiguous arc
/// [lo_p, hi_p] (extended indices); both ends advance monotonically in p, so
/// a running window sum gives sum_{j != p} u_j in O(1) amortised per node.
/// Memory is O(n) regardless of eps, which makes n ~ 10^7 clouds with
/// thousands of neighbours per node practical.  The operator is the same
/// Delta_n that build_graph + GraphLaplacian produce.
class LineLaplacian final : public LaplacianOperator {
 public:
  /// `sorted_coords` must be nondecreasing values in [0,1).
  /// Throws ValidationError unless 0 < eps <= 1/2.
  LineLaplacian(std::vector<double> sorted_coords, double eps);

  std::size_t size() const override { return x_.size(); }
  double eps() const override { return eps_; }
  void apply(std::span<const double> u, std::span<double> out) const override;
  double degree(std::size_t i) const override { return counts_[i] / eps_; }

  std::size_t neighbor_count(std::size_t i) const { return counts_[i]; }
  std::span<const double> coords() const { return x_; }

  /// Approximate resident bytes per node (coordinates and counts).
  static constexpr std::size_t kBytesPerNode = sizeof(double) + sizeof(std::uint32_t);

 private:
  /// Runs the sliding window over nodes [p0, p1); calls emit(p, count, window_sum).
  /// The starting window is located by search and summed from fixed-block
  /// partial sums of u, so the cost per chunk does not grow with eps.
  template <class Emit>
  void scan(std::size_t p0, std::size_t p1, std::span<const double> u,
            const std::vector<long double>& block_sums, Emit&& emit) const;

  std::vector<double> x_;
  double eps_;
  std::vector<std::uint32_t> counts_;
};

}  // namespace polylap
