#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "polylap/geometry.hpp"
#include "polylap/signal.hpp"

namespace polylap {

/// Matrix-free view of the unnormalised graph Laplacian
///   (Delta_n u)_i = 2/(n eps^2) * sum_j W_ij (u_i - u_j).
/// Implementations are immutable after construction and safe to share.
class LaplacianOperator {
 public:
  virtual ~LaplacianOperator() = default;

  virtual std::size_t size() const = 0;
  virtual double eps() const = 0;
  /// out = Delta_n u.  `out` must not alias `u`.
  virtual void apply(std::span<const double> u, std::span<double> out) const = 0;
  /// Weighted degree D_ii = sum_k W_ik (units eps^-d).
  virtual double degree(std::size_t i) const = 0;

  /// 2/(n eps^2), the factor applied on top of the stored weights.
  double scale() const {
    const double e = eps();
    return 2.0 / (static_cast<double>(size()) * e * e);
  }
};

/// eps-neighbourhood kernel graph in compressed per-node adjacency form.
/// Weights are stored already scaled: W_ij = eps^-d eta(|x_i - x_j| / eps).
class KernelGraph {
 public:
  KernelGraph() = default;
  /// Takes per-node neighbour lists sorted by index.
  KernelGraph(std::size_t n, int dim, double eps, KernelProfile kernel,
              std::vector<std::size_t> row_offsets, std::vector<std::uint32_t> neighbors,
              std::vector<double> weights);

  std::size_t size() const { return n_; }
  int dim() const { return dim_; }
  double eps() const { return eps_; }
  const KernelProfile& kernel() const { return kernel_; }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(std::size_t i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  double degree(std::size_t i) const { return degrees_[i]; }
  std::span<const double> degrees() const { return degrees_; }
  /// Number of stored directed entries (twice the undirected edge count).
  std::size_t nnz() const { return neighbors_.size(); }

 private:
  std::size_t n_ = 0;
  int dim_ = 1;
  double eps_ = 0.0;
  KernelProfile kernel_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> neighbors_;
  std::vector<double> weights_;
  std::vector<double> degrees_;
};

/// Builds the exact eps-graph with a periodic cell list (cells of side
/// >= eps, 3^d neighbouring cells scanned).  Rows are built in parallel.
/// Throws ValidationError unless 0 < eps <= 1/2.
KernelGraph build_graph(const PointCloud& cloud, double eps, const KernelProfile& kernel);

/// O(n^2) reference construction used by tests and the benchmark.
KernelGraph build_graph_brute_force(const PointCloud& cloud, double eps,
                                    const KernelProfile& kernel);

/// LaplacianOperator over a KernelGraph.  Holds a reference; the graph must
/// outlive it.
class GraphLaplacian final : public LaplacianOperator {
 public:
  explicit GraphLaplacian(const KernelGraph& graph) : graph_(&graph) {}

  std::size_t size() const override { return graph_->size(); }
  double eps() const override { return graph_->eps(); }
  void apply(std::span<const double> u, std::span<double> out) const override;
  double degree(std::size_t i) const override { return graph_->degree(i); }

  const KernelGraph& graph() const { return *graph_; }

 private:
  const KernelGraph* graph_;
};

/// OpenMP-parallel over rows.
GraphSignal apply_laplacian(const KernelGraph& graph, std::span<const double> u);
/// Single-threaded reference kept for testing and benchmarking.
GraphSignal apply_laplacian_serial(const KernelGraph& graph, std::span<const double> u);

/// s-fold composition of Delta_n; s == 0 returns u unchanged.
GraphSignal apply_poly_laplacian(const LaplacianOperator& op, std::span<const double> u, int s);
GraphSignal apply_poly_laplacian(const KernelGraph& graph, std::span<const double> u, int s);

/// R_n^(s)(u) = <Delta_n^s u, u>, evaluated as
/// <Delta_n^ceil(s/2) u, Delta_n^floor(s/2) u> in L2(mu_n).
double dirichlet_energy(const LaplacianOperator& op, std::span<const double> u, int s);
double dirichlet_energy(const KernelGraph& graph, std::span<const double> u, int s);

/// Largest eigenvalue of Delta_n by power iteration from a seeded random
/// start.  Returns 0 for a graph without edges.
double operator_norm_estimate(const LaplacianOperator& op, int iters, std::uint64_t seed);
double operator_norm_estimate(const KernelGraph& graph, int iters, std::uint64_t seed);

struct DegreeStatistics {
  double min_normalized_degree = 0.0;  ///< min_i (1/n) D_ii
  double max_normalized_degree = 0.0;
  std::size_t max_neighbor_count = 0;
};

DegreeStatistics degree_statistics(const KernelGraph& graph);

/// Edge-list text format: header "n d eps kernel", then one "i j w" line per
/// undirected edge with i < j; numbers use shortest round-trip decimals.
void write_edge_list(std::ostream& os, const KernelGraph& graph);
KernelGraph read_edge_list(std::istream& is);

}  // namespace polylap
