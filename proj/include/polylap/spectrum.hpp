#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "polylap/graph.hpp"

namespace polylap {

inline constexpr std::size_t kDefaultDenseThreshold = 500;

/// Full eigendecomposition of Delta_n.  Eigenvalues ascend; column i of
/// `vectors` is orthonormal in L2(mu_n), i.e. (1/n) q_i . q_j = delta_ij.
struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// The dense matrix 2/(n eps^2) (D - W).
Eigen::MatrixXd dense_laplacian(const KernelGraph& graph);

/// Throws ValidationError when n exceeds `threshold` (use the matrix-free
/// path instead).
DenseSpectrum dense_spectrum(const KernelGraph& graph,
                             std::size_t threshold = kDefaultDenseThreshold);

/// sum_i lambda_i^s <u, q_i>^2 for any real s >= 0; negative roundoff
/// eigenvalues are clamped to 0.
double spectral_energy(const DenseSpectrum& spectrum, std::span<const double> u, double s);

}  // namespace polylap
