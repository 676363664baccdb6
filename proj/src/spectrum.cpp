#include "polylap/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polylap/error.hpp"

namespace polylap {

Eigen::MatrixXd dense_laplacian(const KernelGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  const double c = GraphLaplacian(graph).scale();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    L(i, i) = c * graph.degree(row);
    const auto nb = graph.neighbors(row);
    const auto w = graph.weights(row);
    for (std::size_t k = 0; k < nb.size(); ++k) L(i, static_cast<Eigen::Index>(nb[k])) -= c * w[k];
  }
  return L;
}

DenseSpectrum dense_spectrum(const KernelGraph& graph, std::size_t threshold) {
  if (graph.size() > threshold) {
    throw ValidationError("dense_spectrum: n = " + std::to_string(graph.size()) +
                          " exceeds the dense threshold " + std::to_string(threshold) +
                          "; use the matrix-free solver path");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_laplacian(graph));
  if (eig.info() != Eigen::Success) throw ValidationError("dense_spectrum: eigensolver failed");
  DenseSpectrum out;
  out.values = eig.eigenvalues();
  out.vectors = eig.eigenvectors() * std::sqrt(static_cast<double>(graph.size()));
  return out;
}

double spectral_energy(const DenseSpectrum& spectrum, std::span<const double> u, double s) {
  const auto n = spectrum.vectors.rows();
  if (static_cast<Eigen::Index>(u.size()) != n) {
    throw ValidationError("spectral_energy: length mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> uv(u.data(), n);
  const Eigen::VectorXd coeff = spectrum.vectors.transpose() * uv / static_cast<double>(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = std::max(spectrum.values(i), 0.0);
    acc += std::pow(lambda, s) * coeff(i) * coeff(i);
  }
  return acc;
}

}  // namespace polylap
