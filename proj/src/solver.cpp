#include "polylap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polylap/error.hpp"

namespace polylap {

void ResolventProblem::validate() const {
  if (!(tau >= 0.0)) throw ValidationError("resolvent: tau must be >= 0");
  if (s < 1) throw ValidationError("resolvent: s must be >= 1");
  check_length(y.size(), op.size(), "resolvent labels");
}

namespace {

/// out = (tau Delta^s + I) v, using `tmp` as scratch.
void apply_resolvent_operator(const ResolventProblem& p, std::span<const double> v,
                              std::span<double> out, std::vector<double>& tmp) {
  const std::size_t n = v.size();
  tmp.assign(v.begin(), v.end());
  for (int k = 0; k < p.s; ++k) {
    p.op.apply(tmp, out);
    if (k + 1 < p.s) std::copy(out.begin(), out.end(), tmp.begin());
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = p.tau * out[i] + v[i];
}

std::vector<double> ansatz_diagonal(const LaplacianOperator& op, double tau, int s) {
  const double c = op.scale();
  std::vector<double> inv(op.size());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    inv[i] = 1.0 / (tau * std::pow(c * op.degree(i), s) + 1.0);
  }
  return inv;
}

}  // namespace

SolveReport solve_resolvent(const ResolventProblem& problem, const SolveOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw ValidationError("solve_resolvent: tol must be positive");
  const std::size_t n = problem.op.size();
  const std::size_t max_iters = options.max_iters ? options.max_iters : 10 * n;

  SolveReport report;
  report.preconditioner = options.preconditioner;
  const auto y = problem.y;
  const double y_norm = norm_mu(y);
  const double yy = dot_mu(y, y);

  if (problem.tau == 0.0 || y_norm == 0.0) {
    report.solution.assign(y.begin(), y.end());
    return report;
  }

  std::vector<double> minv;
  if (options.preconditioner == Preconditioner::DiagonalAnsatz) {
    minv = ansatz_diagonal(problem.op, problem.tau, problem.s);
  }
  auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
    if (minv.empty()) {
      z = r;
    } else {
      for (std::size_t i = 0; i < n; ++i) z[i] = minv[i] * r[i];
    }
  };

  double max_degree = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_degree = std::max(max_degree, problem.op.degree(i));
  const double op_bound = problem.tau * std::pow(2.0 * problem.op.scale() * max_degree, problem.s) + 1.0;
  auto floor_for = [&](const std::vector<double>& xv) {
    return 32.0 * std::numeric_limits<double>::epsilon() * op_bound * norm_mu(xv) / y_norm;
  };

  std::vector<double> x(n, 0.0), r(y.begin(), y.end()), z(n), p(n), q(n), tmp;
  auto energy = [&]() { return yy - dot_mu(x, y) - dot_mu(x, r); };
  auto true_residual = [&]() {
    apply_resolvent_operator(problem, x, q, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - q[i];
    return norm_mu(r) / y_norm;
  };

  double rel = 1.0;
  if (options.record_history) {
    report.residual_history.push_back(rel);
    report.energy_history.push_back(energy());
  }

  std::size_t it = 0;
  // Restart from the current iterate if the recursively updated residual
  // drifted away from the true one.
  for (int restart = 0; restart < 4; ++restart) {
    precondition(r, z);
    p = z;
    double rz = dot_mu(r, z);
    bool converged_recursive = false;
    while (it < max_iters) {
      apply_resolvent_operator(problem, p, q, tmp);
      const double pq = dot_mu(p, q);
      if (!(pq > 0.0)) break;
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      ++it;
      rel = norm_mu(r) / y_norm;
      if (options.record_history) {
        report.residual_history.push_back(rel);
        report.energy_history.push_back(energy());
      }
      if (rel <= options.tol) {
        converged_recursive = true;
        break;
      }
      precondition(r, z);
      const double rz_new = dot_mu(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    rel = true_residual();
    if (rel <= options.tol || !converged_recursive) break;
    if (rel <= floor_for(x)) break;
  }

  report.iterations = it;
  report.final_relative_residual = rel;
  report.residual_floor = floor_for(x);
  report.solution = std::move(x);
  if (rel > std::max(options.tol, report.residual_floor)) {
    throw SolverDidNotConverge("solve_resolvent: no convergence after " + std::to_string(it) +
                                   " iterations (relative residual " + std::to_string(rel) + ")",
                               std::move(report));
  }
  return report;
}

GraphSignal solve_resolvent_dense(const DenseSpectrum& spectrum, std::span<const double> y,
                                  double tau, double s) {
  if (!(tau >= 0.0)) throw ValidationError("solve_resolvent_dense: tau must be >= 0");
  if (!(s >= 0.0)) throw ValidationError("solve_resolvent_dense: s must be >= 0");
  const auto n = spectrum.vectors.rows();
  if (static_cast<Eigen::Index>(y.size()) != n) {
    throw ValidationError("solve_resolvent_dense: length mismatch");
  }
  if (tau == 0.0) return GraphSignal(y.begin(), y.end());
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
  Eigen::VectorXd coeff = spectrum.vectors.transpose() * yv / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = std::max(spectrum.values(i), 0.0);
    coeff(i) /= 1.0 + tau * std::pow(lambda, s);
  }
  const Eigen::VectorXd u = spectrum.vectors * coeff;
  return GraphSignal(u.data(), u.data() + n);
}

GraphSignal solve_resolvent_dense(const KernelGraph& graph, std::span<const double> y, double tau,
                                  double s, std::size_t threshold) {
  check_length(y.size(), graph.size(), "solve_resolvent_dense");
  return solve_resolvent_dense(dense_spectrum(graph, threshold), y, tau, s);
}

GraphSignal ansatz_signal(const LaplacianOperator& op, std::span<const double> xi, double tau,
                          int s) {
  check_length(xi.size(), op.size(), "ansatz_signal");
  if (!(tau >= 0.0)) throw ValidationError("ansatz_signal: tau must be >= 0");
  if (s < 1) throw ValidationError("ansatz_signal: s must be >= 1");
  const auto inv = ansatz_diagonal(op, tau, s);
  GraphSignal w(xi.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = xi[i] * inv[i];
  return w;
}

GraphSignal ansatz_signal(const KernelGraph& graph, std::span<const double> xi, double tau, int s) {
  return ansatz_signal(GraphLaplacian(graph), xi, tau, s);
}

double resolvent_energy(const LaplacianOperator& op, std::span<const double> u,
                        std::span<const double> y, double tau, int s) {
  return std::pow(distance_mu(u, y), 2) + tau * dirichlet_energy(op, u, s);
}

}  // namespace polylap
