#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "polylap/graph.hpp"
#include "polylap/spectrum.hpp"

namespace polylap {

/// (tau Delta_n^s + I) u = y.
struct ResolventProblem {
  const LaplacianOperator& op;
  std::span<const double> y;
  double tau = 0.0;
  int s = 1;

  /// Throws ValidationError unless tau >= 0, s >= 1 and |y| = n.
  void validate() const;
};

enum class Preconditioner { None, DiagonalAnsatz };

struct SolveOptions {
  double tol = 1e-10;
  /// 0 selects the default of 10 n.
  std::size_t max_iters = 0;
  Preconditioner preconditioner = Preconditioner::DiagonalAnsatz;
  /// Keep per-iteration residuals and energies (tests, diagnostics).
  bool record_history = false;
};

/// Outcome of a conjugate-gradient resolvent solve.
///
/// The condition number of A = tau Delta_n^s + I is at most
/// 1 + tau ||Delta_n||^s, and ||Delta_n|| grows like eps^-2, so iteration
/// counts grow roughly like sqrt(tau) eps^-s for small eps.
struct SolveReport {
  GraphSignal solution;
  std::size_t iterations = 0;
  /// ||A u - y|| / ||y|| in L2(mu_n), recomputed from u at exit.
  double final_relative_residual = 0.0;
  /// Roundoff level of the residual evaluation,
  ///   32 u (1 + tau (2 max_i c D_ii)^s) ||u|| / ||y||,
  /// from the Gershgorin bound on ||Delta_n||.  When it exceeds tol the
  /// solve succeeds once the residual reaches this floor instead.
  double residual_floor = 0.0;
  Preconditioner preconditioner = Preconditioner::None;
  std::vector<double> residual_history;
  /// Energy E_{n,tau}(x_k) of each iterate; nonincreasing for CG.
  std::vector<double> energy_history;
};

/// Thrown when max_iters is reached; carries the best iterate.
class SolverDidNotConverge : public std::runtime_error {
 public:
  SolverDidNotConverge(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Preconditioned CG from a zero initial guess.  tau == 0 returns y with
/// zero iterations.
SolveReport solve_resolvent(const ResolventProblem& problem, const SolveOptions& options = {});

/// Exact resolvent through the eigendecomposition: coefficients of y are
/// divided by 1 + tau lambda_i^s.  Accepts any real s >= 0.
GraphSignal solve_resolvent_dense(const DenseSpectrum& spectrum, std::span<const double> y,
                                  double tau, double s);
GraphSignal solve_resolvent_dense(const KernelGraph& graph, std::span<const double> y, double tau,
                                  double s, std::size_t threshold = kDefaultDenseThreshold);

/// Diagonal approximation of the resolvent:
///   w_i = xi_i / (tau (2 D_ii / (n eps^2))^s + 1).
GraphSignal ansatz_signal(const LaplacianOperator& op, std::span<const double> xi, double tau,
                          int s);
GraphSignal ansatz_signal(const KernelGraph& graph, std::span<const double> xi, double tau, int s);

/// E_{n,tau}(u) = ||u - y||^2 + tau R_n^(s)(u), norms in L2(mu_n).
double resolvent_energy(const LaplacianOperator& op, std::span<const double> u,
                        std::span<const double> y, double tau, int s);

}  // namespace polylap
