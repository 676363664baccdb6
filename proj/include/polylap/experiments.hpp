#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polylap/continuum.hpp"
#include "polylap/geometry.hpp"
#include "polylap/graph.hpp"
#include "polylap/signal.hpp"

namespace polylap {

enum class NoiseKind { Gaussian, Uniform, Rademacher };

/// Centred sub-Gaussian noise.  `level` is the standard deviation
/// (Gaussian), the half-width (Uniform) or the amplitude (Rademacher).
struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  double level = 0.1;

  static NoiseSpec parse(const std::string& kind, double level);
  void validate() const;
  std::string_view name() const;
};

/// Draws n iid noise values from the stream (seed, noise tag).
std::vector<double> gen_noise(std::size_t n, const NoiseSpec& noise, std::uint64_t seed);

/// y_i = g(x_i) + xi_i.
GraphSignal gen_labels(const FourierFunction& g, const PointCloud& cloud, const NoiseSpec& noise,
                       std::uint64_t seed);

/// eps(n) = eps_mult (log n / n)^{1/(d+4s)},  tau(n) = tau_mult eps(n)^s.
struct Schedule {
  int d = 1;
  int s = 1;
  std::vector<std::size_t> n_grid;
  double eps_mult = 0.3;
  double tau_mult = 0.05;

  double eps(std::size_t n) const;
  double tau(std::size_t n) const;
  /// s / (d + 4s): exponent of (log n / n) in the total error.
  double predicted_exponent() const;
  /// Throws ValidationError on an empty or non-increasing grid, or when
  /// eps(n) > 1/2 for some n.
  void validate() const;
};

/// Which Delta_n implementation a trial uses.  Auto picks the windowed line
/// operator for d = 1 with the indicator kernel, the stored graph otherwise.
enum class OperatorBackend { Auto, Graph, Line };

OperatorBackend parse_backend(const std::string& name);

struct TrialConfig {
  int d = 1;
  int s = 1;
  std::size_t n = 1024;
  double eps = 0.1;
  double tau = 0.1;
  FourierFunction signal{1};
  NoiseSpec noise;
  KernelProfile kernel;
  std::uint64_t seed = 0;
  int trial = 0;
  double tol = 1e-10;
  std::size_t max_iters = 0;
  OperatorBackend backend = OperatorBackend::Auto;
  std::size_t memory_cap_bytes = std::size_t{3} << 30;
};

/// One trial's row.  consistency_err is the node-sampled bias
/// ||u*_tau - g||_{L2(mu_n)}, so total_err <= variance_err + consistency_err.
struct ExperimentRecord {
  std::size_t n = 0;
  int d = 1;
  int s = 1;
  double eps = 0.0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  int trial = 0;
  double variance_err = 0.0;
  double bias_err = 0.0;
  double total_err = 0.0;
  double consistency_err = 0.0;
  std::size_t solver_iterations = 0;
  double solver_residual = 0.0;
  bool failed = false;
};

struct TrialOutput {
  ExperimentRecord record;
  PointCloud cloud;
  GraphSignal labels;
  GraphSignal solution;
  double energy = 0.0;       ///< E_{n,tau}(u)
  double regularizer = 0.0;  ///< R_n^(s)(u)
};

/// Sample, build Delta_n, generate labels, solve, and measure the error
/// split against the exact uniform-density continuum minimiser.  One
/// dimensional clouds are sorted before use.  Solver failure marks the
/// record failed instead of throwing.
TrialOutput run_trial_detailed(const TrialConfig& config);
ExperimentRecord run_trial(const TrialConfig& config);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of y on x with the usual slope standard error.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);

struct RateSweepConfig {
  Schedule schedule;
  std::size_t trials_per_n = 10;
  std::uint64_t base_seed = 0;
  FourierFunction signal{1};
  NoiseSpec noise;
  KernelProfile kernel;
  double tol = 1e-10;
  std::size_t max_iters = 0;
  OperatorBackend backend = OperatorBackend::Auto;
  std::size_t memory_cap_bytes = std::size_t{3} << 30;
};

struct RateSweepResult {
  std::vector<ExperimentRecord> records;  ///< ordered by (n index, trial)
  std::vector<double> median_total_err;   ///< per n_grid entry
  std::vector<double> median_variance_err;
  SlopeFit vs_log_ratio;  ///< log median total_err vs log(log n / n)
  SlopeFit vs_log_n;      ///< log median total_err vs log n
  double predicted = 0.0;
  std::size_t failed = 0;
};

/// Trials run in parallel; each derives its seed from
/// (base_seed, n index, trial index) and lands in a fixed slot.
RateSweepResult rate_sweep(const RateSweepConfig& config);

/// The default d = 1 experiment: g = cos(2 pi x) + 0.5 sin(4 pi x),
/// Gaussian(0.1) noise, n = 1024 ... 32768.
RateSweepConfig default_rate_sweep(int s = 1);

struct ConsistencyConfig {
  FourierFunction u{1};
  int s = 1;
  std::vector<double> eps_grid;
  /// n(eps) = ceil(K log(1/eps) / eps^exponent); exponent defaults to d + 4s.
  double n_rule_k = 40.0;
  std::optional<double> n_rule_exponent;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  KernelProfile kernel;
  OperatorBackend backend = OperatorBackend::Auto;
  std::size_t memory_cap_bytes = std::size_t{3} << 30;
};

struct ConsistencyRow {
  double eps = 0.0;
  std::size_t n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double error = 0.0;  ///< ||Delta_n^s u - Delta_rho^s u||_{L2(mu_n)}
};

struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;
  std::vector<double> median_error;  ///< per eps_grid entry
  SlopeFit fit;                      ///< log median error vs log eps
};

std::size_t consistency_sample_size(const ConsistencyConfig& config, double eps);

/// Throws ValidationError before allocating if any n(eps) would exceed the
/// memory cap.
ConsistencyResult consistency_sweep(const ConsistencyConfig& config);

struct DegreeCheckConfig {
  std::size_t n = 10000;
  int d = 1;
  double eps = 0.05;
  KernelProfile kernel;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  /// Neighbour counts must stay below cap_factor n eps^d; 0 selects
  /// 10 |B_1|.
  double cap_factor = 0.0;
};

struct DegreeCheckResult {
  std::vector<DegreeStatistics> per_trial;
  DegreeStatistics overall;
  double neighbor_bound = 0.0;
  bool within_cap = true;
};

/// Requires n eps^d >= 1.
DegreeCheckResult degree_concentration_check(const DegreeCheckConfig& config);

struct AnsatzScalingRow {
  double eps = 0.0;
  double tau = 0.0;
  double ansatz_norm = 0.0;
  double scaled = 0.0;  ///< ansatz_norm tau / eps^{2s}
};

struct AnsatzScalingResult {
  std::vector<AnsatzScalingRow> rows;
  double spread = 0.0;  ///< max scaled / min scaled
};

/// ||w~_n|| tau / eps^{2s} across an eps grid on uniform d-dimensional clouds
/// with pure-noise input xi.
AnsatzScalingResult ansatz_scaling_check(std::size_t n, int d, int s, double tau,
                                         const std::vector<double>& eps_grid,
                                         const KernelProfile& kernel, const NoiseSpec& noise,
                                         std::uint64_t seed);

/// Header plus one row per record; floats as shortest round-trip decimals.
void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_consistency_csv(std::ostream& os, const std::vector<ConsistencyRow>& rows);

}  // namespace polylap
