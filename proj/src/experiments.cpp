#include "polylap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>

#include "polylap/error.hpp"
#include "polylap/format.hpp"
#include "polylap/line_laplacian.hpp"
#include "polylap/rng.hpp"
#include "polylap/solver.hpp"

namespace polylap {

NoiseSpec NoiseSpec::parse(const std::string& kind, double level) {
  NoiseSpec spec;
  if (kind == "gaussian") {
    spec.kind = NoiseKind::Gaussian;
  } else if (kind == "uniform") {
    spec.kind = NoiseKind::Uniform;
  } else if (kind == "rademacher") {
    spec.kind = NoiseKind::Rademacher;
  } else {
    throw ValidationError("unknown noise '" + kind + "' (expected gaussian|uniform|rademacher)");
  }
  spec.level = level;
  spec.validate();
  return spec;
}

void NoiseSpec::validate() const {
  if (!(level > 0.0) || !std::isfinite(level)) throw ValidationError("noise level must be positive");
}

std::string_view NoiseSpec::name() const {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Uniform: return "uniform";
    case NoiseKind::Rademacher: return "rademacher";
  }
  return "gaussian";
}

std::vector<double> gen_noise(std::size_t n, const NoiseSpec& noise, std::uint64_t seed) {
  noise.validate();
  CounterRng rng(seed, stream::kNoise);
  std::vector<double> xi(n);
  for (auto& v : xi) {
    switch (noise.kind) {
      case NoiseKind::Gaussian: v = noise.level * rng.normal(); break;
      case NoiseKind::Uniform: v = noise.level * (2.0 * rng.uniform() - 1.0); break;
      case NoiseKind::Rademacher: v = (rng() >> 63) ? noise.level : -noise.level; break;
    }
  }
  return xi;
}

GraphSignal gen_labels(const FourierFunction& g, const PointCloud& cloud, const NoiseSpec& noise,
                       std::uint64_t seed) {
  GraphSignal y = g.sample(cloud);
  const auto xi = gen_noise(y.size(), noise, seed);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += xi[i];
  return y;
}

double Schedule::eps(std::size_t n) const {
  const double nn = static_cast<double>(n);
  return eps_mult * std::pow(std::log(nn) / nn, 1.0 / (d + 4.0 * s));
}

double Schedule::tau(std::size_t n) const { return tau_mult * std::pow(eps(n), s); }

double Schedule::predicted_exponent() const { return static_cast<double>(s) / (d + 4.0 * s); }

void Schedule::validate() const {
  if (d < 1) throw ValidationError("schedule: d must be >= 1");
  if (s < 1) throw ValidationError("schedule: s must be >= 1");
  if (!(eps_mult > 0.0)) throw ValidationError("schedule: eps_mult must be positive");
  if (!(tau_mult > 0.0)) throw ValidationError("schedule: tau_mult must be positive");
  if (n_grid.empty()) throw ValidationError("schedule: n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw ValidationError("schedule: every n must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ValidationError("schedule: n_grid must be strictly increasing");
    }
    if (eps(n_grid[i]) > 0.5) {
      throw ValidationError("schedule: eps(" + std::to_string(n_grid[i]) + ") = " +
                            format_double(eps(n_grid[i])) + " exceeds 1/2; lower eps_mult");
    }
  }
}

OperatorBackend parse_backend(const std::string& name) {
  if (name == "auto") return OperatorBackend::Auto;
  if (name == "graph") return OperatorBackend::Graph;
  if (name == "line") return OperatorBackend::Line;
  throw ValidationError("unknown backend '" + name + "' (expected auto|graph|line)");
}

namespace {

/// Owns whichever representation backs the operator.
struct OperatorHandle {
  std::unique_ptr<KernelGraph> graph;
  std::unique_ptr<LaplacianOperator> op;
};

OperatorBackend resolve_backend(OperatorBackend requested, int d, const KernelProfile& kernel) {
  const bool line_ok = d == 1 && kernel.kind == KernelKind::Indicator;
  if (requested == OperatorBackend::Line && !line_ok) {
    throw ValidationError("line backend needs d = 1 and the indicator kernel");
  }
  if (requested == OperatorBackend::Auto) return line_ok ? OperatorBackend::Line : OperatorBackend::Graph;
  return requested;
}

/// Bytes needed for Delta_n on n uniform points plus `work_vectors` signals.
double estimate_bytes(OperatorBackend backend, std::size_t n, int d, double eps,
                      double rho_max, int work_vectors) {
  const double nn = static_cast<double>(n);
  double bytes = nn * 8.0 * (d + work_vectors);
  if (backend == OperatorBackend::Line) {
    bytes += nn * static_cast<double>(LineLaplacian::kBytesPerNode);
  } else {
    const double degree = std::min(nn - 1.0, nn * rho_max * unit_ball_volume(d) * std::pow(eps, d));
    bytes += nn * (degree * 12.0 + 16.0);
  }
  return bytes;
}

void check_memory(double bytes, std::size_t cap, const std::string& what) {
  if (bytes > static_cast<double>(cap)) {
    throw ValidationError(what + ": estimated memory " + format_double(bytes / (1 << 20)) +
                          " MiB exceeds the cap of " + std::to_string(cap >> 20) + " MiB");
  }
}

OperatorHandle make_operator(const PointCloud& cloud, double eps, const KernelProfile& kernel,
                             OperatorBackend backend) {
  OperatorHandle h;
  if (backend == OperatorBackend::Line) {
    h.op = std::make_unique<LineLaplacian>(cloud.coords, eps);
  } else {
    h.graph = std::make_unique<KernelGraph>(build_graph(cloud, eps, kernel));
    h.op = std::make_unique<GraphLaplacian>(*h.graph);
  }
  return h;
}

}  // namespace

TrialOutput run_trial_detailed(const TrialConfig& config) {
  if (config.d < 1) throw ValidationError("trial: d must be >= 1");
  if (config.s < 1) throw ValidationError("trial: s must be >= 1");
  if (config.n < 1) throw ValidationError("trial: n must be >= 1");
  if (!(config.tau >= 0.0)) throw ValidationError("trial: tau must be >= 0");
  if (!(config.eps > 0.0) || config.eps > 0.5) throw ValidationError("trial: eps must lie in (0, 1/2]");
  if (config.signal.dim() != config.d) throw ValidationError("trial: signal dimension differs from d");
  config.noise.validate();

  const OperatorBackend backend = resolve_backend(config.backend, config.d, config.kernel);
  check_memory(estimate_bytes(backend, config.n, config.d, config.eps, 1.0, 12),
               config.memory_cap_bytes, "trial");

  TrialOutput out;
  out.cloud = sample_cloud(DensitySpec::uniform(), config.n, config.d, config.seed);
  if (config.d == 1) sort_line_cloud(out.cloud);
  out.labels = gen_labels(config.signal, out.cloud, config.noise, config.seed);

  const OperatorHandle handle = make_operator(out.cloud, config.eps, config.kernel, backend);
  const ResolventProblem problem{*handle.op, out.labels, config.tau, config.s};
  SolveOptions options;
  options.tol = config.tol;
  options.max_iters = config.max_iters;

  ExperimentRecord& rec = out.record;
  rec.n = config.n;
  rec.d = config.d;
  rec.s = config.s;
  rec.eps = config.eps;
  rec.tau = config.tau;
  rec.seed = config.seed;
  rec.trial = config.trial;

  SolveReport report;
  try {
    report = solve_resolvent(problem, options);
  } catch (const SolverDidNotConverge& e) {
    report = e.report();
    rec.failed = true;
  }
  out.solution = std::move(report.solution);
  rec.solver_iterations = report.iterations;
  rec.solver_residual = report.final_relative_residual;

  const double sigma = sigma_eta(config.kernel, config.d);
  const FourierFunction continuum = continuum_solve_uniform(config.signal, config.tau, config.s, sigma);
  const GraphSignal continuum_at_nodes = continuum.sample(out.cloud);
  const GraphSignal g_at_nodes = config.signal.sample(out.cloud);

  rec.variance_err = distance_mu(out.solution, continuum_at_nodes);
  rec.bias_err = exact_bias(config.signal, config.tau, config.s, sigma);
  rec.total_err = distance_mu(out.solution, g_at_nodes);
  rec.consistency_err = distance_mu(continuum_at_nodes, g_at_nodes);

  out.regularizer = dirichlet_energy(*handle.op, out.solution, config.s);
  out.energy = std::pow(distance_mu(out.solution, out.labels), 2) + config.tau * out.regularizer;
  return out;
}

ExperimentRecord run_trial(const TrialConfig& config) { return run_trial_detailed(config).record; }

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("fit_line: length mismatch");
  SlopeFit fit;
  fit.points = x.size();
  if (x.size() < 2) return fit;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: x values are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.stderr_ = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

RateSweepResult rate_sweep(const RateSweepConfig& config) {
  config.schedule.validate();
  if (config.trials_per_n < 1) throw ValidationError("rate_sweep: trials_per_n must be >= 1");
  if (config.signal.dim() != config.schedule.d) {
    throw ValidationError("rate_sweep: signal dimension differs from d");
  }
  config.noise.validate();
  const auto& sched = config.schedule;
  const OperatorBackend backend = resolve_backend(config.backend, sched.d, config.kernel);
  for (std::size_t n : sched.n_grid) {
    check_memory(estimate_bytes(backend, n, sched.d, sched.eps(n), 1.0, 12),
                 config.memory_cap_bytes, "rate_sweep");
  }

  const std::size_t jobs = sched.n_grid.size() * config.trials_per_n;
  RateSweepResult result;
  result.records.resize(jobs);
  result.predicted = sched.predicted_exponent();
  std::vector<std::exception_ptr> errors(jobs);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t job = 0; job < static_cast<std::ptrdiff_t>(jobs); ++job) {
    const auto j = static_cast<std::size_t>(job);
    const std::size_t ni = j / config.trials_per_n;
    const std::size_t trial = j % config.trials_per_n;
    try {
      TrialConfig tc;
      tc.d = sched.d;
      tc.s = sched.s;
      tc.n = sched.n_grid[ni];
      tc.eps = sched.eps(tc.n);
      tc.tau = sched.tau(tc.n);
      tc.signal = config.signal;
      tc.noise = config.noise;
      tc.kernel = config.kernel;
      tc.seed = derive_seed(config.base_seed, {ni, trial});
      tc.trial = static_cast<int>(trial);
      tc.tol = config.tol;
      tc.max_iters = config.max_iters;
      tc.backend = backend;
      tc.memory_cap_bytes = config.memory_cap_bytes;
      result.records[j] = run_trial(tc);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> lx, ln, ly;
  for (std::size_t ni = 0; ni < sched.n_grid.size(); ++ni) {
    std::vector<double> total, variance;
    for (std::size_t t = 0; t < config.trials_per_n; ++t) {
      const auto& rec = result.records[ni * config.trials_per_n + t];
      if (rec.failed) {
        ++result.failed;
        continue;
      }
      total.push_back(rec.total_err);
      variance.push_back(rec.variance_err);
    }
    result.median_total_err.push_back(median(total));
    result.median_variance_err.push_back(median(variance));
    if (!total.empty() && result.median_total_err.back() > 0.0) {
      const double n = static_cast<double>(sched.n_grid[ni]);
      lx.push_back(std::log(std::log(n) / n));
      ln.push_back(std::log(n));
      ly.push_back(std::log(result.median_total_err.back()));
    }
  }
  if (ly.size() >= 2) {
    result.vs_log_ratio = fit_line(lx, ly);
    result.vs_log_n = fit_line(ln, ly);
  }
  return result;
}

RateSweepConfig default_rate_sweep(int s) {
  RateSweepConfig c;
  c.schedule.d = 1;
  c.schedule.s = s;
  c.schedule.n_grid = {1024, 2048, 4096, 8192, 16384, 32768};
  c.schedule.eps_mult = 0.3;
  c.schedule.tau_mult = 0.05;
  c.trials_per_n = 10;
  c.signal = FourierFunction(1);
  c.signal.add({1}, 1.0, 0.0).add({2}, 0.0, 0.5);
  c.noise = NoiseSpec{NoiseKind::Gaussian, 0.1};
  return c;
}

std::size_t consistency_sample_size(const ConsistencyConfig& config, double eps) {
  const int d = config.u.dim();
  const double exponent = config.n_rule_exponent.value_or(d + 4.0 * config.s);
  const double n = std::ceil(config.n_rule_k * std::log(1.0 / eps) / std::pow(eps, exponent));
  return static_cast<std::size_t>(std::max(2.0, n));
}

ConsistencyResult consistency_sweep(const ConsistencyConfig& config) {
  const int d = config.u.dim();
  if (config.s < 1) throw ValidationError("consistency_sweep: s must be >= 1");
  if (config.eps_grid.empty()) throw ValidationError("consistency_sweep: eps_grid is empty");
  if (config.trials < 1) throw ValidationError("consistency_sweep: trials must be >= 1");
  if (!(config.n_rule_k > 0.0)) throw ValidationError("consistency_sweep: n_rule_k must be positive");
  for (std::size_t i = 0; i < config.eps_grid.size(); ++i) {
    const double e = config.eps_grid[i];
    if (!(e > 0.0) || e > 0.5) throw ValidationError("consistency_sweep: eps must lie in (0, 1/2]");
    if (i > 0 && !(e < config.eps_grid[i - 1])) {
      throw ValidationError("consistency_sweep: eps_grid must be decreasing");
    }
  }
  const OperatorBackend backend = resolve_backend(config.backend, d, config.kernel);
  for (double e : config.eps_grid) {
    check_memory(estimate_bytes(backend, consistency_sample_size(config, e), d, e, 1.0, 3),
                 config.memory_cap_bytes, "consistency_sweep");
  }

  const double sigma = sigma_eta(config.kernel, d);
  const FourierFunction reference = continuum_laplacian_uniform(config.u, sigma, config.s);

  ConsistencyResult result;
  std::vector<double> lx, ly;
  for (std::size_t ei = 0; ei < config.eps_grid.size(); ++ei) {
    const double eps = config.eps_grid[ei];
    const std::size_t n = consistency_sample_size(config, eps);
    std::vector<double> errors;
    for (std::size_t t = 0; t < config.trials; ++t) {
      ConsistencyRow row;
      row.eps = eps;
      row.n = n;
      row.trial = static_cast<int>(t);
      row.seed = derive_seed(config.seed, {ei, t});

      PointCloud cloud = sample_cloud(DensitySpec::uniform(), n, d, row.seed);
      if (d == 1) sort_line_cloud(cloud);
      std::vector<double> cur = config.u.sample(cloud);
      std::vector<double> next(n);
      OperatorHandle handle;
      if (backend == OperatorBackend::Line) {
        handle.op = std::make_unique<LineLaplacian>(std::move(cloud.coords), eps);
        cloud.coords = std::vector<double>{};
      } else {
        handle = make_operator(cloud, eps, config.kernel, backend);
      }
      for (int k = 0; k < config.s; ++k) {
        handle.op->apply(cur, next);
        std::swap(cur, next);
      }
      // Reference values at the nodes, subtracted in place.
      auto node = [&](std::size_t i) -> std::span<const double> {
        if (backend == OperatorBackend::Line) {
          return static_cast<const LineLaplacian&>(*handle.op).coords().subspan(i, 1);
        }
        return cloud.point(i);
      };
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        next[ui] = cur[ui] - reference(node(ui));
      }
      row.error = norm_mu(next);
      errors.push_back(row.error);
      result.rows.push_back(row);
    }
    result.median_error.push_back(median(errors));
    if (result.median_error.back() > 0.0) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(result.median_error.back()));
    }
  }
  if (ly.size() >= 2) result.fit = fit_line(lx, ly);
  return result;
}

DegreeCheckResult degree_concentration_check(const DegreeCheckConfig& config) {
  if (config.trials < 1) throw ValidationError("degree check: trials must be >= 1");
  const double n_eps_d = static_cast<double>(config.n) * std::pow(config.eps, config.d);
  if (n_eps_d < 1.0) throw ValidationError("degree check: requires n eps^d >= 1");
  const double cap = config.cap_factor > 0.0 ? config.cap_factor : 10.0 * unit_ball_volume(config.d);

  DegreeCheckResult result;
  result.neighbor_bound = cap * n_eps_d;
  result.overall.min_normalized_degree = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < config.trials; ++t) {
    const auto seed = derive_seed(config.seed, {t});
    const PointCloud cloud = sample_cloud(DensitySpec::uniform(), config.n, config.d, seed);
    const KernelGraph graph = build_graph(cloud, config.eps, config.kernel);
    const DegreeStatistics st = degree_statistics(graph);
    result.per_trial.push_back(st);
    result.overall.min_normalized_degree =
        std::min(result.overall.min_normalized_degree, st.min_normalized_degree);
    result.overall.max_normalized_degree =
        std::max(result.overall.max_normalized_degree, st.max_normalized_degree);
    result.overall.max_neighbor_count =
        std::max(result.overall.max_neighbor_count, st.max_neighbor_count);
  }
  result.within_cap = static_cast<double>(result.overall.max_neighbor_count) <= result.neighbor_bound;
  return result;
}

AnsatzScalingResult ansatz_scaling_check(std::size_t n, int d, int s, double tau,
                                         const std::vector<double>& eps_grid,
                                         const KernelProfile& kernel, const NoiseSpec& noise,
                                         std::uint64_t seed) {
  if (eps_grid.empty()) throw ValidationError("ansatz check: eps_grid is empty");
  if (!(tau > 0.0)) throw ValidationError("ansatz check: tau must be positive");
  AnsatzScalingResult result;
  const OperatorBackend backend = resolve_backend(OperatorBackend::Auto, d, kernel);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
    const auto trial_seed = derive_seed(seed, {ei});
    PointCloud cloud = sample_cloud(DensitySpec::uniform(), n, d, trial_seed);
    if (d == 1) sort_line_cloud(cloud);
    const OperatorHandle handle = make_operator(cloud, eps_grid[ei], kernel, backend);
    const auto xi = gen_noise(n, noise, trial_seed);
    const GraphSignal w = ansatz_signal(*handle.op, xi, tau, s);
    AnsatzScalingRow row;
    row.eps = eps_grid[ei];
    row.tau = tau;
    row.ansatz_norm = norm_mu(w);
    row.scaled = row.ansatz_norm * tau / std::pow(row.eps, 2 * s);
    lo = std::min(lo, row.scaled);
    hi = std::max(hi, row.scaled);
    result.rows.push_back(row);
  }
  result.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return result;
}

void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << "n,d,s,eps,tau,seed,trial,variance_err,bias_err,total_err,consistency_err,"
        "solver_iterations,solver_residual,status\n";
  for (const auto& r : records) {
    os << r.n << ',' << r.d << ',' << r.s << ',' << format_double(r.eps) << ','
       << format_double(r.tau) << ',' << r.seed << ',' << r.trial << ','
       << format_double(r.variance_err) << ',' << format_double(r.bias_err) << ','
       << format_double(r.total_err) << ',' << format_double(r.consistency_err) << ','
       << r.solver_iterations << ',' << format_double(r.solver_residual) << ','
       << (r.failed ? "failed" : "ok") << '\n';
  }
  if (!os) throw IoError("write_records_csv: stream write failed");
}

void write_consistency_csv(std::ostream& os, const std::vector<ConsistencyRow>& rows) {
  os << "eps,n,trial,seed,error\n";
  for (const auto& r : rows) {
    os << format_double(r.eps) << ',' << r.n << ',' << r.trial << ',' << r.seed << ','
       << format_double(r.error) << '\n';
  }
  if (!os) throw IoError("write_consistency_csv: stream write failed");
}

}  // namespace polylap
