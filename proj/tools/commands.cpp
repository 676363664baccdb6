#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "polylap/continuum.hpp"
#include "polylap/error.hpp"
#include "polylap/experiments.hpp"
#include "polylap/format.hpp"
#include "polylap/graph.hpp"
#include "polylap/line_laplacian.hpp"
#include "polylap/rng.hpp"
#include "polylap/solver.hpp"
#include "polylap/spectrum.hpp"

namespace polylap::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Shared parameter readers.

template <class Fn>
auto guarded(RunConfig& cfg, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    cfg.error(e.what());
    return decltype(fn()){};
  }
}

KernelProfile read_kernel(RunConfig& cfg) {
  const auto name = cfg.get_string("kernel", "indicator");
  return guarded(cfg, [&] { return KernelProfile::parse(name); });
}

NoiseSpec read_noise(RunConfig& cfg) {
  const auto kind = cfg.get_string("noise", "gaussian");
  const double level = cfg.get_double("noise_level", 0.1);
  return guarded(cfg, [&] { return NoiseSpec::parse(kind, level); });
}

FourierFunction read_signal(RunConfig& cfg, int d, const std::string& key,
                            const std::string& fallback) {
  const auto text = cfg.get_string(key, fallback);
  return guarded(cfg, [&] { return FourierFunction::parse(d, text); });
}

std::string default_signal(int d) {
  std::string k = "1";
  for (int l = 1; l < d; ++l) k += ",0";
  std::string k2 = "2";
  for (int l = 1; l < d; ++l) k2 += ",0";
  return k + ":1:0 " + k2 + ":0:0.5";
}

std::vector<int> parse_mode(RunConfig& cfg, const std::string& text) {
  std::vector<int> mode;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    mode.push_back(static_cast<int>(guarded(cfg, [&] { return parse_int(item, "density_mode"); })));
  }
  return mode;
}

DensitySpec read_density(RunConfig& cfg, int d) {
  const auto kind = cfg.get_string("density", "uniform");
  if (kind == "uniform") return DensitySpec::uniform();
  if (kind != "cosine") {
    cfg.error("unknown density '" + kind + "' (expected uniform|cosine)");
    return DensitySpec::uniform();
  }
  const double a = cfg.get_double("density_amplitude", 0.5);
  std::string fallback = "1";
  for (int l = 1; l < d; ++l) fallback += ",0";
  const auto spec = DensitySpec::cosine_bump(a, parse_mode(cfg, cfg.get_string("density_mode", fallback)));
  guarded(cfg, [&] {
    spec.validate(d);
    return 0;
  });
  return spec;
}

int read_dim(RunConfig& cfg) {
  const auto d = cfg.get_int("d", 1);
  if (d < 1 || d > 8) cfg.error("d must lie in [1, 8]");
  return static_cast<int>(std::clamp<long long>(d, 1, 8));
}

int read_order(RunConfig& cfg) {
  const auto s = cfg.get_int("s", 1);
  if (s < 1 || s > 16) cfg.error("s must lie in [1, 16]");
  return static_cast<int>(std::clamp<long long>(s, 1, 16));
}

std::size_t read_count(RunConfig& cfg, const std::string& key, long long fallback, long long min) {
  const auto v = cfg.get_int(key, fallback);
  if (v < min) cfg.error(key + " must be >= " + std::to_string(min));
  return static_cast<std::size_t>(std::max(v, min));
}

void check_eps(RunConfig& cfg, double eps) {
  if (!(eps > 0.0) || eps > 0.5) cfg.error("eps must lie in (0, 1/2], got " + format_double(eps));
}

std::size_t read_memory_cap(RunConfig& cfg) {
  const auto mb = cfg.get_int("memory_cap_mb", 3072);
  if (mb < 1) cfg.error("memory_cap_mb must be >= 1");
  return static_cast<std::size_t>(std::max<long long>(mb, 1)) << 20;
}

// ---------------------------------------------------------------------------
// Files.

struct PointTable {
  int dim = 0;
  std::vector<double> coords;
  std::vector<double> labels;
};

/// Reads rows "x1,...,xd[,y]".  An optional non-numeric first row is a header.
PointTable read_points_csv(const std::string& path, int d, bool with_labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read input file '" + path + "'");
  PointTable t;
  t.dim = d;
  const std::size_t cols = static_cast<std::size_t>(d) + (with_labels ? 1 : 0);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    std::vector<double> row;
    try {
      for (const auto& field : fields) row.push_back(parse_double(field, "csv field"));
    } catch (const ValidationError&) {
      if (first) {
        first = false;
        continue;
      }
      throw ValidationError(path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    first = false;
    if (row.size() != cols) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(cols) + " columns, found " + std::to_string(row.size()));
    }
    for (int l = 0; l < d; ++l) t.coords.push_back(row[static_cast<std::size_t>(l)]);
    if (with_labels) t.labels.push_back(row.back());
  }
  if (t.coords.empty()) throw ValidationError(path + ": no data rows");
  return t;
}

fs::path prepare_out(const Invocation& inv) {
  const fs::path out(inv.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + inv.out_dir + "': " + ec.message());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw IoError("cannot write '" + path.string() + "'");
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

ordered_json solve_json(const SolveReport& r, bool converged) {
  ordered_json j;
  j["iterations"] = r.iterations;
  j["final_relative_residual"] = r.final_relative_residual;
  j["residual_floor"] = r.residual_floor;
  j["preconditioner"] = r.preconditioner == Preconditioner::DiagonalAnsatz ? "diagonal_ansatz" : "none";
  j["converged"] = converged;
  return j;
}

ordered_json fit_json(const SlopeFit& f) {
  return {{"slope", f.slope}, {"stderr", f.stderr_}, {"intercept", f.intercept}, {"points", f.points}};
}

bool finish_or_dry_run(const Invocation& inv, RunConfig& cfg, std::ostream& log) {
  cfg.finish();
  if (inv.dry_run) {
    log << cfg.echo();
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Commands.

void cmd_denoise(const Invocation& inv, RunConfig& cfg, std::ostream& log) {
  const int d = read_dim(cfg);
  const int s = read_order(cfg);
  const auto input = cfg.get_string("input", "");
  const auto kernel = read_kernel(cfg);
  const double tol = cfg.get_double("tol", 1e-10);
  const auto max_iters = read_count(cfg, "max_iters", 0, 0);
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  if (!(tol > 0.0)) cfg.error("tol must be positive");

  // eps and tau: explicit values win over the schedule rule.
  Schedule sched;
  sched.d = d;
  sched.s = s;
  sched.eps_mult = cfg.get_double("eps_mult", sched.eps_mult);
  sched.tau_mult = cfg.get_double("tau_mult", sched.tau_mult);

  if (input.empty()) {
    const auto n = read_count(cfg, "n", 4096, 2);
    const double eps = cfg.has("eps") ? cfg.get_double("eps", 0.1) : sched.eps(n);
    const double tau = cfg.has("tau") ? cfg.get_double("tau", 0.1) : sched.tau_mult * std::pow(eps, s);
    check_eps(cfg, eps);
    if (!(tau >= 0.0)) cfg.error("tau must be >= 0");
    TrialConfig tc;
    tc.d = d;
    tc.s = s;
    tc.n = n;
    tc.eps = eps;
    tc.tau = tau;
    tc.signal = read_signal(cfg, d, "signal", default_signal(d));
    tc.noise = read_noise(cfg);
    tc.kernel = kernel;
    tc.seed = seed;
    tc.tol = tol;
    tc.max_iters = max_iters;
    const auto backend = cfg.get_string("backend", "auto");
    tc.backend = guarded(cfg, [&] { return parse_backend(backend); });
    tc.memory_cap_bytes = read_memory_cap(cfg);
    if (finish_or_dry_run(inv, cfg, log)) return;

    const TrialOutput res = run_trial_detailed(tc);
    const fs::path out = prepare_out(inv);
    std::ostringstream csv;
    csv << "x1,y,u\n";
    for (std::size_t i = 0; i < res.solution.size(); ++i) {
      const auto p = res.cloud.point(i);
      for (int l = 0; l < d; ++l) csv << format_double(p[static_cast<std::size_t>(l)]) << ',';
      csv << format_double(res.labels[i]) << ',' << format_double(res.solution[i]) << '\n';
    }
    std::string table = csv.str();
    if (d > 1) {
      std::string header;
      for (int l = 1; l <= d; ++l) header += "x" + std::to_string(l) + ",";
      table.replace(0, 3, header);
    }
    write_text(out / "records.csv", table);
    SolveReport rep;
    rep.iterations = res.record.solver_iterations;
    rep.final_relative_residual = res.record.solver_residual;
    rep.preconditioner = Preconditioner::DiagonalAnsatz;
    ordered_json j;
    j["command"] = "denoise";
    j["n"] = n;
    j["d"] = d;
    j["s"] = s;
    j["eps"] = eps;
    j["tau"] = tau;
    j["seed"] = seed;
    j["energy"] = res.energy;
    j["regularizer"] = res.regularizer;
    j["total_err"] = res.record.total_err;
    j["variance_err"] = res.record.variance_err;
    j["bias_err"] = res.record.bias_err;
    j["consistency_err"] = res.record.consistency_err;
    j["solver"] = solve_json(rep, !res.record.failed);
    write_json(out / "summary.json", j);
    write_text(out / "config.echo", cfg.echo());
    if (res.record.failed) {
      throw SolverDidNotConverge("denoise: solver did not converge", rep);
    }
    log << "denoise: n=" << n << " total_err=" << format_double(res.record.total_err) << '\n';
    return;
  }

  const auto eps_given = cfg.has("eps");
  double eps = cfg.get_double("eps", 0.1);
  const bool tau_given = cfg.has("tau");
  double tau = cfg.get_double("tau", 0.1);
  if (finish_or_dry_run(inv, cfg, log)) return;

  const PointTable table = read_points_csv(input, d, true);
  const PointCloud cloud = PointCloud::from_coords(d, table.coords);
  const std::size_t n = cloud.size();
  if (!eps_given) eps = sched.eps(n);
  if (!tau_given) tau = sched.tau_mult * std::pow(eps, s);
  if (!(eps > 0.0) || eps > 0.5) throw ValidationError("eps must lie in (0, 1/2], got " + format_double(eps));
  if (!(tau >= 0.0)) throw ValidationError("tau must be >= 0");

  const KernelGraph graph = build_graph(cloud, eps, kernel);
  const GraphLaplacian op(graph);
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iters = max_iters;
  SolveReport rep;
  bool converged = true;
  try {
    rep = solve_resolvent({op, table.labels, tau, s}, opts);
  } catch (const SolverDidNotConverge& e) {
    rep = e.report();
    converged = false;
  }
  const fs::path out = prepare_out(inv);
  std::ostringstream csv;
  for (int l = 1; l <= d; ++l) csv << 'x' << l << ',';
  csv << "y,u\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cloud.point(i);
    for (int l = 0; l < d; ++l) csv << format_double(p[static_cast<std::size_t>(l)]) << ',';
    csv << format_double(table.labels[i]) << ',' << format_double(rep.solution[i]) << '\n';
  }
  write_text(out / "records.csv", csv.str());
  const double reg = dirichlet_energy(op, rep.solution, s);
  ordered_json j;
  j["command"] = "denoise";
  j["input"] = input;
  j["n"] = n;
  j["d"] = d;
  j["s"] = s;
  j["eps"] = eps;
  j["tau"] = tau;
  j["energy"] = std::pow(distance_mu(rep.solution, table.labels), 2) + tau * reg;
  j["regularizer"] = reg;
  j["solver"] = solve_json(rep, converged);
  write_json(out / "summary.json", j);
  write_text(out / "config.echo", cfg.echo());
  if (!converged) throw SolverDidNotConverge("denoise: solver did not converge", rep);
  log << "denoise: n=" << n << " iterations=" << rep.iterations << '\n';
}

void cmd_sweep(const Invocation& inv, RunConfig& cfg, std::ostream& log) {
  RateSweepConfig sc = default_rate_sweep();
  sc.schedule.d = read_dim(cfg);
  sc.schedule.s = read_order(cfg);
  sc.schedule.n_grid = cfg.get_size_list("n_grid", sc.schedule.n_grid);
  sc.schedule.eps_mult = cfg.get_double("eps_mult", sc.schedule.eps_mult);
  sc.schedule.tau_mult = cfg.get_double("tau_mult", sc.schedule.tau_mult);
  sc.trials_per_n = read_count(cfg, "trials", static_cast<long long>(sc.trials_per_n), 1);
  sc.base_seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  sc.signal = read_signal(cfg, sc.schedule.d, "signal", default_signal(sc.schedule.d));
  sc.noise = read_noise(cfg);
  sc.kernel = read_kernel(cfg);
  sc.tol = cfg.get_double("tol", sc.tol);
  if (!(sc.tol > 0.0)) cfg.error("tol must be positive");
  sc.max_iters = read_count(cfg, "max_iters", 0, 0);
  const auto backend = cfg.get_string("backend", "auto");
  sc.backend = guarded(cfg, [&] { return parse_backend(backend); });
  sc.memory_cap_bytes = read_memory_cap(cfg);
  guarded(cfg, [&] {
    sc.schedule.validate();
    return 0;
  });
  if (finish_or_dry_run(inv, cfg, log)) return;

  const RateSweepResult res = rate_sweep(sc);
  const fs::path out = prepare_out(inv);
  std::ostringstream csv;
  write_records_csv(csv, res.records);
  write_text(out / "records.csv", csv.str());
  ordered_json j;
  j["command"] = "sweep";
  j["slope"] = res.vs_log_ratio.slope;
  j["stderr"] = res.vs_log_ratio.stderr_;
  j["predicted"] = res.predicted;
  j["fit_vs_log_ratio"] = fit_json(res.vs_log_ratio);
  j["fit_vs_log_n"] = fit_json(res.vs_log_n);
  j["n_grid"] = sc.schedule.n_grid;
  j["median_total_err"] = res.median_total_err;
  j["median_variance_err"] = res.median_variance_err;
  j["trials"] = res.records.size();
  j["failed"] = res.failed;
  j["config"] = cfg.echo();
  write_json(out / "summary.json", j);
  write_text(out / "config.echo", cfg.echo());
  log << "sweep: slope=" << format_double(res.vs_log_ratio.slope) << " +- "
      << format_double(res.vs_log_ratio.stderr_) << " (predicted " << format_double(res.predicted)
      << "), failed=" << res.failed << '\n';
}

void cmd_consistency(const Invocation& inv, RunConfig& cfg, std::ostream& log) {
  ConsistencyConfig cc;
  const int d = read_dim(cfg);
  cc.s = read_order(cfg);
  std::string k = "1";
  for (int l = 1; l < d; ++l) k += ",0";
  cc.u = read_signal(cfg, d, "signal", k + ":0:1");
  cc.eps_grid = cfg.get_double_list("eps_grid", {0.2, 0.14, 0.1, 0.07});
  cc.n_rule_k = cfg.get_double("n_rule_k", 40.0);
  if (cfg.has("n_rule_exponent")) cc.n_rule_exponent = cfg.get_double("n_rule_exponent", d + 4.0 * cc.s);
  cc.trials = read_count(cfg, "trials", 5, 1);
  cc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  cc.kernel = read_kernel(cfg);
  const auto backend = cfg.get_string("backend", "auto");
  cc.backend = guarded(cfg, [&] { return parse_backend(backend); });
  cc.memory_cap_bytes = read_memory_cap(cfg);
  if (cc.eps_grid.empty()) cfg.error("eps_grid is empty");
  for (double e : cc.eps_grid) check_eps(cfg, e);
  if (finish_or_dry_run(inv, cfg, log)) return;

  const ConsistencyResult res = consistency_sweep(cc);
  const fs::path out = prepare_out(inv);
  std::ostringstream csv;
  write_consistency_csv(csv, res.rows);
  write_text(out / "records.csv", csv.str());
  ordered_json j;
  j["command"] = "consistency";
  j["slope"] = res.fit.slope;
  j["stderr"] = res.fit.stderr_;
  j["eps_grid"] = cc.eps_grid;
  j["median_error"] = res.median_error;
  j["config"] = cfg.echo();
  write_json(out / "summary.json", j);
  write_text(out / "config.echo", cfg.echo());
  log << "consistency: slope=" << format_double(res.fit.slope) << '\n';
}

void cmd_degrees(const Invocation& inv, RunConfig& cfg, std::ostream& log) {
  DegreeCheckConfig dc;
  dc.d = read_dim(cfg);
  const auto input = cfg.get_string("input", "");
  dc.n = read_count(cfg, "n", 10000, 1);
  dc.eps = cfg.get_double("eps", 0.05);
  check_eps(cfg, dc.eps);
  dc.kernel = read_kernel(cfg);
  dc.trials = read_count(cfg, "trials", 10, 1);
  dc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  dc.cap_factor = cfg.get_double("cap_factor", 10.0 * unit_ball_volume(dc.d));
  if (finish_or_dry_run(inv, cfg, log)) return;

  DegreeCheckResult res;
  if (!input.empty()) {
    const PointCloud cloud = PointCloud::from_coords(dc.d, read_points_csv(input, dc.d, false).coords);
    const KernelGraph g = build_graph(cloud, dc.eps, dc.kernel);
    const auto st = degree_statistics(g);
    res.per_trial.push_back(st);
    res.overall = st;
    res.neighbor_bound = dc.cap_factor * static_cast<double>(cloud.size()) * std::pow(dc.eps, dc.d);
    res.within_cap = static_cast<double>(st.max_neighbor_count) <= res.neighbor_bound;
  } else {
    res = degree_concentration_check(dc);
  }
  const fs::path out = prepare_out(inv);
  std::ostringstream csv;
  csv << "trial,min_normalized_degree,max_normalized_degree,max_neighbor_count\n";
  for (std::size_t t = 0; t < res.per_trial.size(); ++t) {
    const auto& st = res.per_trial[t];
    csv << t << ',' << format_double(st.min_normalized_degree) << ','
        << format_double(st.max_normalized_degree) << ',' << st.max_neighbor_count << '\n';
  }
  write_text(out / "records.csv", csv.str());
  ordered_json j;
  j["command"] = "degrees";
  j["min_normalized_degree"] = res.overall.min_normalized_degree;
  j["max_normalized_degree"] = res.overall.max_normalized_degree;
  j["max_neighbor_count"] = res.overall.max_neighbor_count;
  j["neighbor_bound"] = res.neighbor_bound;
  j["within_cap"] = res.within_cap;
  write_json(out / "summary.json", j);
  write_text(out / "config.echo", cfg.echo());
  log << "degrees: normalized degree in [" << format_double(res.overall.min_normalized_degree)
      << ", " << format_double(res.overall.max_normalized_degree) << "]\n";
}

/// Graph source shared by `spectrum` and `graph`: an edge list, a point
/// file, or a sampled cloud.
struct GraphSource {
  std::string edges;
  std::string input;
  int d = 1;
  DensitySpec density;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double eps = 0.1;
  KernelProfile kernel;
};

GraphSource read_graph_source(RunConfig& cfg) {
  GraphSource src;
  src.edges = cfg.get_string("edges", "");
  src.input = cfg.get_string("input", "");
  if (!src.edges.empty() && !src.input.empty()) cfg.error("give at most one of edges and input");
  if (!src.edges.empty()) return src;
  src.d = read_dim(cfg);
  if (src.input.empty()) {
    src.density = read_density(cfg, src.d);
    src.n = read_count(cfg, "n", 200, 1);
    src.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  }
  src.eps = cfg.get_double("eps", 0.1);
  check_eps(cfg, src.eps);
  src.kernel = read_kernel(cfg);
  return src;
}

KernelGraph load_graph(const GraphSource& src) {
  if (!src.edges.empty()) {
    std::ifstream in(src.edges);
    if (!in) throw IoError("cannot read edge list '" + src.edges + "'");
    return read_edge_list(in);
  }
  PointCloud cloud = src.input.empty()
                         ? sample_cloud(src.density, src.n, src.d, src.seed)
                         : PointCloud::from_coords(src.d, read_points_csv(src.input, src.d, false).coords);
  return build_graph(cloud, src.eps, src.kernel);
}

void cmd_spectrum(const Invocation& inv, RunConfig& cfg, std::ostream& log) {
  const GraphSource src = read_graph_source(cfg);
  const auto threshold = read_count(cfg, "dense_threshold", static_cast<long long>(kDefaultDenseThreshold), 1);
  const auto count = read_count(cfg, "count", 0, 0);
  if (finish_or_dry_run(inv, cfg, log)) return;

  const KernelGraph graph = load_graph(src);
  ordered_json j;
  j["command"] = "spectrum";
  j["n"] = graph.size();
  j["eps"] = graph.eps();
  // Throws above the threshold; larger graphs need the matrix-free path.
  const DenseSpectrum spec = dense_spectrum(graph, threshold);
  const std::size_t m = count == 0 ? graph.size() : std::min<std::size_t>(count, graph.size());
  std::vector<double> values;
  std::ostringstream csv;
  csv << "index,eigenvalue\n";
  for (std::size_t i = 0; i < m; ++i) {
    const double v = std::max(0.0, spec.values(static_cast<Eigen::Index>(i)));
    values.push_back(v);
    csv << i << ',' << format_double(v) << '\n';
  }
  j["eigenvalues"] = values;
  const fs::path out = prepare_out(inv);
  write_text(out / "records.csv", csv.str());
  write_json(out / "summary.json", j);
  write_text(out / "config.echo", cfg.echo());
  log << "spectrum: n=" << graph.size() << " eigenvalues=" << m << '\n';
}

void cmd_graph(const Invocation& inv, RunConfig& cfg, std::ostream& log) {
  const GraphSource src = read_graph_source(cfg);
  if (finish_or_dry_run(inv, cfg, log)) return;

  const KernelGraph graph = load_graph(src);
  const auto st = degree_statistics(graph);
  const fs::path out = prepare_out(inv);
  {
    std::ofstream os(out / "graph.edges", std::ios::binary);
    write_edge_list(os, graph);
    if (!os) throw IoError("cannot write '" + (out / "graph.edges").string() + "'");
  }
  std::ostringstream csv;
  csv << "node,degree,neighbors\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    csv << i << ',' << format_double(graph.degree(i)) << ',' << graph.neighbors(i).size() << '\n';
  }
  write_text(out / "records.csv", csv.str());
  ordered_json j;
  j["command"] = "graph";
  j["n"] = graph.size();
  j["d"] = graph.dim();
  j["eps"] = graph.eps();
  j["kernel"] = std::string(graph.kernel().name());
  j["edges"] = graph.nnz() / 2;
  j["min_normalized_degree"] = st.min_normalized_degree;
  j["max_normalized_degree"] = st.max_normalized_degree;
  j["max_neighbor_count"] = st.max_neighbor_count;
  write_json(out / "summary.json", j);
  write_text(out / "config.echo", cfg.echo());
  log << "graph: n=" << graph.size() << " edges=" << graph.nnz() / 2 << '\n';
}

}  // namespace

void run_command(const Invocation& inv, RunConfig& config, std::ostream& log) {
  if (inv.command == "denoise") return cmd_denoise(inv, config, log);
  if (inv.command == "sweep") return cmd_sweep(inv, config, log);
  if (inv.command == "consistency") return cmd_consistency(inv, config, log);
  if (inv.command == "degrees") return cmd_degrees(inv, config, log);
  if (inv.command == "spectrum") return cmd_spectrum(inv, config, log);
  if (inv.command == "graph") return cmd_graph(inv, config, log);
  throw ValidationError("unknown command '" + inv.command + "'");
}

}  // namespace polylap::cli
