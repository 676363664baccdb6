// Acceptance run: one PASS/FAIL line per criterion.  Exit status is the
// number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polylap/continuum.hpp"
#include "polylap/experiments.hpp"
#include "polylap/geometry.hpp"
#include "polylap/graph.hpp"
#include "polylap/rng.hpp"
#include "polylap/signal.hpp"
#include "polylap/solver.hpp"
#include "polylap/spectrum.hpp"

using namespace polylap;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() * 2.0 - 1.0;
  return v;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome oracle_equivalence() {
  CounterRng rng(101, 0);
  const double taus[] = {0.01, 1.0, 100.0};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = 1 + t % 2;
    const int s = 1 + (t / 2) % 3;
    const double tau = taus[t % 3];
    const std::size_t n = 80 + static_cast<std::size_t>(rng.uniform() * 220);
    const double eps = d == 1 ? 0.08 + 0.2 * rng.uniform() : 0.15 + 0.2 * rng.uniform();
    const auto cloud = sample_cloud(DensitySpec::uniform(), n, d, 7000 + t);
    const auto g = build_graph(cloud, eps, KernelProfile::indicator());
    const auto y = random_signal(n, 8000 + t);
    const auto cg = solve_resolvent({GraphLaplacian(g), y, tau, s});
    const auto dense = solve_resolvent_dense(g, y, tau, s);
    worst = std::max(worst, distance_mu(cg.solution, dense));
  }
  return {worst <= 1e-8, "max L2 gap " + fmt("%.2e", worst)};
}

Outcome non_expansiveness() {
  CounterRng rng(202, 0);
  const double taus[] = {0.0, 0.01, 1.0, 100.0};
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int s = 1 + t % 3;
    const int d = 1 + (t / 3) % 2;
    const std::size_t n = 50 + static_cast<std::size_t>(rng.uniform() * 250);
    const auto cloud = sample_cloud(DensitySpec::cosine_bump(0.4, std::vector<int>(d, 1)), n, d, 9000 + t);
    const auto g = build_graph(cloud, d == 1 ? 0.12 : 0.25, KernelProfile::indicator());
    const auto y = random_signal(n, 9500 + t);
    const auto rep = solve_resolvent({GraphLaplacian(g), y, taus[t % 4], s});
    worst = std::max(worst, norm_mu(rep.solution) / norm_mu(y));
  }
  return {worst <= 1 + 1e-8, "max ||u||/||y|| " + fmt("%.12f", worst)};
}

Outcome bias_bounds() {
  const auto g = FourierFunction::parse(1, "1:1:0 2:0:0.5");
  const double sigma = sigma_eta(KernelProfile::indicator(), 1);
  bool ok = std::abs(sigma - 2.0 / 3.0) <= 1e-14;
  double worst_ratio = 0.0, worst_half = 0.0;
  for (int s : {1, 2}) {
    for (double tau : {1e-3, 1e-2, 1e-1}) {
      const double bias = exact_bias(g, tau, s, sigma);
      const double lap_norm = continuum_laplacian_uniform(g, sigma, s).l2_norm_uniform();
      ok = ok && bias <= tau * lap_norm;
      worst_ratio = std::max(worst_ratio, bias / (tau * lap_norm));
      const auto diff = g - continuum_solve_uniform(g, tau, s, sigma);
      const double lhs = continuum_laplacian_uniform(diff, sigma, 0.5 * s).l2_norm_uniform();
      const double rhs = std::sqrt(tau / 2) * lap_norm;
      ok = ok && lhs <= rhs;
      worst_half = std::max(worst_half, lhs / rhs);
    }
  }
  return {ok, "max bias/bound " + fmt("%.4f", worst_ratio) + ", max half-power ratio " +
                  fmt("%.4f", worst_half)};
}

Outcome consistency_slope() {
  ConsistencyConfig cc;
  cc.u = FourierFunction::parse(1, "1:0:1");
  cc.eps_grid = {0.2, 0.14, 0.1, 0.07};
  cc.n_rule_k = 40.0;
  cc.trials = 5;
  cc.seed = 404;
  const auto res = consistency_sweep(cc);
  std::ostringstream os;
  os << "slope " << fmt("%.3f", res.fit.slope) << " (band [0.6, 1.4]), medians";
  for (double m : res.median_error) os << ' ' << fmt("%.3g", m);
  return {res.fit.slope >= 0.6 && res.fit.slope <= 1.4, os.str()};
}

Outcome rate_sweep_slope() {
  const auto res = rate_sweep(default_rate_sweep(1));
  const double slope = res.vs_log_ratio.slope;
  std::ostringstream os;
  os << "slope " << fmt("%.4f", slope) << " +- " << fmt("%.4f", res.vs_log_ratio.stderr_)
     << " (predicted " << fmt("%.2f", res.predicted) << "), failed trials " << res.failed;
  return {slope >= 0.10 && slope <= 0.30 && res.failed == 0, os.str()};
}

Outcome invariant_suites() {
  std::vector<std::string> broken;
  // Laplacian symmetry, PSD, nullspace.
  for (int d = 1; d <= 3; ++d) {
    const auto cloud = sample_cloud(DensitySpec::uniform(), 400, d, 60 + d);
    const auto g = build_graph(cloud, d == 1 ? 0.05 : 0.25, KernelProfile::indicator());
    const auto u = random_signal(400, 61), w = random_signal(400, 62);
    const auto lu = apply_laplacian(g, u), lw = apply_laplacian(g, w);
    const double sym = std::abs(dot_mu(lu, w) - dot_mu(u, lw));
    if (sym > 1e-9 * (1 + std::abs(dot_mu(lu, w)))) broken.push_back("symmetry");
    if (dot_mu(lu, u) < -1e-9) broken.push_back("psd");
    const auto l1 = apply_laplacian(g, std::vector<double>(400, 1.0));
    if (norm_mu(l1) > 1e-9) broken.push_back("nullspace");

    // Cell list vs brute force edge sets.
    const auto b = build_graph_brute_force(cloud, g.eps(), g.kernel());
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::set<std::uint32_t> a(g.neighbors(i).begin(), g.neighbors(i).end());
      std::set<std::uint32_t> c(b.neighbors(i).begin(), b.neighbors(i).end());
      if (a != c) {
        broken.push_back("cell list d=" + std::to_string(d));
        break;
      }
    }

    // Dirichlet energy as a double sum over edges.
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto nb = g.neighbors(i);
      const auto wt = g.weights(i);
      for (std::size_t k = 0; k < nb.size(); ++k) sum += wt[k] * std::pow(u[i] - u[nb[k]], 2);
    }
    const double n = 400.0;
    const double want = sum / (n * n * g.eps() * g.eps());
    const double got = dirichlet_energy(g, u, 1);
    if (std::abs(got - want) > 1e-10 * std::abs(want)) broken.push_back("dirichlet d=" + std::to_string(d));
  }
  // Kernel moments.
  const double sig[] = {2.0 / 3.0, pi / 4, 4 * pi / 15};
  for (int d = 1; d <= 3; ++d) {
    if (std::abs(sigma_eta(KernelProfile::indicator(), d) - sig[d - 1]) > 1e-10 * sig[d - 1]) {
      broken.push_back("sigma_eta d=" + std::to_string(d));
    }
  }
  // Nonlocal operator against its closed form.
  auto vcos = [](std::span<const double> x) { return std::cos(2 * pi * x[0]); };
  for (double eps : {0.3, 0.1, 0.03}) {
    const double want = nonlocal_laplacian_cosine_1d(eps);
    const double got = nonlocal_laplacian(vcos, DensitySpec::uniform(), eps, KernelProfile::indicator(),
                                          std::vector<double>{0.0}, 64);
    if (std::abs(got - want) > 1e-6 * std::abs(want)) broken.push_back("nonlocal eps=" + fmt("%g", eps));
  }
  // Pseudo-spectral exactness on band-limited data.
  const double sigma = 2.0 / 3.0;
  const auto rho = GridField::sample(1, 32, [](std::span<const double> x) { return 1 + 0.5 * std::cos(2 * pi * x[0]); });
  const auto phi = GridField::sample(1, 32, [](std::span<const double> x) { return std::sin(2 * pi * x[0]); });
  const auto out = pseudo_spectral_continuum_laplacian(phi, rho, sigma);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = out.point(i)[0];
    const double want = 4 * pi * pi * sigma * std::sin(2 * pi * x) * (1 + 1.5 * std::cos(2 * pi * x));
    if (std::abs(out.values[i] - want) > 1e-9) {
      broken.push_back("pseudo-spectral");
      break;
    }
  }
  if (broken.empty()) return {true, "all invariant checks hold"};
  std::string msg = "broken:";
  for (const auto& b : broken) msg += " " + b;
  return {false, msg};
}

Outcome degree_concentration() {
  DegreeCheckConfig dc;
  dc.n = 10000;
  dc.eps = 0.05;
  dc.trials = 10;
  dc.seed = 707;
  const auto res = degree_concentration_check(dc);
  const double lo = res.overall.min_normalized_degree, hi = res.overall.max_normalized_degree;
  const auto ans = ansatz_scaling_check(4000, 1, 1, 1.0, {0.2, 0.14, 0.1, 0.07, 0.05},
                                        KernelProfile::indicator(), {NoiseKind::Gaussian, 1.0}, 708);
  const bool ok = lo >= 1.0 && hi <= 3.0 && res.within_cap && ans.spread < 5.0;
  return {ok, "normalized degrees in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) +
                  "], ansatz spread " + fmt("%.4f", ans.spread)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "polylap_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  std::string files[2];
  for (int r = 0; r < 2; ++r) {
    const fs::path out = root / ("run" + std::to_string(r));
    const std::string cmd = std::string(POLYLAP_CLI_PATH) + " sweep --seed=808 --out " + out.string() +
                            " > " + (root / "log.txt").string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) return {false, "sweep run " + std::to_string(r) + " failed"};
    files[r] = slurp(out / "records.csv");
  }
  const bool same = !files[0].empty() && files[0] == files[1];
  return {same, std::to_string(files[0].size()) + " bytes, " + (same ? "identical" : "different")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 30, oracle_equivalence},
      {2, "resolvent non-expansiveness", 60, non_expansiveness},
      {3, "continuum bias bounds", 1, bias_bounds},
      {4, "poly-Laplacian consistency slope", 600, consistency_slope},
      {5, "rate sweep slope", 1800, rate_sweep_slope},
      {6, "invariant suites", 120, invariant_suites},
      {7, "degree concentration", 60, degree_concentration},
      {8, "end-to-end reproducibility", 1800, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d: %s - %s: %s [%.2f s of %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed;
}
