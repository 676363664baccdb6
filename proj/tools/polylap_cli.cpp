#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "commands.hpp"
#include "polylap/error.hpp"
#include "polylap/format.hpp"
#include "polylap/solver.hpp"

namespace {

struct Extras {
  std::vector<std::pair<std::string, std::string>> pairs;
};

// Leftover arguments are "--key=value" or "--key value".
Extras parse_extras(const std::vector<std::string>& args) {
  Extras e;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) {
      throw polylap::ValidationError("unexpected argument '" + a + "'");
    }
    const auto eq = a.find('=');
    if (eq != std::string::npos) {
      e.pairs.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
    } else if (i + 1 < args.size()) {
      e.pairs.emplace_back(a.substr(2), args[++i]);
    } else {
      throw polylap::ValidationError("missing value for '" + a + "'");
    }
  }
  return e;
}

int apply_threads(int threads) {
  if (threads <= 0) {
    if (const char* env = std::getenv("POLYLAP_THREADS")) {
      threads = static_cast<int>(polylap::parse_int(env, "POLYLAP_THREADS"));
      if (threads <= 0) throw polylap::ValidationError("POLYLAP_THREADS must be positive");
    }
  }
  if (threads > 0) omp_set_num_threads(threads);
  return threads;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polylap: graph polyharmonic regression toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  polylap::cli::Invocation inv;
  int threads = 0;

  const char* names[][2] = {
      {"denoise", "Solve the resolvent system for one data set"},
      {"sweep", "Convergence-rate sweep over a sample-size grid"},
      {"consistency", "Pointwise consistency of Delta_n^s against the continuum operator"},
      {"degrees", "Degree concentration check"},
      {"spectrum", "Eigenvalues of Delta_n"},
      {"graph", "Build and export the eps-graph"},
  };
  std::vector<CLI::App*> subs;
  for (auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->allow_extras();
    sub->add_option("--config", config_path, "Config file (key = value, [command] sections)");
    sub->add_option("--out", inv.out_dir, "Output directory");
    sub->add_option("--threads", threads, "OpenMP threads (default: POLYLAP_THREADS or runtime)");
    sub->add_flag("--dry-run", inv.dry_run, "Print the resolved configuration and exit");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : polylap::cli::kValidation;
  }

  CLI::App* chosen = nullptr;
  for (auto* sub : subs) {
    if (sub->parsed()) chosen = sub;
  }
  inv.command = chosen->get_name();

  try {
    apply_threads(threads);
    polylap::RunConfig config(inv.command);
    if (!config_path.empty()) config.load_file(config_path);
    for (const auto& [k, v] : parse_extras(chosen->remaining()).pairs) config.set(k, v);
    polylap::cli::run_command(inv, config, std::cout);
  } catch (const polylap::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return polylap::cli::kValidation;
  } catch (const polylap::SolverDidNotConverge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return polylap::cli::kSolver;
  } catch (const polylap::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return polylap::cli::kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return polylap::cli::kIo;
  }
  return polylap::cli::kOk;
}
