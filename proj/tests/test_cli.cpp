#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "polylap_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

int run(const std::string& args, std::string* log = nullptr) {
  const fs::path log_path = fs::temp_directory_path() / "polylap_cli_test" / "last.log";
  fs::create_directories(log_path.parent_path());
  const std::string cmd = std::string(POLYLAP_CLI_PATH) + " " + args + " > " + log_path.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  if (log) {
    std::ifstream in(log_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    *log = ss.str();
  }
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

// Returns the y and u columns of a denoise records.csv.
std::vector<std::pair<double, double>> y_and_u(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> out;
  while (std::getline(in, line)) {
    const auto c2 = line.rfind(',');
    const auto c1 = line.rfind(',', c2 - 1);
    out.emplace_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)), std::stod(line.substr(c2 + 1)));
  }
  return out;
}

}  // namespace

TEST_CASE("spectrum of the two-point graph") {
  const fs::path dir = scratch("spectrum");
  write_file(dir / "pts.csv", "x1\n0.1\n0.2\n");
  REQUIRE(run("spectrum --input=" + (dir / "pts.csv").string() + " --eps=0.2 --out " +
              (dir / "out").string()) == 0);
  const json j = json::parse(slurp(dir / "out" / "summary.json"));
  REQUIRE(j["eigenvalues"].size() == 2);
  CHECK(j["eigenvalues"][0].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(j["eigenvalues"][1].get<double>() == doctest::Approx(250.0).epsilon(1e-12));
  CHECK(fs::exists(dir / "out" / "records.csv"));
  CHECK(fs::exists(dir / "out" / "config.echo"));
}

TEST_CASE("spectrum above the dense threshold is rejected") {
  const fs::path dir = scratch("spectrum_big");
  CHECK(run("spectrum --n=3000 --eps=0.01 --dense_threshold=2000 --out " + dir.string()) != 0);
  CHECK_FALSE(fs::exists(dir / "summary.json"));
}

TEST_CASE("validation failures write nothing") {
  const fs::path dir = scratch("empty_grid");
  std::string log;
  CHECK(run("sweep --n_grid= --out " + dir.string(), &log) == 1);
  CHECK_FALSE(fs::exists(dir));
  CHECK(log.find("n_grid") != std::string::npos);

  CHECK(run("denoise --eps=0.6 --out " + dir.string()) == 1);
  CHECK(run("denoise --no_such_key=1 --out " + dir.string(), &log) == 1);
  CHECK(log.find("no_such_key") != std::string::npos);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("dry run prints the resolved parameters only") {
  const fs::path dir = scratch("dry");
  std::string log;
  CHECK(run("sweep --dry-run --seed=3 --out " + dir.string(), &log) == 0);
  CHECK_FALSE(fs::exists(dir));
  CHECK(log.find("seed = 3") != std::string::npos);
  CHECK(log.find("n_grid = ") != std::string::npos);
}

TEST_CASE("input errors") {
  const fs::path dir = scratch("bad_csv");
  write_file(dir / "bad.csv", "x1,y\n0.1,1\n0.2,abc\n");
  std::string log;
  CHECK(run("denoise --input=" + (dir / "bad.csv").string() + " --out " + (dir / "out").string(),
            &log) == 1);
  CHECK(log.find("bad.csv:3") != std::string::npos);
  CHECK(run("denoise --input=" + (dir / "missing.csv").string() + " --out " +
            (dir / "out").string()) == 3);
  CHECK(run("spectrum --config=" + (dir / "missing.cfg").string() + " --out " +
            (dir / "out").string()) == 3);
}

TEST_CASE("denoise leaves constant and unregularized labels alone") {
  const fs::path dir = scratch("denoise");
  write_file(dir / "const.csv", "0.05,2\n0.1,2\n0.3,2\n0.32,2\n0.7,2\n0.9,2\n");
  REQUIRE(run("denoise --input=" + (dir / "const.csv").string() +
              " --eps=0.2 --tau=5 --out " + (dir / "c").string()) == 0);
  for (const auto& [y, u] : y_and_u(dir / "c" / "records.csv")) CHECK(u == doctest::Approx(y).epsilon(1e-10));

  write_file(dir / "pts.csv", "0.05,1\n0.1,-1\n0.3,0.5\n0.32,2\n0.7,0\n0.9,3\n");
  REQUIRE(run("denoise --input=" + (dir / "pts.csv").string() + " --eps=0.2 --tau=0 --out " +
              (dir / "t").string()) == 0);
  for (const auto& [y, u] : y_and_u(dir / "t" / "records.csv")) CHECK(u == y);
  const json j = json::parse(slurp(dir / "t" / "summary.json"));
  CHECK(j["energy"].get<double>() == 0.0);
  CHECK(j["solver"]["converged"].get<bool>());
}

TEST_CASE("golden trial through the command line") {
  const fs::path dir = scratch("golden");
  write_file(dir / "golden.cfg",
             "[denoise]\nn = 4096\neps_mult = 1.5\ntau_mult = 1\nsignal = 1:1:0\n"
             "noise = gaussian\nnoise_level = 0.1\nseed = 20240611\n");
  REQUIRE(run("denoise --config=" + (dir / "golden.cfg").string() + " --out " + (dir / "out").string()) == 0);
  const json j = json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(j["total_err"].get<double>() == doctest::Approx(0.6255707465455419).epsilon(1e-12));
  CHECK(j["eps"].get<double>() == 0.43413081233165696);
}

TEST_CASE("degrees and consistency trivial cases") {
  const fs::path dir = scratch("degrees");
  write_file(dir / "far.csv", "0.1\n0.5\n0.9\n");
  REQUIRE(run("degrees --input=" + (dir / "far.csv").string() + " --eps=0.05 --out " +
              (dir / "out").string()) == 0);
  const json j = json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(j["min_normalized_degree"].get<double>() == 0.0);
  CHECK(j["max_normalized_degree"].get<double>() == 0.0);
  CHECK(j["max_neighbor_count"].get<int>() == 0);

  REQUIRE(run("consistency --signal=0:3:0 --eps_grid=0.3,0.2 --trials=2 --n_rule_k=1 --out " +
              (dir / "cons").string()) == 0);
  std::ifstream in(dir / "cons" / "records.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "eps,n,trial,seed,error");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 4);
}

TEST_CASE("graph command writes an edge list") {
  const fs::path dir = scratch("graph");
  write_file(dir / "pts.csv", "0.1\n0.2\n");
  REQUIRE(run("graph --input=" + (dir / "pts.csv").string() + " --eps=0.2 --out " +
              (dir / "out").string()) == 0);
  CHECK(slurp(dir / "out" / "graph.edges") == "2 1 0.2 indicator\n0 1 5\n");
  REQUIRE(run("spectrum --edges=" + (dir / "out" / "graph.edges").string() + " --out " +
              (dir / "spec").string()) == 0);
  const json j = json::parse(slurp(dir / "spec" / "summary.json"));
  CHECK(j["eigenvalues"][1].get<double>() == doctest::Approx(250.0).epsilon(1e-12));
}

TEST_CASE("sweep output is reproducible") {
  const fs::path dir = scratch("sweep");
  const std::string args = "sweep --n_grid=256,512,1024 --trials=3 --seed=11 --out ";
  REQUIRE(run(args + (dir / "a").string() + " --threads=1") == 0);
  REQUIRE(run(args + (dir / "b").string() + " --threads=3") == 0);
  CHECK(slurp(dir / "a" / "records.csv") == slurp(dir / "b" / "records.csv"));
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  const json j = json::parse(slurp(dir / "a" / "summary.json"));
  CHECK(j.contains("slope"));
  CHECK(j.contains("stderr"));
  CHECK(j["predicted"].get<double>() == doctest::Approx(0.2));
}
