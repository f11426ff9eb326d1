#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

#ifndef SOSLASSO_CLI_PATH
#error "SOSLASSO_CLI_PATH must be defined"
#endif

const char* cli_path() { return SOSLASSO_CLI_PATH; }

int run(const std::string& args) {
  const std::string command = std::string(cli_path()) + " " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("soslasso_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int counter() {
    static int value = 0;
    return value++;
  }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("gen is deterministic and valid") {
  TempDir dir;
  const std::string base = "gen --p 14 --B 6 --shift 4 --T 2 --n 10 --k-active 1 "
                           "--alpha 0.5 --sigma 0.1 --seed 7 --out ";
  REQUIRE(run(base + dir.str() + "/a") == 0);
  REQUIRE(run(base + dir.str() + "/b") == 0);
  for (const char* name : {"groups.json", "truth.csv", "task_000.csv", "task_001.csv",
                           "manifest.json"}) {
    CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
  }
  // three chain groups materialized
  const std::string groups = slurp(dir.path / "a" / "groups.json");
  CHECK(groups.find("[8, 9, 10, 11, 12, 13]") != std::string::npos);

  // different seed changes the data
  REQUIRE(run("gen --p 14 --B 6 --shift 4 --T 2 --n 10 --k-active 1 --alpha 0.5 "
              "--sigma 0.1 --seed 8 --out " +
              dir.str() + "/c") == 0);
  CHECK(slurp(dir.path / "a" / "truth.csv") != slurp(dir.path / "c" / "truth.csv"));

  // zero active groups give an all-zero truth
  REQUIRE(run("gen --p 14 --B 6 --shift 4 --T 1 --n 5 --k-active 0 --alpha 0.5 "
              "--sigma 0.1 --seed 1 --out " +
              dir.str() + "/z") == 0);
  const std::string truth = slurp(dir.path / "z" / "truth.csv");
  std::stringstream stream(truth);
  std::string line;
  while (std::getline(stream, line)) CHECK(line == "0");

  // invalid geometry exits 1
  CHECK(run("gen --p 15 --B 6 --shift 4 --out " + dir.str() + "/bad") == 1);
}

TEST_CASE("fit and path produce the documented outputs") {
  TempDir dir;
  REQUIRE(run("gen --p 22 --B 6 --shift 4 --T 2 --n 18 --k-active 1 --alpha 0.5 "
              "--sigma 0.05 --seed 3 --out " +
              dir.str()) == 0);
  const std::string manifest = (dir.path / "manifest.json").string();

  SUBCASE("basic fit") {
    const std::string json_out = (dir.path / "result.json").string();
    const std::string csv_out = (dir.path / "coefficients.csv").string();
    REQUIRE(run("fit --problem " + manifest + " --lambda 0.005 --out-json " + json_out +
                " --out-csv " + csv_out) == 0);
    const std::string result = slurp(json_out);
    CHECK(result.find("\"converged\": true") != std::string::npos);
    CHECK(result.find("\"x_hat\"") != std::string::npos);
    // p rows, T columns
    const std::string csv = slurp(csv_out);
    int rows = 0, commas = 0;
    for (char ch : csv) {
      if (ch == '\n') ++rows;
      if (ch == ',') ++commas;
    }
    CHECK(rows == 22);
    CHECK(commas == 22);  // one comma per row for T = 2
  }

  SUBCASE("a lambda above the threshold yields all zeros") {
    const std::string csv_out = (dir.path / "zeros.csv").string();
    REQUIRE(run("fit --problem " + manifest + " --lambda 100 --out-json " +
                (dir.path / "r.json").string() + " --out-csv " + csv_out) == 0);
    std::stringstream stream(slurp(csv_out));
    std::string line;
    while (std::getline(stream, line)) CHECK(line == "0,0");
  }

  SUBCASE("missing groups file exits 1") {
    CHECK(run("fit --problem " + manifest + " --groups " + dir.str() +
              "/nope.json --lambda 0.1") == 1);
  }

  SUBCASE("missing lambda exits 1") {
    CHECK(run("fit --problem " + manifest) == 1);
  }

  SUBCASE("path with grid and mse column") {
    const std::string out = (dir.path / "path.csv").string();
    REQUIRE(run("path --problem " + manifest + " --grid 6:0.01 --out " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("lambda,objective,nnz,selected_groups_count,mse\n", 0) == 0);
    int rows = -1;  // header
    for (char ch : csv)
      if (ch == '\n') ++rows;
    CHECK(rows == 6);
  }
}

TEST_CASE("check subcommand writes a report and reflects the outcome") {
  TempDir dir;
  const std::string out = (dir.path / "check_report.json").string();
  REQUIRE(run("check --suite norm --trials 30 --seed 1 --out " + out) == 0);
  const std::string report = slurp(out);
  CHECK(report.find("\"suite\": \"norm\"") != std::string::npos);
  CHECK(report.find("\"passed\": true") != std::string::npos);
  CHECK(run("check --suite nonsense --trials 5 --out " + out) == 1);
}

TEST_CASE("bench outputs are deterministic across runs and threads") {
  TempDir dir;
  const std::string base = "bench --profile desk --sweep noise --values 0.1 --trials 1 "
                           "--methods soslasso --seed 4 --out ";
  const std::string a = (dir.path / "a.csv").string();
  const std::string b = (dir.path / "b.csv").string();
  const std::string c = (dir.path / "c.csv").string();
  const std::string d = (dir.path / "d.csv").string();
  REQUIRE(run(base + a) == 0);
  REQUIRE(run(base + b) == 0);
  REQUIRE(run("--threads 3 " + base + c) == 0);
  {
    // thread count from the environment fallback
    const std::string command = "SOSLASSO_THREADS=2 " + std::string(cli_path()) + " " + base + d +
                                " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
  }
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK(slurp(a) == slurp(d));
  CHECK(slurp(dir.path / "a.summary.json") == slurp(dir.path / "b.summary.json"));
  CHECK(slurp(dir.path / "a.summary.json") == slurp(dir.path / "c.summary.json"));
  CHECK(slurp(a).rfind("sweep_value,method,trial,lambda_selected,mse\n", 0) == 0);
}
