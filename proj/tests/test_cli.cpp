// Integration tests for the command-line tool. The binary path arrives as
// the last command-line argument (wired through ctest).

#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_work;

int run(const std::string& args) {
  std::string cmd = "\"" + g_cli + "\" " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_capture(const std::string& args, const fs::path& stdout_file) {
  std::string cmd =
      "\"" + g_cli + "\" " + args + " >\"" + stdout_file.string() + "\" 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("gen writes the benchmark pair and prints the count table") {
  fs::path out = g_work / "gen3";
  fs::path log = g_work / "gen3.log";
  REQUIRE(run_capture("gen --family diamond --n 3 --mu-max 1 --seed 5 --out " + q(out),
                      log) == 0);
  CHECK(fs::exists(out / "dag.json"));
  CHECK(fs::exists(out / "platform.json"));
  CHECK(fs::exists(out / "manifest.json"));
  std::string text = slurp(log);
  CHECK(text.find("# Nodes  # Edges  # Paths") != std::string::npos);
  CHECK(text.find("10  12  8") != std::string::npos);
}

TEST_CASE("gen rejects bad configuration with exit 2") {
  CHECK(run("gen --family hexagon --out " + q(g_work / "bad")) == 2);
  CHECK(run("gen --family diamond --n 0 --out " + q(g_work / "bad")) == 2);
  CHECK(run("gen") == 2);  // missing required --out
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("missing input files exit with the IO code") {
  CHECK(run("estimate --dag /nonexistent/dag.json --platform /nonexistent/p.json"
            " --out " +
            q(g_work / "io")) == 4);
  CHECK(run("measure --dag /nonexistent/dag.json --platform /nonexistent/p.json"
            " --out " +
            q(g_work / "io")) == 4);
}

TEST_CASE("estimate needs exactly one input source") {
  fs::path out = g_work / "src";
  REQUIRE(run("gen --family diamond --n 2 --seed 1 --out " + q(out)) == 0);
  CHECK(run("estimate --dag " + q(out / "dag.json") + " --out " + q(g_work / "x")) ==
        2);
  CHECK(run("estimate --dag " + q(out / "dag.json") + " --platform " +
            q(out / "platform.json") + " --measurements " + q(out / "dag.json") +
            " --out " + q(g_work / "x")) == 2);
}

TEST_CASE("the full pipeline runs and reruns byte-identically") {
  fs::path bench = g_work / "bench";
  REQUIRE(run("gen --family diamond --n 3 --mu-max 1 --seed 9 --out " + q(bench)) == 0);

  fs::path meas = g_work / "meas";
  REQUIRE(run("measure --dag " + q(bench / "dag.json") + " --platform " +
              q(bench / "platform.json") + " --out " + q(meas)) == 0);
  CHECK(fs::exists(meas / "measurements.csv"));
  CHECK(fs::exists(meas / "basis.json"));

  fs::path est1 = g_work / "est1";
  fs::path est2 = g_work / "est2";
  std::string est_args = "estimate --dag " + q(bench / "dag.json") +
                         " --measurements " + q(meas / "measurements.csv") +
                         " --accuracy 2 --top 2 --out ";
  REQUIRE(run(est_args + q(est1)) == 0);
  REQUIRE(run(est_args + q(est2)) == 0);
  CHECK(slurp(est1 / "report.json") == slurp(est2 / "report.json"));
  CHECK(slurp(est1 / "report.csv") == slurp(est2 / "report.csv"));
  CHECK(slurp(est1 / "manifest.json") == slurp(est2 / "manifest.json"));

  // report CSV: header + one row per ranked path
  std::string csv = slurp(est1 / "report.csv");
  CHECK(csv.rfind("rank,predicted,band,measured,seconds\n", 0) == 0);

  // manifest checksums correspond to the files on disk
  auto manifest = nlohmann::json::parse(slurp(est1 / "manifest.json"));
  CHECK(manifest.at("command") == "estimate");
  CHECK(manifest.at("files").size() == 2);
}

TEST_CASE("estimate in platform mode emits K rows with measured lengths") {
  fs::path bench = g_work / "bench_p";
  REQUIRE(run("gen --family diamond --n 3 --mu-max 1 --seed 4 --out " + q(bench)) == 0);
  fs::path est = g_work / "est_p";
  REQUIRE(run("estimate --dag " + q(bench / "dag.json") + " --platform " +
              q(bench / "platform.json") + " --accuracy 1 --top 3 --out " + q(est)) ==
          0);
  std::string csv = slurp(est / "report.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
  auto report = nlohmann::json::parse(slurp(est / "report.json"));
  REQUIRE(report.at("paths").size() == 3);
  for (const auto& row : report.at("paths")) CHECK_FALSE(row.at("measured").is_null());
}

TEST_CASE("topk is an estimate alias with a larger default K") {
  fs::path bench = g_work / "bench_t";
  REQUIRE(run("gen --family diamond --n 3 --seed 2 --out " + q(bench)) == 0);
  fs::path est = g_work / "est_t";
  REQUIRE(run("topk --dag " + q(bench / "dag.json") + " --platform " +
              q(bench / "platform.json") + " --accuracy 1 --out " + q(est)) == 0);
  auto report = nlohmann::json::parse(slurp(est / "report.json"));
  CHECK(report.at("paths").size() == 5);
}

TEST_CASE("basis emits the refined set plus iteration data") {
  fs::path bench = g_work / "bench_b";
  REQUIRE(run("gen --family diamond --n 3 --seed 3 --out " + q(bench)) == 0);
  fs::path out = g_work / "basis_b";
  REQUIRE(run("basis --dag " + q(bench / "dag.json") + " --accuracy 1 --out " +
              q(out)) == 0);
  auto basis = nlohmann::json::parse(slurp(out / "basis.json"));
  CHECK(basis.at("paths").size() == 8);  // A = 1 collects every path
  std::string iters = slurp(out / "iterations.csv");
  CHECK(iters.rfind("iteration,k,seconds\n", 0) == 0);
  std::string summary = slurp(out / "summary.csv");
  CHECK(summary.rfind("desired_k,actual_k,num_paths,seconds\n", 0) == 0);
  CHECK(summary.find("1,1,8,0") != std::string::npos);
}

TEST_CASE("perturb writes level,D rows and tolerates an empty sweep") {
  fs::path bench = g_work / "bench_s";
  REQUIRE(run("gen --family diamond --n 2 --seed 6 --out " + q(bench)) == 0);
  fs::path meas = g_work / "meas_s";
  REQUIRE(run("measure --dag " + q(bench / "dag.json") + " --platform " +
              q(bench / "platform.json") + " --out " + q(meas)) == 0);

  fs::path out = g_work / "sweep";
  REQUIRE(run("perturb --dag " + q(bench / "dag.json") + " --measurements " +
              q(meas / "measurements.csv") + " --levels 0,10 --trials 2 --seed 1 --out " +
              q(out)) == 0);
  std::string csv = slurp(out / "perturb.csv");
  CHECK(csv.rfind("level,D\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 2 levels x 2 trials
  // level 0 rows keep the self-consistent D = 0
  CHECK(csv.find("0,0\n") != std::string::npos);

  fs::path empty = g_work / "sweep_empty";
  REQUIRE(run("perturb --dag " + q(bench / "dag.json") + " --measurements " +
              q(meas / "measurements.csv") + " --out " + q(empty)) == 0);
  CHECK(slurp(empty / "perturb.csv") == "level,D\n");
}

TEST_CASE("compare reports both methods on one instance") {
  fs::path bench = g_work / "bench_c";
  REQUIRE(run("gen --family diamond --n 3 --mu-max 0 --seed 8 --out " + q(bench)) == 0);
  fs::path out = g_work / "cmp";
  REQUIRE(run("compare --dag " + q(bench / "dag.json") + " --platform " +
              q(bench / "platform.json") + " --out " + q(out)) == 0);
  std::string csv = slurp(out / "compare.csv");
  CHECK(csv.rfind("basis_size,baseline_accuracy,k,our_accuracy,baseline_predicted,"
                  "baseline_measured,our_predicted,our_measured\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(slurp(out / "summary.csv").rfind("fraction_2k_le_2B\n", 0) == 0);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli [doctest options] <path-to-cli>\n");
    return 1;
  }
  g_cli = argv[argc - 1];
  g_work = fs::temp_directory_path() / ("wcett_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(g_work);

  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv);
  int rc = ctx.run();
  fs::remove_all(g_work);
  return rc;
}
