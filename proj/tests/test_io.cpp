#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "wcett/estimator.hpp"
#include "wcett/io.hpp"
#include "wcett/platform.hpp"

using namespace wcett;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("wcett_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("dag JSON round-trips and writes deterministically") {
  TempDir tmp;
  ProgramDag raw = make_diamond_chain(2);
  ProgramDag d(raw.vertices(), raw.edges(), raw.source(), raw.sink(), {{0, 4}});

  fs::path f1 = tmp.path / "a.json";
  fs::path f2 = tmp.path / "b.json";
  io::save_dag(d, f1);
  ProgramDag back = io::load_dag(f1);
  CHECK(back.vertices() == d.vertices());
  CHECK(back.num_edges() == d.num_edges());
  CHECK(back.source() == d.source());
  CHECK(back.sink() == d.sink());
  CHECK(back.exclusions() == d.exclusions());
  for (int e = 0; e < d.num_edges(); ++e) {
    CHECK(back.edge(e).from == d.edge(e).from);
    CHECK(back.edge(e).to == d.edge(e).to);
  }
  io::save_dag(back, f2);
  CHECK(slurp(f1) == slurp(f2));  // byte-identical re-save
}

TEST_CASE("loading a dag validates it") {
  TempDir tmp;
  fs::path f = tmp.path / "bad.json";
  std::ofstream(f) << R"({"vertices":[0,1],"edges":[{"id":0,"from":0,"to":1},)"
                      R"({"id":1,"from":1,"to":0}],"source":0,"sink":1})";
  CHECK_THROWS_AS(io::load_dag(f), CyclicGraph);
}

TEST_CASE("malformed JSON and missing files raise IoError") {
  TempDir tmp;
  fs::path f = tmp.path / "broken.json";
  std::ofstream(f) << "{not json";
  CHECK_THROWS_AS(io::load_dag(f), IoError);
  CHECK_THROWS_AS(io::load_dag(tmp.path / "absent.json"), IoError);
  CHECK_THROWS_AS(io::load_platform(tmp.path / "absent.json"), IoError);
}

TEST_CASE("platform JSON round-trips both laws") {
  TempDir tmp;
  PlatformModel p;
  p.true_weights = {1.5, 2.0, 3.25};
  p.mu_max = 0.75;
  p.law = PerturbationLaw::Adversarial;
  p.seed = 99;
  p.adversarial.emplace_back(std::vector<int>{0, 2}, 0.5);

  fs::path f = tmp.path / "platform.json";
  io::save_platform(p, f);
  PlatformModel back = io::load_platform(f);
  CHECK(back.true_weights == p.true_weights);
  CHECK(back.mu_max == p.mu_max);
  CHECK(back.law == p.law);
  CHECK(back.seed == p.seed);
  REQUIRE(back.adversarial.size() == 1);
  CHECK(back.adversarial[0].first == std::vector<int>{0, 2});
  CHECK(back.adversarial[0].second == 0.5);

  p.law = PerturbationLaw::Uniform;
  p.adversarial.clear();
  io::save_platform(p, f);
  CHECK(io::load_platform(f).law == PerturbationLaw::Uniform);
}

TEST_CASE("measurement CSV round-trips with the documented header") {
  TempDir tmp;
  ProgramDag d = make_diamond_chain(2);
  MeasurementSet ms;
  ms.upsert(PathVec(d, {0, 1, 4, 5}), 10.5);
  ms.upsert(PathVec(d, {2, 3, 6, 7}), 12.125);

  fs::path f = tmp.path / "m.csv";
  io::save_measurements(ms, f);
  std::string text = slurp(f);
  CHECK(text.rfind("path;length\n", 0) == 0);
  CHECK(text.find("0,1,4,5;10.5\n") != std::string::npos);

  MeasurementSet back = io::load_measurements(f, d);
  REQUIRE(back.size() == 2);
  CHECK(*back.length_of(PathVec(d, {0, 1, 4, 5})) == doctest::Approx(10.5));
  CHECK(*back.length_of(PathVec(d, {2, 3, 6, 7})) == doctest::Approx(12.125));

  std::ofstream(f) << "wrong header\n";
  CHECK_THROWS_AS(io::load_measurements(f, d), IoError);
  std::ofstream(f) << "path;length\n0,1,4,5;ten\n";
  CHECK_THROWS_AS(io::load_measurements(f, d), IoError);
}

TEST_CASE("basis JSON round-trips") {
  TempDir tmp;
  ProgramDag d = make_diamond_chain(2);
  std::vector<PathVec> paths = {PathVec(d, {0, 1, 4, 5}), PathVec(d, {2, 3, 4, 5})};
  fs::path f = tmp.path / "basis.json";
  io::save_basis(paths, 2, f);
  std::vector<PathVec> back = io::load_basis(f, d);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == paths[0]);
  CHECK(back[1] == paths[1]);
}

TEST_CASE("report JSON carries the documented fields and zeroed times") {
  TempDir tmp;
  ProgramDag d = make_diamond_chain(1);
  EstimateReport rep;
  rep.k = 1.25;
  rep.D = 0.5;
  rep.band_halfwidth = 1.25;
  rep.ranked.push_back(RankedPath{PathVec(d, {0, 1}), 7.5, 7.25});
  rep.ranked.push_back(RankedPath{PathVec(d, {2, 3}), 6.0, std::nullopt});
  rep.iterations.push_back(IterationRecord{2.0, 0.125});

  fs::path f = tmp.path / "report.json";
  io::save_report(rep, f, /*emit_times=*/false);
  std::string text = slurp(f);
  CHECK(text.find("\"k\": 1.25") != std::string::npos);
  CHECK(text.find("\"D\": 0.5") != std::string::npos);
  CHECK(text.find("\"band\": 1.25") != std::string::npos);
  CHECK(text.find("\"measured\": null") != std::string::npos);
  CHECK(text.find("\"seconds\": 0.0") != std::string::npos);
  CHECK(text.find("0.125") == std::string::npos);

  io::save_report(rep, f, /*emit_times=*/true);
  CHECK(slurp(f).find("0.125") != std::string::npos);
}

TEST_CASE("format_length keeps at most six fraction digits") {
  CHECK(io::format_length(10.0) == "10");
  CHECK(io::format_length(10.5) == "10.5");
  CHECK(io::format_length(0.1234567) == "0.123457");
  CHECK(io::format_length(-3.25) == "-3.25");
  CHECK(io::format_length(0.0) == "0");
  CHECK(io::format_length(100.000001) == "100.000001");
}

TEST_CASE("file_checksum is stable and content-sensitive") {
  TempDir tmp;
  fs::path a = tmp.path / "a.txt";
  fs::path b = tmp.path / "b.txt";
  std::ofstream(a) << "hello";
  std::ofstream(b) << "hello";
  CHECK(io::file_checksum(a) == io::file_checksum(b));
  std::ofstream(b) << "hellp";
  CHECK(io::file_checksum(a) != io::file_checksum(b));
  CHECK(io::file_checksum(a).size() == 16);
}
