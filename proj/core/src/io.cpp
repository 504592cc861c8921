#include "wcett/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wcett::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(file.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  out << text;
}

void write_json(const std::filesystem::path& file, const ordered_json& j) {
  write_file(file, j.dump(2) + "\n");
}

}  // namespace

ProgramDag load_dag(const std::filesystem::path& file) {
  ordered_json j = parse_file(file);
  try {
    std::vector<int> vertices = j.at("vertices").get<std::vector<int>>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back(Edge{e.at("id").get<int>(), e.at("from").get<int>(),
                           e.at("to").get<int>()});
    }
    std::vector<std::vector<int>> exclusions;
    if (j.contains("exclusions")) {
      exclusions = j.at("exclusions").get<std::vector<std::vector<int>>>();
    }
    ProgramDag dag(std::move(vertices), std::move(edges), j.at("source").get<int>(),
                   j.at("sink").get<int>(), std::move(exclusions));
    validate(dag);
    return dag;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(file.string() + ": " + e.what());
  }
}

void save_dag(const ProgramDag& dag, const std::filesystem::path& file) {
  ordered_json j;
  j["vertices"] = dag.vertices();
  j["edges"] = ordered_json::array();
  for (const Edge& e : dag.edges()) {
    j["edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}});
  }
  j["source"] = dag.source();
  j["sink"] = dag.sink();
  j["exclusions"] = dag.exclusions();
  write_json(file, j);
}

PlatformModel load_platform(const std::filesystem::path& file) {
  ordered_json j = parse_file(file);
  try {
    PlatformModel p;
    p.true_weights = j.at("weights").get<EdgeWeights>();
    p.mu_max = j.at("mu_max").get<double>();
    std::string law = j.at("law").get<std::string>();
    if (law == "uniform") {
      p.law = PerturbationLaw::Uniform;
    } else if (law == "adversarial") {
      p.law = PerturbationLaw::Adversarial;
    } else {
      throw IoError(file.string() + ": unknown law '" + law + "'");
    }
    p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("adversarial")) {
      for (const auto& entry : j.at("adversarial")) {
        p.adversarial.emplace_back(entry.at("path").get<std::vector<int>>(),
                                   entry.at("d").get<double>());
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(file.string() + ": " + e.what());
  }
}

void save_platform(const PlatformModel& platform, const std::filesystem::path& file) {
  ordered_json j;
  j["weights"] = platform.true_weights;
  j["mu_max"] = platform.mu_max;
  j["law"] = platform.law == PerturbationLaw::Uniform ? "uniform" : "adversarial";
  j["seed"] = platform.seed;
  if (!platform.adversarial.empty()) {
    j["adversarial"] = ordered_json::array();
    for (const auto& [path, d] : platform.adversarial) {
      j["adversarial"].push_back({{"path", path}, {"d", d}});
    }
  }
  write_json(file, j);
}

MeasurementSet load_measurements(const std::filesystem::path& file, const ProgramDag& dag) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != "path;length") {
    throw IoError(file.string() + ": expected header 'path;length'");
  }
  MeasurementSet set;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto semi = line.find(';');
    if (semi == std::string::npos) throw IoError(file.string() + ": malformed row " + line);
    try {
      std::vector<int> ids;
      std::stringstream ss(line.substr(0, semi));
      std::string tok;
      while (std::getline(ss, tok, ',')) ids.push_back(std::stoi(tok));
      set.upsert(PathVec(dag, std::move(ids)), std::stod(line.substr(semi + 1)));
    } catch (const std::exception& e) {
      throw IoError(file.string() + ": bad row '" + line + "': " + e.what());
    }
  }
  return set;
}

void save_measurements(const MeasurementSet& measurements,
                       const std::filesystem::path& file) {
  std::ostringstream os;
  os << "path;length\n";
  for (const Measurement& m : measurements.records()) {
    for (std::size_t i = 0; i < m.path.edges().size(); ++i) {
      if (i) os << ",";
      os << m.path.edges()[i];
    }
    os << ";" << format_length(m.length) << "\n";
  }
  write_file(file, os.str());
}

std::vector<PathVec> load_basis(const std::filesystem::path& file, const ProgramDag& dag) {
  ordered_json j = parse_file(file);
  std::vector<PathVec> paths;
  try {
    for (const auto& ids : j.at("paths")) {
      paths.emplace_back(dag, ids.get<std::vector<int>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(file.string() + ": " + e.what());
  }
  return paths;
}

void save_basis(const std::vector<PathVec>& paths, int rank,
                const std::filesystem::path& file) {
  ordered_json j;
  j["paths"] = ordered_json::array();
  for (const PathVec& p : paths) j["paths"].push_back(p.edges());
  j["rank"] = rank;
  write_json(file, j);
}

void save_report(const EstimateReport& report, const std::filesystem::path& file,
                 bool emit_times) {
  ordered_json j;
  j["k"] = report.k;
  j["D"] = report.D;
  j["band"] = report.band_halfwidth;
  j["paths"] = ordered_json::array();
  for (const RankedPath& r : report.ranked) {
    ordered_json entry;
    entry["edges"] = r.path.edges();
    entry["predicted"] = r.predicted;
    if (r.measured) {
      entry["measured"] = *r.measured;
    } else {
      entry["measured"] = nullptr;
    }
    j["paths"].push_back(std::move(entry));
  }
  j["iterations"] = ordered_json::array();
  for (const IterationRecord& it : report.iterations) {
    j["iterations"].push_back({{"k", it.k}, {"seconds", emit_times ? it.seconds : 0.0}});
  }
  write_json(file, j);
}

std::string format_length(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string file_checksum(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace wcett::io
