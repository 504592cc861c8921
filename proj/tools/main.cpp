// wcett: command-line front end for the worst-case path estimation toolkit.
//
// Subcommands: gen, measure, basis, estimate, topk, perturb, compare.
// Every command is deterministic given (inputs, seed); artifacts are
// byte-identical across reruns. Wall-clock columns are zeroed unless
// --emit-times is given, so default outputs stay reproducible.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wcett/dag.hpp"
#include "wcett/errors.hpp"
#include "wcett/estimator.hpp"
#include "wcett/io.hpp"
#include "wcett/milp.hpp"
#include "wcett/platform.hpp"
#include "wcett/spanner.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace wcett;

namespace {

std::string fnv_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  out << text;
}

// One manifest per run: the configuration that produced the artifacts plus
// a checksum of every emitted file.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const ordered_json& config, const std::vector<std::string>& files) {
  ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["config_hash"] = fnv_hex(command + config.dump());
  std::map<std::string, std::string> sums;
  for (const std::string& f : files) sums[f] = io::file_checksum(out_dir / f);
  j["files"] = ordered_json::object();
  for (const auto& [name, sum] : sums) j["files"][name] = sum;
  write_text(out_dir / "manifest.json", j.dump(2) + "\n");
}

fs::path prepare_out(const std::string& out) {
  if (out.empty()) throw ConfigError("--out is required");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::string fmt(double v) { return io::format_length(v); }

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct GenArgs {
  std::string family = "diamond";
  int n = 3;
  int layers = 5;
  int width = 3;
  double edge_prob = 0.5;
  double mu_max = 0.0;
  std::string law = "uniform";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  fs::path out = prepare_out(a.out);
  ProgramDag dag = [&] {
    if (a.family == "diamond") {
      if (a.n < 1) throw ConfigError("--n must be >= 1");
      return make_diamond_chain(a.n);
    }
    if (a.family == "layered") {
      if (a.layers < 1 || a.width < 1 || a.edge_prob < 0.0 || a.edge_prob > 1.0)
        throw ConfigError("bad layered parameters");
      return make_layered({a.layers, a.width, a.edge_prob}, a.seed);
    }
    throw ConfigError("unknown family '" + a.family + "'");
  }();
  validate(dag);

  PlatformModel platform;
  platform.true_weights = random_weights(dag.num_edges(), a.seed + 1);
  platform.mu_max = a.mu_max;
  if (a.law == "uniform") {
    platform.law = PerturbationLaw::Uniform;
  } else if (a.law == "adversarial") {
    platform.law = PerturbationLaw::Adversarial;
  } else {
    throw ConfigError("unknown law '" + a.law + "'");
  }
  platform.seed = a.seed;

  // keep observed lengths nonnegative: perturbation may not exceed the
  // cheapest baseline
  double min_baseline =
      extreme_path(dag, platform.true_weights, Sense::Min).value;
  if (a.mu_max > min_baseline) {
    throw ConfigError("--mu-max " + fmt(a.mu_max) + " exceeds the minimum path baseline " +
                      fmt(min_baseline));
  }

  io::save_dag(dag, out / "dag.json");
  io::save_platform(platform, out / "platform.json");

  std::cout << "# Nodes  # Edges  # Paths\n"
            << dag.num_vertices() << "  " << dag.num_edges() << "  "
            << count_paths(dag) << "\n";

  ordered_json cfg = {{"family", a.family},   {"n", a.n},
                      {"layers", a.layers},   {"width", a.width},
                      {"edge_prob", a.edge_prob}, {"mu_max", a.mu_max},
                      {"law", a.law},         {"seed", a.seed}};
  write_manifest(out, "gen", cfg, {"dag.json", "platform.json"});
  return 0;
}

struct MeasureArgs {
  std::string dag, platform, basis, out;
};

int cmd_measure(const MeasureArgs& a) {
  fs::path out = prepare_out(a.out);
  ProgramDag dag = io::load_dag(a.dag);
  PlatformModel platform = io::load_platform(a.platform);
  std::vector<PathVec> paths = a.basis.empty()
                                   ? compute_spanner(dag).paths
                                   : io::load_basis(a.basis, dag);
  MeasurementSet ms = measure_all(platform, paths);
  io::save_measurements(ms, out / "measurements.csv");
  io::save_basis(paths, static_cast<int>(paths.size()), out / "basis.json");

  ordered_json cfg = {{"dag", a.dag}, {"platform", a.platform}, {"basis", a.basis}};
  write_manifest(out, "measure", cfg, {"measurements.csv", "basis.json"});
  return 0;
}

struct BasisArgs {
  std::string dag, out;
  double accuracy = 2.0;
  bool emit_times = false;
};

int cmd_basis(const BasisArgs& a) {
  if (a.accuracy < 1.0) throw ConfigError("--accuracy must be >= 1");
  fs::path out = prepare_out(a.out);
  ProgramDag dag = io::load_dag(a.dag);

  auto t0 = std::chrono::steady_clock::now();
  EstimatorOptions opts;
  opts.accuracy = a.accuracy;
  BasisRun run = iterative_basis(dag, {}, opts);
  double total = elapsed_since(t0);

  io::save_basis(run.paths, static_cast<int>(run.paths.size()), out / "basis.json");

  std::ostringstream iters;
  iters << "iteration,k,seconds\n";
  for (std::size_t i = 0; i < run.iterations.size(); ++i) {
    iters << i << "," << fmt(run.iterations[i].k) << ","
          << fmt(a.emit_times ? run.iterations[i].seconds : 0.0) << "\n";
  }
  write_text(out / "iterations.csv", iters.str());

  std::ostringstream summary;
  summary << "desired_k,actual_k,num_paths,seconds\n"
          << fmt(a.accuracy) << "," << fmt(run.k) << "," << run.paths.size() << ","
          << fmt(a.emit_times ? total : 0.0) << "\n";
  write_text(out / "summary.csv", summary.str());

  std::cout << "paths=" << run.paths.size() << " k=" << fmt(run.k)
            << (run.proven ? "" : " (not proven)") << "\n";

  ordered_json cfg = {{"dag", a.dag}, {"accuracy", a.accuracy}};
  write_manifest(out, "basis", cfg, {"basis.json", "iterations.csv", "summary.csv"});
  return 0;
}

struct EstimateArgs {
  std::string dag, platform, measurements, out;
  double accuracy = 2.0;
  int top = 1;
  bool early_stop = false;
  bool emit_times = false;
};

int cmd_estimate(const EstimateArgs& a, const std::string& name) {
  if (a.accuracy < 1.0) throw ConfigError("--accuracy must be >= 1");
  if (a.top < 1) throw ConfigError("--top must be >= 1");
  if (a.platform.empty() == a.measurements.empty())
    throw ConfigError("give exactly one of --platform or --measurements");
  fs::path out = prepare_out(a.out);
  ProgramDag dag = io::load_dag(a.dag);

  EstimatorOptions opts;
  opts.accuracy = a.accuracy;
  opts.top_k = a.top;
  opts.early_stop = a.early_stop;

  auto t0 = std::chrono::steady_clock::now();
  EstimateReport report =
      a.platform.empty()
          ? estimate_from_measurements(dag, io::load_measurements(a.measurements, dag),
                                       opts)
          : estimate_wcett(dag, io::load_platform(a.platform), opts);
  double total = elapsed_since(t0);

  io::save_report(report, out / "report.json", a.emit_times);

  std::ostringstream csv;
  csv << "rank,predicted,band,measured,seconds\n";
  for (std::size_t i = 0; i < report.ranked.size(); ++i) {
    const RankedPath& r = report.ranked[i];
    csv << (i + 1) << "," << fmt(r.predicted) << "," << fmt(report.band_halfwidth)
        << "," << (r.measured ? fmt(*r.measured) : std::string("")) << ","
        << fmt(a.emit_times ? total : 0.0) << "\n";
  }
  write_text(out / "report.csv", csv.str());

  if (!report.ranked.empty()) {
    std::cout << "T=" << fmt(report.ranked.front().predicted) << " k=" << fmt(report.k)
              << " D=" << fmt(report.D) << " band=" << fmt(report.band_halfwidth)
              << "\n";
  }

  ordered_json cfg = {{"dag", a.dag},
                      {"platform", a.platform},
                      {"measurements", a.measurements},
                      {"accuracy", a.accuracy},
                      {"top", a.top},
                      {"early_stop", a.early_stop}};
  write_manifest(out, name, cfg, {"report.json", "report.csv"});
  return 0;
}

struct PerturbArgs {
  std::string dag, measurements, levels, out;
  std::uint64_t seed = 0;
  int trials = 1;
};

int cmd_perturb(const PerturbArgs& a) {
  if (a.trials < 1) throw ConfigError("--trials must be >= 1");
  fs::path out = prepare_out(a.out);
  ProgramDag dag = io::load_dag(a.dag);
  MeasurementSet ms = io::load_measurements(a.measurements, dag);

  std::vector<double> levels;
  std::stringstream ss(a.levels);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      levels.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad --levels entry '" + tok + "'");
    }
    if (levels.back() < 0.0) throw ConfigError("levels must be >= 0");
  }

  std::ostringstream csv;
  csv << "level,D\n";
  for (double level : levels) {
    for (int t = 0; t < a.trials; ++t) {
      MeasurementSet shaken = perturb(ms, level, a.seed + static_cast<std::uint64_t>(t));
      csv << fmt(level) << "," << fmt(solve_delta(dag, shaken).D) << "\n";
    }
  }
  write_text(out / "perturb.csv", csv.str());

  ordered_json cfg = {{"dag", a.dag},
                      {"measurements", a.measurements},
                      {"levels", a.levels},
                      {"seed", a.seed},
                      {"trials", a.trials}};
  write_manifest(out, "perturb", cfg, {"perturb.csv"});
  return 0;
}

struct CompareArgs {
  std::string dag, platform, out;
  double accuracy = 2.0;
};

int cmd_compare(const CompareArgs& a) {
  fs::path out = prepare_out(a.out);
  ProgramDag dag = io::load_dag(a.dag);
  PlatformModel platform = io::load_platform(a.platform);

  PathBasis basis = compute_spanner(dag);
  MeasurementSet ms = measure_all(platform, basis.paths);

  BaselineEstimate base = baseline_estimate(basis, ms, dag);

  EstimatorOptions opts;
  opts.accuracy = a.accuracy;
  EstimateReport ours = estimate_from_measurements(dag, ms, opts);
  if (ours.ranked.empty()) throw NumericFailure("estimation produced no path");

  double base_measured = measure(platform, base.path);
  double our_measured = measure(platform, ours.ranked.front().path);

  std::ostringstream csv;
  csv << "basis_size,baseline_accuracy,k,our_accuracy,baseline_predicted,"
         "baseline_measured,our_predicted,our_measured\n";
  csv << base.basis_size << "," << fmt(base.accuracy) << "," << fmt(ours.k) << ","
      << fmt(2.0 * ours.k) << "," << fmt(base.predicted) << "," << fmt(base_measured)
      << "," << fmt(ours.ranked.front().predicted) << "," << fmt(our_measured) << "\n";
  write_text(out / "compare.csv", csv.str());

  double frac = 2.0 * ours.k <= base.accuracy + 1e-9 ? 1.0 : 0.0;
  std::ostringstream summary;
  summary << "fraction_2k_le_2B\n" << fmt(frac) << "\n";
  write_text(out / "summary.csv", summary.str());
  std::cout << "2k=" << fmt(2.0 * ours.k) << " 2B=" << fmt(base.accuracy)
            << " fraction_2k_le_2B=" << fmt(frac) << "\n";

  ordered_json cfg = {{"dag", a.dag}, {"platform", a.platform}, {"accuracy", a.accuracy}};
  write_manifest(out, "compare", cfg, {"compare.csv", "summary.csv"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case path estimation toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* sc_gen = app.add_subcommand("gen", "generate a benchmark dag + platform");
  sc_gen->add_option("--family", gen.family, "diamond|layered");
  sc_gen->add_option("--n", gen.n, "diamond count");
  sc_gen->add_option("--layers", gen.layers);
  sc_gen->add_option("--width", gen.width);
  sc_gen->add_option("--edge-prob", gen.edge_prob);
  sc_gen->add_option("--mu-max", gen.mu_max);
  sc_gen->add_option("--law", gen.law, "uniform|adversarial");
  sc_gen->add_option("--seed", gen.seed);
  sc_gen->add_option("--out", gen.out)->required();

  MeasureArgs meas;
  CLI::App* sc_meas = app.add_subcommand("measure", "measure basis paths on a platform");
  sc_meas->add_option("--dag", meas.dag)->required();
  sc_meas->add_option("--platform", meas.platform)->required();
  sc_meas->add_option("--basis", meas.basis, "path set to measure (default: spanner)");
  sc_meas->add_option("--out", meas.out)->required();

  BasisArgs bas;
  CLI::App* sc_bas = app.add_subcommand("basis", "iterative basis refinement");
  sc_bas->add_option("--dag", bas.dag)->required();
  sc_bas->add_option("--accuracy", bas.accuracy, "refinement target A >= 1");
  sc_bas->add_option("--out", bas.out)->required();
  sc_bas->add_flag("--emit-times", bas.emit_times);

  EstimateArgs est;
  auto wire_estimate = [&](CLI::App* sc, EstimateArgs& e) {
    sc->add_option("--dag", e.dag)->required();
    sc->add_option("--platform", e.platform);
    sc->add_option("--measurements", e.measurements);
    sc->add_option("--accuracy", e.accuracy);
    sc->add_option("--top", e.top);
    sc->add_flag("--early-stop", e.early_stop);
    sc->add_flag("--emit-times", e.emit_times);
    sc->add_option("--out", e.out)->required();
  };
  CLI::App* sc_est = app.add_subcommand("estimate", "end-to-end worst-path estimation");
  wire_estimate(sc_est, est);
  EstimateArgs topk;
  topk.top = 5;
  CLI::App* sc_topk = app.add_subcommand("topk", "estimate with K > 1 ranked paths");
  wire_estimate(sc_topk, topk);

  PerturbArgs per;
  CLI::App* sc_per = app.add_subcommand("perturb", "perturbation sweep over D");
  sc_per->add_option("--dag", per.dag)->required();
  sc_per->add_option("--measurements", per.measurements)->required();
  sc_per->add_option("--levels", per.levels, "comma-separated percents");
  sc_per->add_option("--seed", per.seed);
  sc_per->add_option("--trials", per.trials, "rows per level");
  sc_per->add_option("--out", per.out)->required();

  CompareArgs cmp;
  CLI::App* sc_cmp = app.add_subcommand("compare", "baseline vs estimator on one dag");
  sc_cmp->add_option("--dag", cmp.dag)->required();
  sc_cmp->add_option("--platform", cmp.platform)->required();
  sc_cmp->add_option("--accuracy", cmp.accuracy);
  sc_cmp->add_option("--out", cmp.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sc_gen->parsed()) return cmd_gen(gen);
    if (sc_meas->parsed()) return cmd_measure(meas);
    if (sc_bas->parsed()) return cmd_basis(bas);
    if (sc_est->parsed()) return cmd_estimate(est, "estimate");
    if (sc_topk->parsed()) return cmd_estimate(topk, "topk");
    if (sc_per->parsed()) return cmd_perturb(per);
    if (sc_cmp->parsed()) return cmd_compare(cmp);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CyclicGraph& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DisconnectedEdge& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BadIds& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
