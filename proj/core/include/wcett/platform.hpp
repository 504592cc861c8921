#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wcett/dag.hpp"

namespace wcett {

enum class PerturbationLaw { Uniform, Adversarial };

/// Synthetic execution platform: hidden ground-truth edge weights plus a
/// per-path perturbation d with |d| <= mu_max.
struct PlatformModel {
  EdgeWeights true_weights;
  double mu_max = 0.0;
  PerturbationLaw law = PerturbationLaw::Uniform;
  /// Adversarial law: explicit path -> d map (edge-id lists); paths not
  /// listed get d = 0.
  std::vector<std::pair<std::vector<int>, double>> adversarial;
  std::uint64_t seed = 0;
};

struct Measurement {
  PathVec path;
  double length;
};

/// The measurement set M: pairs (path, observed length). A path appears at
/// most once; re-measurement overwrites.
class MeasurementSet {
 public:
  /// Inserts or overwrites the record for this path.
  void upsert(PathVec path, double length);
  /// Appends without the uniqueness check (test harnesses that need
  /// repeated records of one path).
  void append_raw(PathVec path, double length);

  const std::vector<Measurement>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::optional<double> length_of(const PathVec& path) const;

 private:
  std::vector<Measurement> records_;
};

/// Baseline length of a path under the platform's hidden weights (no d).
double true_baseline(const PlatformModel& platform, const PathVec& path);

/// One observed length: baseline + d, with d drawn deterministically from
/// (platform.seed, path identity). Calls are order-independent.
double measure(const PlatformModel& platform, const PathVec& path);

MeasurementSet measure_all(const PlatformModel& platform, const std::vector<PathVec>& paths);

/// Multiplicative perturbation: each length becomes l*(1+u) with u uniform
/// in [-percent/100, +percent/100].
MeasurementSet perturb(const MeasurementSet& measurements, double percent,
                       std::uint64_t seed);

// --- synthetic benchmark families ---

/// Chain of n diamonds: 2^n source-to-sink paths, 4n edges (2n after
/// series merging).
ProgramDag make_diamond_chain(int n);

struct LayeredParams {
  int layers = 5;
  int width = 3;
  double edge_prob = 0.5;
};

/// Random layered DAG; always valid (each internal vertex is wired onto
/// at least one source-to-sink path).
ProgramDag make_layered(const LayeredParams& params, std::uint64_t seed);

/// Uniform integer weights in [1, 100].
EdgeWeights random_weights(int num_edges, std::uint64_t seed);

}  // namespace wcett
