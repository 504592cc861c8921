#pragma once

#include <optional>
#include <vector>

#include "wcett/dag.hpp"
#include "wcett/milp.hpp"
#include "wcett/platform.hpp"
#include "wcett/spanner.hpp"

namespace wcett {

/// Least perturbation bound consistent with the measurements, with the
/// fitted nonnegative edge weights as witness. D <= mu_max whenever the
/// measurements come from a PlatformModel.
struct RepeatabilityEstimate {
  double D = 0.0;
  EdgeWeights fitted_weights;
};

/// Accuracy constant of a measured path set: the largest |length| a path
/// can reach while every measured path's cumulative sum stays in [-1, +1].
/// k >= 1 always; k = 1 iff all feasible paths are measured.
struct AccuracyConstant {
  double k = 1.0;
  PathVec witness_path;
  EdgeWeights witness_weights;  // may be negative
  bool proven = true;
};

struct WorstResult {
  PathVec path;
  double predicted;
  EdgeWeights fitted_weights;
  bool proven = true;
};

struct IterationRecord {
  double k;
  double seconds;
};

struct RankedPath {
  PathVec path;
  double predicted;
  std::optional<double> measured;
};

struct EstimateReport {
  std::vector<RankedPath> ranked;  // sorted by predicted length, descending
  double k = 1.0;
  double D = 0.0;
  double band_halfwidth = 0.0;  // 2*k*D
  bool proven = true;
  std::vector<IterationRecord> iterations;
  int basis_size = 0;
};

struct EstimatorOptions {
  double accuracy = 2.0;  // A: basis refinement target, >= 1
  int top_k = 1;          // K: paths to extract
  bool early_stop = false;
  bool respect_exclusions = true;
  /// Box |w_e| <= bound_box in the accuracy ILP (the sums it constrains
  /// are bounded by +-1 per measured path).
  double bound_box = 2.0;
  SolverOptions solver;
};

/// Repeatability LP: min mu s.t. l_i - mu <= sum_{e in x_i} w_e <= l_i + mu,
/// w_e >= 0, mu >= 0. Always feasible.
RepeatabilityEstimate solve_delta(const ProgramDag& dag, const MeasurementSet& measurements,
                                  const SolverOptions& solver = {});

/// Accuracy ILP, solved twice (max length, max negated length) over
/// free-sign weights; independent of the measured lengths. exclusion_cuts
/// are edge sets prohibited from the extracted path.
AccuracyConstant solve_bound(const ProgramDag& dag, const std::vector<PathVec>& measured_paths,
                             const std::vector<std::vector<int>>& exclusion_cuts = {},
                             const EstimatorOptions& opts = {});

/// Worst-path ILP: flow binaries b_e, products p_e, measurement windows at
/// D. Throws InfeasibleWindows when D is below the repeatability optimum.
WorstResult solve_worst(const ProgramDag& dag, const MeasurementSet& measurements, double D,
                        const std::vector<std::vector<int>>& cuts = {},
                        const EstimatorOptions& opts = {});

struct BasisRun {
  std::vector<PathVec> paths;
  double k = 1.0;
  bool proven = true;
  std::vector<IterationRecord> iterations;  // per-iteration accuracy + wall time
  std::vector<std::vector<int>> discovered_cuts;
};

/// Iterative basis refinement: repeatedly extend the measured set by the
/// accuracy witness until the accuracy drops to A. Infeasible witnesses
/// contribute their unsat core as a cut instead. An empty initial set is
/// seeded with the 2-barycentric spanner. A = 1 collects every feasible path.
BasisRun iterative_basis(const ProgramDag& dag, std::vector<PathVec> initial,
                         const EstimatorOptions& opts = {});

/// End-to-end pipeline against a synthetic platform: basis refinement,
/// measurement, repeatability fit, then top-K extraction with elimination
/// cuts. Bands are T +- 2*k*D.
EstimateReport estimate_wcett(const ProgramDag& dag, const PlatformModel& platform,
                              const EstimatorOptions& opts = {});

/// Same pipeline over a fixed measurement file: no new paths can be
/// measured, so the given set plays the role of the refined basis.
EstimateReport estimate_from_measurements(const ProgramDag& dag,
                                          const MeasurementSet& measurements,
                                          const EstimatorOptions& opts = {});

}  // namespace wcett
