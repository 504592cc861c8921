#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wcett/dag.hpp"
#include "wcett/platform.hpp"

namespace wcett {

/// A basis of source-to-sink paths spanning the dag's path space. When
/// produced by compute_spanner it is 2-barycentric: every path of the dag
/// has coefficients with |c_b| <= 2 in this basis.
struct PathBasis {
  std::vector<PathVec> paths;
  Eigen::MatrixXd matrix;  // |B| x |E|, rows are incidence vectors
  int rank = 0;
};

struct SpannerStats {
  int swaps = 0;
  int oracle_calls = 0;
};

/// Determinant-swap construction of a 2-barycentric spanner, driven by the
/// DAG longest/shortest-path oracle. Always succeeds on a valid dag.
PathBasis compute_spanner(const ProgramDag& dag, SpannerStats* stats = nullptr);

/// Wraps an explicit, linearly independent path list as a basis (test
/// fixtures, externally supplied bases).
PathBasis make_basis(const ProgramDag& dag, std::vector<PathVec> paths);

/// Coefficients c with basis^T c = p_x. Throws NotInSpan when the residual
/// exceeds 1e-8 (foreign path or graph mismatch).
Eigen::VectorXd express_in_basis(const PathBasis& basis, const PathVec& path);

struct BaselineEstimate {
  PathVec path;
  double predicted;
  int basis_size;
  /// Accuracy bound as a dimensionless multiplier of mu_max: 2|B|.
  double accuracy;
};

/// Least-squares baseline: fit minimum-norm edge weights to the basis
/// measurements, then extract the heaviest feasible path (exclusion cuts
/// applied via the MILP route when the dag declares exclusions).
BaselineEstimate baseline_estimate(const PathBasis& basis, const MeasurementSet& measurements,
                                   const ProgramDag& dag);

}  // namespace wcett
