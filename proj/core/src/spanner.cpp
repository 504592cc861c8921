#include "wcett/spanner.hpp"

#include <cmath>
#include <optional>

#include "path_milp.hpp"
#include "wcett/milp.hpp"

namespace wcett {

namespace {

Eigen::VectorXd incidence_vector(const PathVec& path) {
  const auto& inc = path.incidence();
  Eigen::VectorXd v(static_cast<Eigen::Index>(inc.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(inc[static_cast<std::size_t>(i)]);
  }
  return v;
}

/// Orthonormal basis Q of the linear span of the path space. For a dag
/// where every edge lies on some s->t path this span equals the kernel of
/// the internal-vertex balance matrix, so no path enumeration is needed.
Eigen::MatrixXd path_space_basis(const ProgramDag& dag) {
  const int m = dag.num_edges();
  std::vector<int> internal;
  for (int v : dag.vertices()) {
    if (v != dag.source() && v != dag.sink()) internal.push_back(v);
  }
  if (internal.empty()) return Eigen::MatrixXd::Identity(m, m);

  Eigen::MatrixXd balance =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(internal.size()), m);
  for (std::size_t r = 0; r < internal.size(); ++r) {
    for (int e : dag.in_edges(internal[r])) {
      balance(static_cast<Eigen::Index>(r), e) += 1.0;
    }
    for (int e : dag.out_edges(internal[r])) {
      balance(static_cast<Eigen::Index>(r), e) -= 1.0;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(balance);
  lu.setThreshold(1e-9);
  Eigen::MatrixXd kernel = lu.kernel();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m, kernel.cols());
}

struct OracleHit {
  PathVec path;
  Eigen::VectorXd coords;  // y = Q^T p
  double det_ratio;        // signed z . y
};

/// Maximizes |z . y| over path coordinates via two longest-path calls.
OracleHit oracle_extreme(const ProgramDag& dag, const Eigen::MatrixXd& coords_basis,
                         const Eigen::VectorXd& functional, SpannerStats* stats) {
  Eigen::VectorXd w_vec = coords_basis * functional;
  EdgeWeights w(w_vec.data(), w_vec.data() + w_vec.size());
  ExtremePath hi = extreme_path(dag, w, Sense::Max);
  ExtremePath lo = extreme_path(dag, w, Sense::Min);
  if (stats) stats->oracle_calls += 2;
  const PathVec& pick = std::abs(hi.value) >= std::abs(lo.value) ? hi.path : lo.path;
  Eigen::VectorXd y = coords_basis.transpose() * incidence_vector(pick);
  return OracleHit{pick, y, functional.dot(y)};
}

}  // namespace

PathBasis compute_spanner(const ProgramDag& dag, SpannerStats* stats) {
  const Eigen::MatrixXd Q = path_space_basis(dag);
  const int r = static_cast<int>(Q.cols());

  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(r, r);  // columns in y-coords
  std::vector<std::optional<PathVec>> slots(static_cast<std::size_t>(r));

  auto functional_for = [&](int slot) {
    // z = B^{-T} e_slot; then det(B with col slot <- y) / det(B) = z . y.
    Eigen::VectorXd e = Eigen::VectorXd::Zero(r);
    e[slot] = 1.0;
    return Eigen::VectorXd(B.transpose().fullPivLu().solve(e));
  };

  // Seed every slot with a real path maximizing |det|.
  for (int i = 0; i < r; ++i) {
    OracleHit hit = oracle_extreme(dag, Q, functional_for(i), stats);
    if (std::abs(hit.det_ratio) < 1e-12) {
      throw NumericFailure("path space is rank-deficient against the balance kernel");
    }
    B.col(i) = hit.coords;
    slots[static_cast<std::size_t>(i)] = std::move(hit.path);
  }

  // Swap while some path doubles |det|; termination is O(r log r) swaps.
  const int swap_cap = 64 * r + 64;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < r; ++i) {
      OracleHit hit = oracle_extreme(dag, Q, functional_for(i), stats);
      if (std::abs(hit.det_ratio) > 2.0 + 1e-9) {
        B.col(i) = hit.coords;
        slots[static_cast<std::size_t>(i)] = std::move(hit.path);
        if (stats) ++stats->swaps;
        improved = true;
      }
    }
    if (stats && stats->swaps > swap_cap) {
      throw NumericFailure("spanner swap loop exceeded its termination bound");
    }
  }

  PathBasis basis;
  basis.rank = r;
  basis.matrix.resize(r, dag.num_edges());
  for (int i = 0; i < r; ++i) {
    basis.paths.push_back(*slots[static_cast<std::size_t>(i)]);
    basis.matrix.row(i) = incidence_vector(basis.paths.back()).transpose();
  }
  return basis;
}

PathBasis make_basis(const ProgramDag& dag, std::vector<PathVec> paths) {
  if (paths.empty()) throw Error("empty basis");
  PathBasis basis;
  basis.matrix.resize(static_cast<Eigen::Index>(paths.size()), dag.num_edges());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    basis.matrix.row(static_cast<Eigen::Index>(i)) =
        incidence_vector(paths[i]).transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.matrix.transpose());
  qr.setThreshold(1e-9);
  basis.rank = static_cast<int>(qr.rank());
  if (basis.rank != static_cast<int>(paths.size())) {
    throw NotInSpan("basis paths are linearly dependent");
  }
  basis.paths = std::move(paths);
  return basis;
}

Eigen::VectorXd express_in_basis(const PathBasis& basis, const PathVec& path) {
  Eigen::VectorXd p = incidence_vector(path);
  if (p.size() != basis.matrix.cols()) {
    throw NotInSpan("path incidence length does not match the basis");
  }
  Eigen::VectorXd c = basis.matrix.transpose()
                          .completeOrthogonalDecomposition()
                          .solve(p);
  double residual = (basis.matrix.transpose() * c - p).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw NotInSpan("path lies outside the basis row space (residual " +
                    std::to_string(residual) + ")");
  }
  return c;
}

BaselineEstimate baseline_estimate(const PathBasis& basis, const MeasurementSet& measurements,
                                   const ProgramDag& dag) {
  Eigen::VectorXd lengths(static_cast<Eigen::Index>(basis.paths.size()));
  for (std::size_t i = 0; i < basis.paths.size(); ++i) {
    auto l = measurements.length_of(basis.paths[i]);
    if (!l) throw MissingMeasurement("basis path " + std::to_string(i) + " is unmeasured");
    lengths[static_cast<Eigen::Index>(i)] = *l;
  }

  // Minimum-norm weights reproducing every basis measurement exactly;
  // maximizing sum c_b w_b over paths is then the longest path under them.
  Eigen::VectorXd fit =
      basis.matrix.completeOrthogonalDecomposition().solve(lengths);
  EdgeWeights w(fit.data(), fit.data() + fit.size());

  BaselineEstimate out{extreme_path(dag, w, Sense::Max).path, 0.0,
                       static_cast<int>(basis.paths.size()),
                       2.0 * static_cast<double>(basis.paths.size())};

  if (!dag.exclusions().empty()) {
    // Exclusion cuts need the MILP route; re-solve until feasible.
    MilpModel model;
    std::vector<int> b = detail::add_path_binaries(model, dag);
    std::vector<LinTerm> obj;
    for (int e = 0; e < dag.num_edges(); ++e) {
      obj.push_back({b[static_cast<std::size_t>(e)], w[static_cast<std::size_t>(e)]});
    }
    model.set_objective(std::move(obj), ObjSense::Maximize);
    for (;;) {
      MilpSolution sol = solve_milp(model);
      if (sol.status != SolveStatus::Optimal) {
        throw InfeasibleWindows("no feasible path survives the exclusion cuts");
      }
      PathVec path = detail::path_from_solution(dag, b, sol);
      auto core = unsat_core(dag, path);
      if (!core) {
        out.path = std::move(path);
        break;
      }
      detail::add_core_cut(model, b, *core);
    }
  }

  out.predicted = path_length(w, out.path);
  return out;
}

}  // namespace wcett
