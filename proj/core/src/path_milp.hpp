#pragma once

// Internal helpers shared by the spanner baseline and the estimator: the
// unit-flow encoding of "there is a source-to-sink path" over binary edge
// variables, and path recovery from a solved model.

#include <string>
#include <vector>

#include "wcett/dag.hpp"
#include "wcett/milp.hpp"

namespace wcett::detail {

/// Adds one binary b_e per edge plus the unit-flow constraints
/// (sum out(s) = 1, sum in(t) = 1, in/out balance at internal vertices).
/// Returns the b_e variable indices, positioned by edge id.
inline std::vector<int> add_path_binaries(MilpModel& model, const ProgramDag& dag) {
  std::vector<int> b(static_cast<std::size_t>(dag.num_edges()));
  for (int e = 0; e < dag.num_edges(); ++e) {
    b[static_cast<std::size_t>(e)] =
        model.add_variable("b" + std::to_string(e), VarKind::Binary);
  }
  auto sum_of = [&](const std::vector<int>& edge_ids) {
    std::vector<LinTerm> terms;
    for (int e : edge_ids) terms.push_back({b[static_cast<std::size_t>(e)], 1.0});
    return terms;
  };
  model.add_constraint(sum_of(dag.out_edges(dag.source())), Relation::Eq, 1.0);
  model.add_constraint(sum_of(dag.in_edges(dag.sink())), Relation::Eq, 1.0);
  for (int v : dag.vertices()) {
    if (v == dag.source() || v == dag.sink()) continue;
    std::vector<LinTerm> terms = sum_of(dag.in_edges(v));
    for (int e : dag.out_edges(v)) terms.push_back({b[static_cast<std::size_t>(e)], -1.0});
    if (!terms.empty()) model.add_constraint(std::move(terms), Relation::Eq, 0.0);
  }
  return b;
}

/// The elimination cut over an edge set x: sum_{e in x} b_e <= |x| - 1.
inline void add_core_cut(MilpModel& model, const std::vector<int>& b,
                         const std::vector<int>& core) {
  std::vector<LinTerm> terms;
  for (int e : core) terms.push_back({b[static_cast<std::size_t>(e)], 1.0});
  model.add_constraint(std::move(terms), Relation::Le,
                       static_cast<double>(core.size()) - 1.0);
}

/// Recovers the chosen path from the b_e assignment by walking edge
/// b-values from the source.
inline PathVec path_from_solution(const ProgramDag& dag, const std::vector<int>& b,
                                  const MilpSolution& sol) {
  std::vector<int> ids;
  int at = dag.source();
  while (at != dag.sink()) {
    int pick = -1;
    for (int e : dag.out_edges(at)) {
      if (sol.values[static_cast<std::size_t>(b[static_cast<std::size_t>(e)])] > 0.5) {
        pick = e;
        break;
      }
    }
    if (pick < 0) throw NumericFailure("flow solution does not form a path");
    ids.push_back(pick);
    at = dag.edge(pick).to;
  }
  return PathVec(dag, std::move(ids));
}

}  // namespace wcett::detail
