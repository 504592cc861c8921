#pragma once

// Reference implementations used only by the test suite. They deliberately
// take the dumbest correct route (full enumeration, one LP per path) so a
// disagreement with the library points at a real bug rather than a shared
// mistake.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "wcett/dag.hpp"
#include "wcett/milp.hpp"
#include "wcett/platform.hpp"

namespace oracle {

// Recursive path counter; no dynamic programming, no shared code with
// wcett::count_paths.
inline std::uint64_t count_from(const wcett::ProgramDag& dag, int v) {
  if (v == dag.sink()) return 1;
  std::uint64_t total = 0;
  for (int e : dag.out_edges(v)) total += count_from(dag, dag.edge(e).to);
  return total;
}

inline std::uint64_t brute_count(const wcett::ProgramDag& dag) {
  return count_from(dag, dag.source());
}

// Longest/shortest path by scanning every enumerated path.
inline wcett::ExtremePath brute_extreme(const wcett::ProgramDag& dag,
                                        const wcett::EdgeWeights& weights,
                                        wcett::Sense sense) {
  std::vector<wcett::PathVec> all = wcett::enumerate_paths(dag);
  wcett::ExtremePath best{all.front(), wcett::path_length(weights, all.front())};
  for (const wcett::PathVec& p : all) {
    double len = wcett::path_length(weights, p);
    bool better = sense == wcett::Sense::Max ? len > best.value + 1e-12
                                             : len < best.value - 1e-12;
    if (better) best = {p, len};
  }
  return best;
}

inline bool hits_cut(const wcett::PathVec& path, const std::vector<int>& cut) {
  return std::all_of(cut.begin(), cut.end(),
                     [&](int e) { return path.contains(e); });
}

inline std::vector<wcett::PathVec> feasible_paths(
    const wcett::ProgramDag& dag, const std::vector<std::vector<int>>& cuts) {
  std::vector<wcett::PathVec> out;
  for (wcett::PathVec& p : wcett::enumerate_paths(dag)) {
    bool blocked = false;
    for (const auto& cut : cuts) blocked = blocked || hits_cut(p, cut);
    if (!blocked) out.push_back(std::move(p));
  }
  return out;
}

// Reference for the worst-path search: for each feasible path, LP-maximize
// its length under the measurement windows at D, then take the best path.
inline double brute_worst(const wcett::ProgramDag& dag,
                          const wcett::MeasurementSet& measurements, double D,
                          const std::vector<std::vector<int>>& cuts = {}) {
  double best = -std::numeric_limits<double>::infinity();
  for (const wcett::PathVec& cand : feasible_paths(dag, cuts)) {
    wcett::MilpModel m;
    for (int e = 0; e < dag.num_edges(); ++e) {
      m.add_variable("w" + std::to_string(e));
    }
    for (const wcett::Measurement& rec : measurements.records()) {
      std::vector<wcett::LinTerm> terms;
      for (int e : rec.path.edges()) terms.push_back({e, 1.0});
      m.add_constraint(terms, wcett::Relation::Le, rec.length + D);
      m.add_constraint(std::move(terms), wcett::Relation::Ge, rec.length - D);
    }
    std::vector<wcett::LinTerm> obj;
    for (int e : cand.edges()) obj.push_back({e, 1.0});
    m.set_objective(std::move(obj), wcett::ObjSense::Maximize);
    wcett::MilpSolution sol = wcett::solve_lp(m);
    if (sol.status == wcett::SolveStatus::Optimal) best = std::max(best, sol.objective);
  }
  return best;
}

// Reference for the accuracy constant: per candidate path, LP-maximize the
// absolute length over box-bounded free-sign weights whose sums stay in
// [-1, +1] on every measured path.
inline double brute_bound(const wcett::ProgramDag& dag,
                          const std::vector<wcett::PathVec>& measured,
                          const std::vector<std::vector<int>>& cuts = {},
                          double box = 2.0) {
  double best = 0.0;
  for (const wcett::PathVec& cand : feasible_paths(dag, cuts)) {
    for (double sign : {1.0, -1.0}) {
      wcett::MilpModel m;
      for (int e = 0; e < dag.num_edges(); ++e) {
        m.add_variable("w" + std::to_string(e), wcett::VarKind::Continuous, -box, box);
      }
      for (const wcett::PathVec& mp : measured) {
        std::vector<wcett::LinTerm> terms;
        for (int e : mp.edges()) terms.push_back({e, 1.0});
        m.add_constraint(terms, wcett::Relation::Le, 1.0);
        m.add_constraint(std::move(terms), wcett::Relation::Ge, -1.0);
      }
      std::vector<wcett::LinTerm> obj;
      for (int e : cand.edges()) obj.push_back({e, sign});
      m.set_objective(std::move(obj), wcett::ObjSense::Maximize);
      wcett::MilpSolution sol = wcett::solve_lp(m);
      if (sol.status == wcett::SolveStatus::Optimal) best = std::max(best, sol.objective);
    }
  }
  return best;
}

}  // namespace oracle
