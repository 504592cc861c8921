#include "wcett/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "path_milp.hpp"

namespace wcett {

namespace {

std::vector<LinTerm> path_sum(const std::vector<int>& w_vars, const PathVec& path) {
  std::vector<LinTerm> terms;
  for (int e : path.edges()) terms.push_back({w_vars[static_cast<std::size_t>(e)], 1.0});
  return terms;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RepeatabilityEstimate solve_delta(const ProgramDag& dag, const MeasurementSet& measurements,
                                  const SolverOptions& solver) {
  if (measurements.empty()) throw Error("solve_delta needs at least one measurement");

  MilpModel model;
  std::vector<int> w(static_cast<std::size_t>(dag.num_edges()));
  for (int e = 0; e < dag.num_edges(); ++e) {
    w[static_cast<std::size_t>(e)] = model.add_variable("w" + std::to_string(e));
  }
  int mu = model.add_variable("mu");

  for (const Measurement& m : measurements.records()) {
    auto lo = path_sum(w, m.path);
    lo.push_back({mu, 1.0});
    model.add_constraint(std::move(lo), Relation::Ge, m.length);  // sum + mu >= l
    auto hi = path_sum(w, m.path);
    hi.push_back({mu, -1.0});
    model.add_constraint(std::move(hi), Relation::Le, m.length);  // sum - mu <= l
  }
  model.set_objective({{mu, 1.0}}, ObjSense::Minimize);

  MilpSolution sol = solve_lp(model, solver);
  if (sol.status != SolveStatus::Optimal) {
    throw NumericFailure("repeatability LP did not solve to optimality");
  }
  RepeatabilityEstimate out;
  out.D = std::max(0.0, sol.objective);
  out.fitted_weights.resize(static_cast<std::size_t>(dag.num_edges()));
  for (int e = 0; e < dag.num_edges(); ++e) {
    out.fitted_weights[static_cast<std::size_t>(e)] =
        sol.values[static_cast<std::size_t>(w[static_cast<std::size_t>(e)])];
  }
  return out;
}

AccuracyConstant solve_bound(const ProgramDag& dag, const std::vector<PathVec>& measured_paths,
                             const std::vector<std::vector<int>>& exclusion_cuts,
                             const EstimatorOptions& opts) {
  const double box = opts.bound_box;
  const int m = dag.num_edges();

  auto build = [&](double obj_sign) {
    MilpModel model;
    std::vector<int> w(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
      w[static_cast<std::size_t>(e)] =
          model.add_variable("w" + std::to_string(e), VarKind::Continuous, -box, box);
    }
    std::vector<int> b = detail::add_path_binaries(model, dag);
    std::vector<int> p(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
      p[static_cast<std::size_t>(e)] =
          model.add_variable("p" + std::to_string(e), VarKind::Continuous, -box, box);
    }

    for (const PathVec& x : measured_paths) {
      model.add_constraint(path_sum(w, x), Relation::Le, 1.0);
      model.add_constraint(path_sum(w, x), Relation::Ge, -1.0);
    }
    for (const auto& cut : exclusion_cuts) detail::add_core_cut(model, b, cut);

    // p_e = b_e * w_e at the optimum. Only the upper envelope is needed:
    // the objective maximizes +p_e, so the two lower McCormick rows never
    // bind and dropping them leaves both the MILP optimum and the LP
    // relaxation bound unchanged.
    for (int e = 0; e < m; ++e) {
      int pe = p[static_cast<std::size_t>(e)];
      int we = w[static_cast<std::size_t>(e)];
      int be = b[static_cast<std::size_t>(e)];
      model.add_constraint({{pe, 1.0}, {we, -1.0}, {be, box}}, Relation::Le, box);
      model.add_constraint({{pe, 1.0}, {be, -box}}, Relation::Le, 0.0);
    }

    std::vector<LinTerm> obj;
    for (int e = 0; e < m; ++e) obj.push_back({p[static_cast<std::size_t>(e)], obj_sign});
    model.set_objective(std::move(obj), ObjSense::Maximize);
    return std::make_tuple(std::move(model), std::move(b), std::move(w));
  };

  // The feasible region is symmetric under w -> -w (the windows are
  // [-1, +1] and the weight box is centered), so maximizing the negated
  // length gives the same optimum as maximizing the length: one solve
  // covers both directions of |len|.
  AccuracyConstant out;
  auto [model, b, w] = build(+1.0);
  MilpSolution sol = solve_milp(model, opts.solver);
  if (sol.status != SolveStatus::Optimal) {
    throw NumericFailure("accuracy ILP did not solve to optimality");
  }
  out.k = sol.objective;
  out.witness_path = detail::path_from_solution(dag, b, sol);
  out.witness_weights.resize(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    out.witness_weights[static_cast<std::size_t>(e)] =
        sol.values[static_cast<std::size_t>(w[static_cast<std::size_t>(e)])];
  }
  out.proven = sol.proven;
  return out;
}

WorstResult solve_worst(const ProgramDag& dag, const MeasurementSet& measurements, double D,
                        const std::vector<std::vector<int>>& cuts,
                        const EstimatorOptions& opts) {
  if (measurements.empty()) throw Error("solve_worst needs at least one measurement");
  const int m = dag.num_edges();

  double max_l = 0.0;
  for (const Measurement& rec : measurements.records()) max_l = std::max(max_l, rec.length);
  // M must dominate any weight the windows allow: a covered edge can carry
  // up to l_i + D on its own.
  const double big_m = max_l + std::max(D, 0.0) + 1.0;

  MilpModel model;
  std::vector<int> w(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    w[static_cast<std::size_t>(e)] = model.add_variable("w" + std::to_string(e));
  }
  std::vector<int> b = detail::add_path_binaries(model, dag);
  std::vector<int> p(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    p[static_cast<std::size_t>(e)] = model.add_variable("p" + std::to_string(e));
  }

  for (const Measurement& rec : measurements.records()) {
    model.add_constraint(path_sum(w, rec.path), Relation::Le, rec.length + D);
    model.add_constraint(path_sum(w, rec.path), Relation::Ge, rec.length - D);
  }
  for (const auto& cut : cuts) detail::add_core_cut(model, b, cut);
  for (int e = 0; e < m; ++e) {
    int pe = p[static_cast<std::size_t>(e)];
    model.add_constraint({{pe, 1.0}, {w[static_cast<std::size_t>(e)], -1.0}}, Relation::Le,
                         0.0);
    model.add_constraint({{pe, 1.0}, {b[static_cast<std::size_t>(e)], -big_m}}, Relation::Le,
                         0.0);
  }

  std::vector<LinTerm> obj;
  for (int e = 0; e < m; ++e) obj.push_back({p[static_cast<std::size_t>(e)], 1.0});
  model.set_objective(std::move(obj), ObjSense::Maximize);

  MilpSolution sol = solve_milp(model, opts.solver);
  if (sol.status == SolveStatus::Infeasible) {
    throw InfeasibleWindows("worst-path ILP infeasible (D below the repeatability optimum, "
                            "or every path eliminated)");
  }
  if (sol.status != SolveStatus::Optimal) {
    throw NumericFailure("worst-path ILP did not solve to optimality");
  }

  WorstResult out{detail::path_from_solution(dag, b, sol), sol.objective, {}, sol.proven};
  out.fitted_weights.resize(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    out.fitted_weights[static_cast<std::size_t>(e)] =
        sol.values[static_cast<std::size_t>(w[static_cast<std::size_t>(e)])];
  }
  return out;
}

BasisRun iterative_basis(const ProgramDag& dag, std::vector<PathVec> initial,
                         const EstimatorOptions& opts) {
  if (opts.accuracy < 1.0) throw Error("accuracy target A must be >= 1");

  BasisRun run;
  run.paths = std::move(initial);
  if (run.paths.empty()) run.paths = compute_spanner(dag).paths;

  if (opts.respect_exclusions) {
    // Infeasible seed paths cannot be measured; drop them and remember
    // their unsat cores as cuts so they never resurface as witnesses.
    std::vector<PathVec> feasible;
    for (PathVec& p : run.paths) {
      if (auto core = unsat_core(dag, p)) {
        if (std::find(run.discovered_cuts.begin(), run.discovered_cuts.end(), *core) ==
            run.discovered_cuts.end()) {
          run.discovered_cuts.push_back(*core);
        }
      } else {
        feasible.push_back(std::move(p));
      }
    }
    run.paths = std::move(feasible);
  }

  for (;;) {
    auto t0 = std::chrono::steady_clock::now();
    AccuracyConstant ac = solve_bound(dag, run.paths, run.discovered_cuts, opts);
    run.iterations.push_back(IterationRecord{ac.k, seconds_since(t0)});
    run.k = ac.k;
    run.proven = run.proven && ac.proven;
    if (ac.k <= opts.accuracy + 1e-6) break;

    auto core = opts.respect_exclusions ? unsat_core(dag, ac.witness_path) : std::nullopt;
    if (core) {
      run.discovered_cuts.push_back(*core);
      continue;
    }
    if (std::find(run.paths.begin(), run.paths.end(), ac.witness_path) != run.paths.end()) {
      // Witness already measured: k is at the 1.0 floor up to solver noise.
      break;
    }
    run.paths.push_back(ac.witness_path);
  }
  return run;
}

namespace {

EstimateReport finish_estimate(const ProgramDag& dag, const MeasurementSet& measurements,
                               const BasisRun& basis_run, const PlatformModel* platform,
                               const EstimatorOptions& opts) {
  EstimateReport report;
  report.iterations = basis_run.iterations;
  report.k = basis_run.k;
  report.proven = basis_run.proven;
  report.basis_size = static_cast<int>(basis_run.paths.size());

  RepeatabilityEstimate delta = solve_delta(dag, measurements, opts.solver);
  report.D = delta.D;
  report.band_halfwidth = 2.0 * report.k * report.D;
  // The windows are feasible at the LP optimum by construction; the slack
  // guards float round-off only.
  const double window = delta.D + 1e-9;

  std::vector<std::vector<int>> cuts = basis_run.discovered_cuts;
  double top_estimate = 0.0;
  while (static_cast<int>(report.ranked.size()) < opts.top_k) {
    WorstResult worst;
    try {
      worst = solve_worst(dag, measurements, window, cuts, opts);
    } catch (const InfeasibleWindows&) {
      break;  // every remaining path eliminated
    }
    report.proven = report.proven && worst.proven;

    auto core = opts.respect_exclusions ? unsat_core(dag, worst.path) : std::nullopt;
    if (core) {
      cuts.push_back(*core);
      continue;
    }
    if (report.ranked.empty()) {
      top_estimate = worst.predicted;
    } else if (opts.early_stop &&
               worst.predicted < top_estimate - report.band_halfwidth) {
      break;
    }

    std::optional<double> measured;
    if (platform) {
      measured = measure(*platform, worst.path);
    } else {
      measured = measurements.length_of(worst.path);
    }
    cuts.push_back(worst.path.edges());
    report.ranked.push_back(RankedPath{std::move(worst.path), worst.predicted, measured});
  }
  return report;
}

}  // namespace

EstimateReport estimate_wcett(const ProgramDag& dag, const PlatformModel& platform,
                              const EstimatorOptions& opts) {
  BasisRun run = iterative_basis(dag, {}, opts);
  MeasurementSet measurements = measure_all(platform, run.paths);
  return finish_estimate(dag, measurements, run, &platform, opts);
}

EstimateReport estimate_from_measurements(const ProgramDag& dag,
                                          const MeasurementSet& measurements,
                                          const EstimatorOptions& opts) {
  // The measured set is fixed; its accuracy constant is evaluated with all
  // declared exclusion sets applied as cuts.
  BasisRun run;
  for (const Measurement& m : measurements.records()) run.paths.push_back(m.path);
  if (opts.respect_exclusions) run.discovered_cuts = dag.exclusions();

  auto t0 = std::chrono::steady_clock::now();
  AccuracyConstant ac = solve_bound(dag, run.paths, run.discovered_cuts, opts);
  run.iterations.push_back(IterationRecord{ac.k, seconds_since(t0)});
  run.k = ac.k;
  run.proven = ac.proven;
  return finish_estimate(dag, measurements, run, nullptr, opts);
}

}  // namespace wcett
