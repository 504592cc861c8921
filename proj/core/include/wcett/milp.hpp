#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wcett/errors.hpp"

namespace wcett {

enum class VarKind { Continuous, Binary };
enum class Relation { Le, Eq, Ge };
enum class ObjSense { Maximize, Minimize };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = std::numeric_limits<double>::infinity();
};

struct LinTerm {
  int var;
  double coeff;
};

struct Constraint {
  std::vector<LinTerm> terms;
  Relation rel = Relation::Le;
  double rhs = 0.0;
};

/// Generic linear model: continuous and binary variables, linear
/// constraints, one linear objective. Immutable once handed to a solver.
class MilpModel {
 public:
  int add_variable(std::string name, VarKind kind = VarKind::Continuous, double lb = 0.0,
                   double ub = std::numeric_limits<double>::infinity());
  void add_constraint(std::vector<LinTerm> terms, Relation rel, double rhs);
  void set_objective(std::vector<LinTerm> terms, ObjSense sense);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const std::vector<LinTerm>& objective() const { return obj_; }
  ObjSense sense() const { return sense_; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_binaries() const { return num_binaries_; }

 private:
  void check_terms(const std::vector<LinTerm>& terms) const;

  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
  std::vector<LinTerm> obj_;
  ObjSense sense_ = ObjSense::Maximize;
  int num_binaries_ = 0;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;  // one per model variable
  /// False only when the branch-and-bound node limit was hit and the
  /// reported incumbent is not proven optimal.
  bool proven = true;
};

struct SolverOptions {
  double feas_tol = 1e-6;
  double int_tol = 1e-6;
  double opt_tol = 1e-7;  // reduced-cost tolerance
  int binary_cap = 2000;
  long node_limit = 200000;
};

/// Solves the LP relaxation (binaries treated as [0,1] continuous) with a
/// dense two-phase simplex. Throws NumericFailure if pivoting stalls.
MilpSolution solve_lp(const MilpModel& model, const SolverOptions& opts = {});

/// Best-first branch-and-bound over the binary variables. Branching is
/// deterministic: lowest fractional variable index, 1-branch first.
MilpSolution solve_milp(const MilpModel& model, const SolverOptions& opts = {});

/// Human-readable LP-format dump, for diffing against external solvers.
std::string write_lp(const MilpModel& model);

}  // namespace wcett
