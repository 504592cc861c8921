#include "wcett/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace wcett {

int MilpModel::add_variable(std::string name, VarKind kind, double lb, double ub) {
  if (kind == VarKind::Binary) {
    lb = 0.0;
    ub = 1.0;
    ++num_binaries_;
  }
  if (lb > ub) throw Error("variable '" + name + "' has lb > ub");
  vars_.push_back(Variable{std::move(name), kind, lb, ub});
  return static_cast<int>(vars_.size()) - 1;
}

void MilpModel::check_terms(const std::vector<LinTerm>& terms) const {
  for (const LinTerm& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw BadIds("coefficient references undeclared variable " + std::to_string(t.var));
    }
  }
}

void MilpModel::add_constraint(std::vector<LinTerm> terms, Relation rel, double rhs) {
  check_terms(terms);
  cons_.push_back(Constraint{std::move(terms), rel, rhs});
}

void MilpModel::set_objective(std::vector<LinTerm> terms, ObjSense sense) {
  check_terms(terms);
  obj_ = std::move(terms);
  sense_ = sense;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;

// max c.y  s.t.  A y <= b, y >= 0, after shifting variable bounds.
struct StandardForm {
  int n = 0;                          // structural columns
  std::vector<std::vector<LinTerm>> rows;  // sparse <= rows
  std::vector<double> rhs;
  std::vector<double> cost;           // length n
  // column mapping back to model variables: x = sign*y + shift, with an
  // optional negative companion column for free variables.
  struct ColMap {
    int var;
    double sign;
    double shift;
  };
  std::vector<ColMap> cols;
  bool trivially_infeasible = false;
};

StandardForm build_standard_form(const MilpModel& model, const double* lb_over,
                                 const double* ub_over) {
  const auto& vars = model.variables();
  StandardForm sf;

  std::vector<int> pos_col(vars.size(), -1);
  std::vector<int> neg_col(vars.size(), -1);

  auto bounds_of = [&](std::size_t j) {
    double lb = lb_over ? lb_over[j] : vars[j].lb;
    double ub = ub_over ? ub_over[j] : vars[j].ub;
    return std::pair<double, double>(lb, ub);
  };

  for (std::size_t j = 0; j < vars.size(); ++j) {
    auto [lb, ub] = bounds_of(j);
    if (lb > ub) {
      sf.trivially_infeasible = true;
      return sf;
    }
    if (lb > -kInf) {
      pos_col[j] = sf.n++;
      sf.cols.push_back({static_cast<int>(j), 1.0, lb});
      if (ub < kInf && ub - lb > 0.0) {
        sf.rows.push_back({{pos_col[j], 1.0}});
        sf.rhs.push_back(ub - lb);
      } else if (ub < kInf) {  // fixed variable: y <= 0
        sf.rows.push_back({{pos_col[j], 1.0}});
        sf.rhs.push_back(0.0);
      }
    } else if (ub < kInf) {
      pos_col[j] = sf.n++;
      sf.cols.push_back({static_cast<int>(j), -1.0, ub});  // x = ub - y
    } else {
      pos_col[j] = sf.n++;
      sf.cols.push_back({static_cast<int>(j), 1.0, 0.0});
      neg_col[j] = sf.n++;
      sf.cols.push_back({static_cast<int>(j), -1.0, 0.0});
    }
  }

  double obj_dir = model.sense() == ObjSense::Maximize ? 1.0 : -1.0;
  sf.cost.assign(static_cast<std::size_t>(sf.n), 0.0);
  for (const LinTerm& t : model.objective()) {
    std::size_t j = static_cast<std::size_t>(t.var);
    double c = obj_dir * t.coeff;
    sf.cost[static_cast<std::size_t>(pos_col[j])] += c * sf.cols[pos_col[j]].sign;
    if (neg_col[j] >= 0) sf.cost[static_cast<std::size_t>(neg_col[j])] -= c;
  }

  auto emit_le = [&](const std::vector<LinTerm>& terms, double rhs, double mult) {
    std::vector<LinTerm> row;
    double b = mult * rhs;
    for (const LinTerm& t : terms) {
      std::size_t j = static_cast<std::size_t>(t.var);
      double a = mult * t.coeff;
      const auto& cm = sf.cols[pos_col[j]];
      row.push_back({pos_col[j], a * cm.sign});
      b -= a * cm.shift;
      if (neg_col[j] >= 0) row.push_back({neg_col[j], -a});
    }
    if (row.empty()) {
      if (b < -1e-9) sf.trivially_infeasible = true;  // 0 <= b violated
      return;
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(b);
  };

  for (const Constraint& c : model.constraints()) {
    switch (c.rel) {
      case Relation::Le:
        emit_le(c.terms, c.rhs, 1.0);
        break;
      case Relation::Ge:
        emit_le(c.terms, c.rhs, -1.0);
        break;
      case Relation::Eq:
        emit_le(c.terms, c.rhs, 1.0);
        emit_le(c.terms, c.rhs, -1.0);
        break;
    }
  }
  return sf;
}

class SimplexTableau {
 public:
  SimplexTableau(const StandardForm& sf, const SolverOptions& opts)
      : sf_(sf), opts_(opts), m_(static_cast<int>(sf.rows.size())), n_(sf.n) {
    // Columns: structural | slack | artificial | rhs.
    nart_ = 0;
    for (double b : sf_.rhs) {
      if (b < 0) ++nart_;
    }
    width_ = n_ + m_ + nart_ + 1;
    t_.assign(static_cast<std::size_t>(m_ + 2) * width_, 0.0);
    basis_.assign(static_cast<std::size_t>(m_), -1);

    int art = 0;
    for (int i = 0; i < m_; ++i) {
      double mult = sf_.rhs[static_cast<std::size_t>(i)] < 0 ? -1.0 : 1.0;
      for (const LinTerm& t : sf_.rows[static_cast<std::size_t>(i)]) {
        at(i, t.var) += mult * t.coeff;
      }
      at(i, n_ + i) = mult;  // slack
      rhs(i) = mult * sf_.rhs[static_cast<std::size_t>(i)];
      if (mult < 0) {
        at(i, n_ + m_ + art) = 1.0;
        basis_[static_cast<std::size_t>(i)] = n_ + m_ + art;
        ++art;
      } else {
        basis_[static_cast<std::size_t>(i)] = n_ + i;
      }
    }

    // Row m_: real objective (reduced costs); row m_+1: phase-1 objective.
    for (int j = 0; j < n_; ++j) at(m_, j) = -sf_.cost[static_cast<std::size_t>(j)];
    if (nart_ > 0) {
      for (int j = 0; j < nart_; ++j) at(m_ + 1, n_ + m_ + j) = 1.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[static_cast<std::size_t>(i)] >= n_ + m_) {
          for (int j = 0; j < width_; ++j) at(m_ + 1, j) -= at(i, j);
        }
      }
    }
  }

  // Returns false on unbounded (phase 2 only). Artificial columns never
  // re-enter the basis, in either phase.
  bool run(int obj_row) {
    long cap = 50L * (static_cast<long>(n_ + m_) + static_cast<long>(m_));
    int degenerate_streak = 0;
    const int bland_threshold = 2 * (n_ + m_);
    const int limit = n_ + m_;
    for (long iter = 0;; ++iter) {
      if (iter > cap) throw NumericFailure("simplex iteration cap exceeded");
      bool bland = degenerate_streak > bland_threshold;

      int enter = -1;
      double best = -opts_.opt_tol;
      for (int j = 0; j < limit; ++j) {
        double rc = at(obj_row, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return true;  // optimal

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a <= kPivotTol) continue;
        double ratio = rhs(i) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 &&
             (leave < 0 || basis_[static_cast<std::size_t>(i)] <
                               basis_[static_cast<std::size_t>(leave)]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;  // unbounded direction

      if (best_ratio < 1e-12) {
        ++degenerate_streak;
      } else {
        degenerate_streak = 0;
      }
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    double p = at(row, col);
    for (int j = 0; j < width_; ++j) at(row, j) /= p;
    at(row, col) = 1.0;
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == row) continue;
      double f = at(i, col);
      if (std::abs(f) < kPivotTol) continue;
      for (int j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Phase 1 cleanup: pivot basic artificials onto structural/slack columns
  // where possible; redundant rows are blanked.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_ + m_) continue;
      int col = -1;
      for (int j = 0; j < n_ + m_; ++j) {
        if (std::abs(at(i, j)) > 1e-7) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        for (int j = 0; j < width_; ++j) at(i, j) = 0.0;
      }
    }
  }

  bool infeasible() const {
    // Phase-1 objective row holds -(sum of artificials) in its rhs cell.
    return nart_ > 0 && -rhs_of_row(m_ + 1) > opts_.feas_tol;
  }

  int num_artificials() const { return nart_; }

  std::vector<double> structural_values() const {
    std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i) {
      int b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) y[static_cast<std::size_t>(b)] = rhs_of_row(i);
    }
    return y;
  }

 private:
  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }
  double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * width_ + j]; }
  double& rhs(int i) { return t_[static_cast<std::size_t>(i) * width_ + width_ - 1]; }
  double rhs_of_row(int i) const {
    return t_[static_cast<std::size_t>(i) * width_ + width_ - 1];
  }

  const StandardForm& sf_;
  const SolverOptions& opts_;
  int m_, n_, nart_, width_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

MilpSolution solve_relaxation(const MilpModel& model, const SolverOptions& opts,
                              const double* lb_over, const double* ub_over) {
  StandardForm sf = build_standard_form(model, lb_over, ub_over);
  MilpSolution sol;
  if (sf.trivially_infeasible) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }

  SimplexTableau tab(sf, opts);
  if (tab.num_artificials() > 0) {
    tab.run(static_cast<int>(sf.rows.size()) + 1);
    if (tab.infeasible()) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    tab.drive_out_artificials();
  }
  bool bounded = tab.run(static_cast<int>(sf.rows.size()));
  if (!bounded) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }

  std::vector<double> y = tab.structural_values();
  sol.values.assign(static_cast<std::size_t>(model.num_variables()), 0.0);
  std::vector<bool> seen(static_cast<std::size_t>(model.num_variables()), false);
  for (int j = 0; j < sf.n; ++j) {
    const auto& cm = sf.cols[static_cast<std::size_t>(j)];
    std::size_t v = static_cast<std::size_t>(cm.var);
    if (!seen[v]) {
      sol.values[v] = cm.shift;
      seen[v] = true;
    }
    sol.values[v] += cm.sign * y[static_cast<std::size_t>(j)];
  }

  sol.objective = 0.0;
  for (const LinTerm& t : model.objective()) {
    sol.objective += t.coeff * sol.values[static_cast<std::size_t>(t.var)];
  }
  sol.status = SolveStatus::Optimal;
  return sol;
}

}  // namespace wcett::(anonymous)

MilpSolution solve_lp(const MilpModel& model, const SolverOptions& opts) {
  return solve_relaxation(model, opts, nullptr, nullptr);
}

MilpSolution solve_milp(const MilpModel& model, const SolverOptions& opts) {
  if (model.num_binaries() == 0) return solve_lp(model, opts);
  if (model.num_binaries() > opts.binary_cap) {
    throw Error("model exceeds binary-variable cap (" +
                std::to_string(model.num_binaries()) + " > " +
                std::to_string(opts.binary_cap) + ")");
  }

  const int nv = model.num_variables();
  const double dir = model.sense() == ObjSense::Maximize ? 1.0 : -1.0;

  struct Node {
    double key;  // parent bound in max-equivalent units, higher explored first
    long id;
    std::vector<double> lb, ub;
  };
  auto cmp = [](const Node& a, const Node& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.id > b.id;  // FIFO among equal bounds keeps the 1-branch first
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);

  std::vector<double> lb0(static_cast<std::size_t>(nv)), ub0(static_cast<std::size_t>(nv));
  for (int j = 0; j < nv; ++j) {
    lb0[static_cast<std::size_t>(j)] = model.variables()[static_cast<std::size_t>(j)].lb;
    ub0[static_cast<std::size_t>(j)] = model.variables()[static_cast<std::size_t>(j)].ub;
  }

  long next_id = 0;
  open.push(Node{kInf, next_id++, lb0, ub0});

  MilpSolution incumbent;
  incumbent.status = SolveStatus::Infeasible;
  double best = -kInf;  // max-equivalent incumbent objective
  bool saw_unbounded = false;
  long nodes = 0;
  bool hit_limit = false;

  while (!open.empty()) {
    if (++nodes > opts.node_limit) {
      hit_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.key <= best + 1e-9) continue;

    MilpSolution relax = solve_relaxation(model, opts, node.lb.data(), node.ub.data());
    if (relax.status == SolveStatus::Infeasible) continue;
    if (relax.status == SolveStatus::Unbounded) {
      saw_unbounded = true;
      break;
    }
    double bound = dir * relax.objective;
    if (bound <= best + 1e-9) continue;

    int branch = -1;
    for (int j = 0; j < nv; ++j) {
      if (model.variables()[static_cast<std::size_t>(j)].kind != VarKind::Binary) continue;
      double v = relax.values[static_cast<std::size_t>(j)];
      if (std::abs(v - std::round(v)) > opts.int_tol) {
        branch = j;
        break;
      }
    }

    if (branch < 0) {
      for (int j = 0; j < nv; ++j) {
        if (model.variables()[static_cast<std::size_t>(j)].kind == VarKind::Binary) {
          relax.values[static_cast<std::size_t>(j)] =
              std::round(relax.values[static_cast<std::size_t>(j)]);
        }
      }
      if (bound > best + 1e-9) {
        best = bound;
        incumbent = relax;
      }
      continue;
    }

    Node one{bound, next_id++, node.lb, node.ub};
    one.lb[static_cast<std::size_t>(branch)] = 1.0;
    one.ub[static_cast<std::size_t>(branch)] = 1.0;
    open.push(std::move(one));
    Node zero{bound, next_id++, std::move(node.lb), std::move(node.ub)};
    zero.lb[static_cast<std::size_t>(branch)] = 0.0;
    zero.ub[static_cast<std::size_t>(branch)] = 0.0;
    open.push(std::move(zero));
  }

  if (saw_unbounded && incumbent.status != SolveStatus::Optimal) {
    incumbent.status = SolveStatus::Unbounded;
    return incumbent;
  }
  incumbent.proven = !hit_limit;
  return incumbent;
}

std::string write_lp(const MilpModel& model) {
  std::ostringstream os;
  os.precision(12);
  auto name_of = [&](int j) {
    const std::string& n = model.variables()[static_cast<std::size_t>(j)].name;
    return n.empty() ? "x" + std::to_string(j) : n;
  };
  auto expr = [&](const std::vector<LinTerm>& terms) {
    std::ostringstream e;
    e.precision(12);
    bool first = true;
    for (const LinTerm& t : terms) {
      double c = t.coeff;
      if (first) {
        if (c < 0) e << "- ";
        first = false;
      } else {
        e << (c < 0 ? " - " : " + ");
      }
      e << std::abs(c) << " " << name_of(t.var);
    }
    if (first) e << "0";
    return e.str();
  };

  os << (model.sense() == ObjSense::Maximize ? "Maximize" : "Minimize") << "\n obj: "
     << expr(model.objective()) << "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints().size(); ++i) {
    const Constraint& c = model.constraints()[i];
    const char* rel = c.rel == Relation::Le ? "<=" : c.rel == Relation::Ge ? ">=" : "=";
    os << " c" << i << ": " << expr(c.terms) << " " << rel << " " << c.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[static_cast<std::size_t>(j)];
    if (v.kind == VarKind::Binary) continue;
    if (v.lb == -kInf && v.ub == kInf) {
      os << " " << name_of(j) << " free\n";
    } else if (v.ub == kInf) {
      os << " " << name_of(j) << " >= " << v.lb << "\n";
    } else if (v.lb == -kInf) {
      os << " " << name_of(j) << " <= " << v.ub << "\n";
    } else {
      os << " " << v.lb << " <= " << name_of(j) << " <= " << v.ub << "\n";
    }
  }
  bool any_bin = false;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.variables()[static_cast<std::size_t>(j)].kind == VarKind::Binary) {
      if (!any_bin) {
        os << "Binaries\n";
        any_bin = true;
      }
      os << " " << name_of(j) << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace wcett
