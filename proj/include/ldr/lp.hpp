#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace ldr {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility tolerance shared by all downstream residual checks.
constexpr double kLpFeasTol = 1e-6;

enum class RowSense { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded, Error };

const char* to_string(LpStatus status);

// Sparse minimization LP. Variables have box bounds; rows have a sense and a
// finite rhs. Construction order is the canonical (deterministic) order.
class LpModel {
 public:
  int add_variable(std::string name, double lb, double ub, double obj);
  int add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                     RowSense sense, double rhs);

  int n_vars() const { return static_cast<int>(obj_.size()); }
  int n_rows() const { return static_cast<int>(row_rhs_.size()); }

  const std::string& var_name(int j) const { return var_names_[j]; }
  const std::string& row_name(int i) const { return row_names_[i]; }
  double lower(int j) const { return lb_[j]; }
  double upper(int j) const { return ub_[j]; }
  double objective_coeff(int j) const { return obj_[j]; }
  RowSense sense(int i) const { return row_sense_[i]; }
  double rhs(int i) const { return row_rhs_[i]; }

  // Row i as (col, coeff) pairs; duplicate columns are merged on insertion.
  int row_begin(int i) const { return row_start_[i]; }
  int row_end(int i) const { return row_start_[i + 1]; }
  int entry_col(int p) const { return cols_[p]; }
  double entry_val(int p) const { return vals_[p]; }
  int nnz() const { return static_cast<int>(cols_.size()); }

  int find_variable(const std::string& name) const;    // -1 if absent
  int find_constraint(const std::string& name) const;  // -1 if absent

  // CPLEX-style LP text (Minimize / Subject To / Bounds / End).
  std::string to_lp_format() const;

 private:
  std::vector<std::string> var_names_;
  std::vector<double> lb_, ub_, obj_;
  std::vector<std::string> row_names_;
  std::vector<RowSense> row_sense_;
  std::vector<double> row_rhs_;
  std::vector<int> row_start_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> row_index_;
};

// Primal/dual solution. Dual sign convention for a minimization: >= rows have
// nonnegative duals, <= rows nonpositive, = rows free.
struct LpSolution {
  LpStatus status = LpStatus::Error;
  double objective = 0.0;
  std::vector<double> x;  // by variable index
  std::vector<double> y;  // by row index
  int iterations = 0;
  std::string message;    // diagnostics for non-optimal outcomes

  double value(const LpModel& m, const std::string& var) const;
  double dual(const LpModel& m, const std::string& row) const;
};

// Backend selection: "simplex", "ipm", or "auto" (row-count heuristic).
// The HYDRO_LDR_SOLVER environment variable overrides the default.
enum class LpBackend { Auto, Simplex, InteriorPoint };

LpBackend solver_backend_from_env();

LpSolution solve(const LpModel& model, LpBackend backend = LpBackend::Auto);
LpSolution solve_simplex(const LpModel& model);
LpSolution solve_interior_point(const LpModel& model);

// Max |Ax - b| violation over rows (inequality rows clip at 0).
double primal_residual(const LpModel& model, const std::vector<double>& x);

}  // namespace ldr
