#include "ldr/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "ldr/errors.hpp"
#include "ldr/util.hpp"

namespace ldr {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    default: return "error";
  }
}

int LpModel::add_variable(std::string name, double lb, double ub, double obj) {
  if (lb > ub) throw LpFailure("variable '" + name + "': lb > ub");
  if (!var_index_.emplace(name, n_vars()).second)
    throw LpFailure("duplicate variable name '" + name + "'");
  var_names_.push_back(std::move(name));
  lb_.push_back(lb);
  ub_.push_back(ub);
  obj_.push_back(obj);
  return n_vars() - 1;
}

int LpModel::add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                            RowSense sense, double rhs) {
  if (!std::isfinite(rhs)) throw LpFailure("constraint '" + name + "': rhs must be finite");
  if (!row_index_.emplace(name, n_rows()).second)
    throw LpFailure("duplicate constraint name '" + name + "'");
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  int nv = n_vars();
  int last_col = -1;
  for (const auto& [col, val] : terms) {
    if (col < 0 || col >= nv)
      throw LpFailure("constraint '" + name + "': unknown variable index");
    if (col == last_col) {
      vals_.back() += val;  // merge duplicates
    } else {
      cols_.push_back(col);
      vals_.push_back(val);
      last_col = col;
    }
  }
  row_names_.push_back(std::move(name));
  row_sense_.push_back(sense);
  row_rhs_.push_back(rhs);
  row_start_.push_back(static_cast<int>(cols_.size()));
  return n_rows() - 1;
}

int LpModel::find_variable(const std::string& name) const {
  auto it = var_index_.find(name);
  return it == var_index_.end() ? -1 : it->second;
}

int LpModel::find_constraint(const std::string& name) const {
  auto it = row_index_.find(name);
  return it == row_index_.end() ? -1 : it->second;
}

namespace {

void append_terms(std::ostringstream& out, const LpModel& m, int i) {
  for (int p = m.row_begin(i); p < m.row_end(i); ++p) {
    double v = m.entry_val(p);
    if (v >= 0)
      out << " + " << format_double(v);
    else
      out << " - " << format_double(-v);
    out << ' ' << m.var_name(m.entry_col(p));
  }
}

}  // namespace

std::string LpModel::to_lp_format() const {
  std::ostringstream out;
  out << "Minimize\n obj:";
  bool any = false;
  for (int j = 0; j < n_vars(); ++j) {
    if (obj_[j] == 0.0) continue;
    any = true;
    if (obj_[j] >= 0)
      out << " + " << format_double(obj_[j]);
    else
      out << " - " << format_double(-obj_[j]);
    out << ' ' << var_names_[j];
  }
  if (!any) out << " 0 " << (n_vars() ? var_names_[0] : "x");
  out << "\nSubject To\n";
  for (int i = 0; i < n_rows(); ++i) {
    out << ' ' << row_names_[i] << ':';
    append_terms(out, *this, i);
    switch (row_sense_[i]) {
      case RowSense::LessEqual: out << " <= "; break;
      case RowSense::Equal: out << " = "; break;
      case RowSense::GreaterEqual: out << " >= "; break;
    }
    out << format_double(row_rhs_[i]) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < n_vars(); ++j) {
    double l = lb_[j], u = ub_[j];
    if (l == -kInf && u == kInf) {
      out << ' ' << var_names_[j] << " free\n";
    } else if (l == u) {
      out << ' ' << var_names_[j] << " = " << format_double(l) << '\n';
    } else {
      if (l == -kInf)
        out << " -inf <= " << var_names_[j];
      else
        out << ' ' << format_double(l) << " <= " << var_names_[j];
      if (u != kInf) out << " <= " << format_double(u);
      out << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

double LpSolution::value(const LpModel& m, const std::string& var) const {
  int j = m.find_variable(var);
  if (j < 0) throw LpFailure("unknown variable '" + var + "'");
  return x[j];
}

double LpSolution::dual(const LpModel& m, const std::string& row) const {
  int i = m.find_constraint(row);
  if (i < 0) throw LpFailure("unknown constraint '" + row + "'");
  return y[i];
}

double primal_residual(const LpModel& m, const std::vector<double>& x) {
  double worst = 0.0;
  for (int i = 0; i < m.n_rows(); ++i) {
    double ax = 0.0;
    for (int p = m.row_begin(i); p < m.row_end(i); ++p) ax += m.entry_val(p) * x[m.entry_col(p)];
    double r = ax - m.rhs(i);
    switch (m.sense(i)) {
      case RowSense::Equal: r = std::abs(r); break;
      case RowSense::LessEqual: r = std::max(0.0, r); break;
      case RowSense::GreaterEqual: r = std::max(0.0, -r); break;
    }
    worst = std::max(worst, r);
  }
  return worst;
}

LpBackend solver_backend_from_env() {
  const char* env = std::getenv("HYDRO_LDR_SOLVER");
  if (!env) return LpBackend::Auto;
  std::string v = env;
  if (v == "simplex") return LpBackend::Simplex;
  if (v == "ipm") return LpBackend::InteriorPoint;
  if (v == "auto" || v.empty()) return LpBackend::Auto;
  throw ConfigError("HYDRO_LDR_SOLVER must be simplex, ipm or auto (got '" + v + "')");
}

LpSolution solve(const LpModel& model, LpBackend backend) {
  if (backend == LpBackend::Auto) backend = solver_backend_from_env();
  if (backend == LpBackend::Auto)
    backend = model.n_rows() <= 600 ? LpBackend::Simplex : LpBackend::InteriorPoint;
  return backend == LpBackend::Simplex ? solve_simplex(model) : solve_interior_point(model);
}

}  // namespace ldr
