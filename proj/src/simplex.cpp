#include <algorithm>
#include <cmath>
#include <vector>

#include "ldr/lp.hpp"

namespace ldr {

namespace {

// Bounded-variable two-phase revised simplex with a dense basis inverse.
// Intended for models up to a few hundred rows; big estimation LPs go to the
// interior-point backend instead.
class Simplex {
 public:
  explicit Simplex(const LpModel& m) : model_(m) { build(); }

  LpSolution run() {
    LpSolution sol;
    if (!phase1(&sol)) return sol;
    if (!phase2(&sol)) return sol;
    extract(&sol);
    return sol;
  }

 private:
  static constexpr double kPivTol = 1e-9;
  static constexpr double kDualTol = 1e-7;
  static constexpr double kFeasTol = 1e-8;

  const LpModel& model_;
  int m_ = 0;       // rows
  int nall_ = 0;    // structurals + slacks + artificials
  int nstruct_ = 0;
  int nslack_ = 0;

  // CSC of [A | slacks | artificials]
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> lb_, ub_, cost_;  // phase-2 cost
  std::vector<double> b_;

  std::vector<double> x_;       // current values, all variables
  std::vector<int> basic_;      // basic variable per row
  std::vector<char> in_basis_;
  std::vector<char> banned_;    // artificials after phase 1
  std::vector<double> binv_;    // row-major m x m
  std::vector<double> work_y_, work_w_;
  int iterations_ = 0;
  bool bland_ = false;
  int degenerate_streak_ = 0;

  double& binv(int i, int j) { return binv_[static_cast<size_t>(i) * m_ + j]; }

  void build() {
    m_ = model_.n_rows();
    nstruct_ = model_.n_vars();
    nslack_ = m_;
    nall_ = nstruct_ + nslack_;  // artificials appended lazily in phase1
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) b_[i] = model_.rhs(i);

    // transpose rows -> columns
    std::vector<int> count(nstruct_, 0);
    for (int p = 0; p < model_.nnz(); ++p) ++count[model_.entry_col(p)];
    col_start_.assign(nall_ + 1, 0);
    for (int j = 0; j < nstruct_; ++j) col_start_[j + 1] = col_start_[j] + count[j];
    for (int j = nstruct_; j < nall_; ++j) col_start_[j + 1] = col_start_[j] + 1;
    col_row_.resize(col_start_[nall_]);
    col_val_.resize(col_start_[nall_]);
    std::vector<int> fill(nstruct_, 0);
    for (int i = 0; i < m_; ++i)
      for (int p = model_.row_begin(i); p < model_.row_end(i); ++p) {
        int j = model_.entry_col(p);
        int pos = col_start_[j] + fill[j]++;
        col_row_[pos] = i;
        col_val_[pos] = model_.entry_val(p);
      }
    for (int i = 0; i < m_; ++i) {
      int j = nstruct_ + i;
      col_row_[col_start_[j]] = i;
      col_val_[col_start_[j]] = 1.0;
    }

    lb_.resize(nall_);
    ub_.resize(nall_);
    cost_.assign(nall_, 0.0);
    for (int j = 0; j < nstruct_; ++j) {
      lb_[j] = model_.lower(j);
      ub_[j] = model_.upper(j);
      cost_[j] = model_.objective_coeff(j);
    }
    for (int i = 0; i < m_; ++i) {
      int j = nstruct_ + i;
      switch (model_.sense(i)) {
        case RowSense::LessEqual: lb_[j] = 0.0; ub_[j] = kInf; break;
        case RowSense::GreaterEqual: lb_[j] = -kInf; ub_[j] = 0.0; break;
        case RowSense::Equal: lb_[j] = 0.0; ub_[j] = 0.0; break;
      }
    }
  }

  double nearest_bound(int j) const {
    if (lb_[j] > -kInf && ub_[j] < kInf)
      return (std::abs(lb_[j]) <= std::abs(ub_[j])) ? lb_[j] : ub_[j];
    if (lb_[j] > -kInf) return lb_[j];
    if (ub_[j] < kInf) return ub_[j];
    return 0.0;
  }

  // Residual of row i given nonbasic values in x_ (basics excluded).
  void row_activity(std::vector<double>* act) const {
    act->assign(m_, 0.0);
    for (int j = 0; j < nall_; ++j) {
      if (x_[j] == 0.0) continue;
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
        (*act)[col_row_[p]] += col_val_[p] * x_[j];
    }
  }

  bool phase1(LpSolution* sol) {
    x_.assign(nall_, 0.0);
    in_basis_.assign(nall_, 0);
    banned_.assign(nall_, 0);
    for (int j = 0; j < nall_; ++j) x_[j] = nearest_bound(j);

    std::vector<double> act;
    row_activity(&act);

    // Choose per-row basic: the slack when it can absorb the residual, an
    // artificial otherwise.
    basic_.assign(m_, -1);
    std::vector<int> need_art;
    for (int i = 0; i < m_; ++i) {
      int sj = nstruct_ + i;
      double resid = b_[i] - (act[i] - x_[sj]);  // activity without the slack
      if (resid >= lb_[sj] - kFeasTol && resid <= ub_[sj] + kFeasTol) {
        basic_[i] = sj;
        x_[sj] = resid;
        in_basis_[sj] = 1;
      } else {
        x_[sj] = (resid < lb_[sj]) ? lb_[sj] : ub_[sj];
        need_art.push_back(i);
      }
    }

    // Append artificial columns.
    if (!need_art.empty()) {
      row_activity(&act);
      for (int i : need_art) {
        double resid = b_[i] - act[i];
        int j = nall_;
        col_start_.push_back(col_start_.back() + 1);
        col_row_.push_back(i);
        col_val_.push_back(resid >= 0 ? 1.0 : -1.0);
        lb_.push_back(0.0);
        ub_.push_back(kInf);
        cost_.push_back(0.0);
        x_.push_back(std::abs(resid));
        in_basis_.push_back(1);
        banned_.push_back(0);
        basic_[i] = j;
        ++nall_;
      }

      std::vector<double> art_cost(nall_, 0.0);
      for (int j = nstruct_ + nslack_; j < nall_; ++j) art_cost[j] = 1.0;
      refactor();
      LpStatus st = optimize(art_cost);
      if (st == LpStatus::Error) {
        sol->status = LpStatus::Error;
        sol->message = "phase 1 failed: singular basis";
        return false;
      }
      double infeas = 0.0;
      for (int j = nstruct_ + nslack_; j < nall_; ++j) infeas += x_[j];
      if (infeas > 1e-7 * (1.0 + norm_b())) {
        sol->status = LpStatus::Infeasible;
        std::string rows;
        int listed = 0;
        for (int j = nstruct_ + nslack_; j < nall_; ++j)
          if (x_[j] > 1e-9 * (1.0 + norm_b()) && listed < 8) {
            if (!rows.empty()) rows += ", ";
            rows += model_.row_name(col_row_[col_start_[j]]);
            ++listed;
          }
        sol->message = "infeasible; binding rows: " + rows;
        return false;
      }
      // Freeze artificials at zero for phase 2.
      for (int j = nstruct_ + nslack_; j < nall_; ++j) {
        lb_[j] = 0.0;
        ub_[j] = 0.0;
        banned_[j] = 1;
        if (!in_basis_[j]) x_[j] = 0.0;
      }
    } else {
      refactor();
    }
    return true;
  }

  bool phase2(LpSolution* sol) {
    bland_ = false;
    degenerate_streak_ = 0;
    LpStatus st = optimize(cost_);
    if (st == LpStatus::Optimal) return true;
    sol->status = st;
    if (st == LpStatus::Unbounded) sol->message = "objective unbounded below";
    if (st == LpStatus::Error) sol->message = "simplex numerical failure";
    return false;
  }

  double norm_b() const {
    double v = 0.0;
    for (double bi : b_) v = std::max(v, std::abs(bi));
    return v;
  }

  // Rebuild binv_ from the current basis via Gauss-Jordan with partial pivot.
  bool refactor() {
    std::vector<double> B(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      int j = basic_[i];
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
        B[static_cast<size_t>(col_row_[p]) * m_ + i] = col_val_[p];
    }
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv(i, i) = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(B[static_cast<size_t>(col) * m_ + col]);
      for (int r = col + 1; r < m_; ++r) {
        double v = std::abs(B[static_cast<size_t>(r) * m_ + col]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best < 1e-12) return false;
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(B[static_cast<size_t>(piv) * m_ + k], B[static_cast<size_t>(col) * m_ + k]);
          std::swap(binv(piv, k), binv(col, k));
        }
      }
      double d = B[static_cast<size_t>(col) * m_ + col];
      for (int k = 0; k < m_; ++k) {
        B[static_cast<size_t>(col) * m_ + k] /= d;
        binv(col, k) /= d;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        double f = B[static_cast<size_t>(r) * m_ + col];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          B[static_cast<size_t>(r) * m_ + k] -= f * B[static_cast<size_t>(col) * m_ + k];
          binv(r, k) -= f * binv(col, k);
        }
      }
    }
    return true;
  }

  // x_B = B^-1 (b - A_N x_N)
  void recompute_basics() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < nall_; ++j) {
      if (in_basis_[j] || x_[j] == 0.0) continue;
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
        rhs[col_row_[p]] -= col_val_[p] * x_[j];
    }
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      for (int k = 0; k < m_; ++k) v += binv(i, k) * rhs[k];
      x_[basic_[i]] = v;
    }
  }

  LpStatus optimize(const std::vector<double>& cost) {
    int iter_limit = 20000 + 50 * (m_ + nall_);
    int since_refactor = 0;
    recompute_basics();
    while (true) {
      if (++iterations_ > iter_limit) return LpStatus::Error;

      // y = B^-T c_B
      work_y_.assign(m_, 0.0);
      for (int i = 0; i < m_; ++i) {
        double cb = cost[basic_[i]];
        if (cb == 0.0) continue;
        for (int k = 0; k < m_; ++k) work_y_[k] += cb * binv(i, k);
      }

      // pricing
      int q = -1;
      double best = kDualTol;
      int dir = 0;  // +1 entering increases, -1 decreases
      for (int j = 0; j < nall_; ++j) {
        if (in_basis_[j] || banned_[j] || lb_[j] == ub_[j]) continue;
        double d = cost[j];
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
          d -= work_y_[col_row_[p]] * col_val_[p];
        bool at_lower = lb_[j] > -kInf && x_[j] <= lb_[j] + kFeasTol;
        bool at_upper = ub_[j] < kInf && x_[j] >= ub_[j] - kFeasTol;
        bool free_var = !at_lower && !at_upper;
        int cand_dir = 0;
        if ((at_lower || free_var) && d < -best) cand_dir = 1;
        else if ((at_upper || free_var) && d > best) cand_dir = -1;
        if (cand_dir != 0) {
          if (bland_) {
            q = j;
            dir = cand_dir;
            break;
          }
          best = std::abs(d);
          q = j;
          dir = cand_dir;
        }
      }
      if (q < 0) return LpStatus::Optimal;  // no improving column

      // w = B^-1 A_q
      work_w_.assign(m_, 0.0);
      for (int p = col_start_[q]; p < col_start_[q + 1]; ++p) {
        int r = col_row_[p];
        double v = col_val_[p];
        for (int i = 0; i < m_; ++i) work_w_[i] += binv(i, r) * v;
      }

      // ratio test; basic i moves at rate -dir*w_i per unit step
      double t_max = kInf;
      int leave = -1;
      double leave_to = 0.0;  // bound the leaving variable hits
      double span = ub_[q] - lb_[q];
      if (std::isfinite(span)) t_max = span;
      for (int i = 0; i < m_; ++i) {
        double rate = -dir * work_w_[i];
        if (std::abs(rate) < kPivTol) continue;
        int bj = basic_[i];
        double t;
        double to;
        if (rate > 0) {
          if (ub_[bj] == kInf) continue;
          t = (ub_[bj] - x_[bj]) / rate;
          to = ub_[bj];
        } else {
          if (lb_[bj] == -kInf) continue;
          t = (lb_[bj] - x_[bj]) / rate;
          to = lb_[bj];
        }
        if (t < -1e-12) t = 0.0;
        if (t < t_max - 1e-12 || (t < t_max + 1e-12 && leave >= 0 &&
                                  std::abs(work_w_[i]) > std::abs(work_w_[leave]))) {
          t_max = t;
          leave = i;
          leave_to = to;
        }
      }

      if (t_max == kInf) return LpStatus::Unbounded;

      if (t_max < 1e-11) {
        if (++degenerate_streak_ > 2 * m_ + 200) bland_ = true;
      } else {
        degenerate_streak_ = 0;
      }

      // apply step
      for (int i = 0; i < m_; ++i) x_[basic_[i]] += -dir * work_w_[i] * t_max;
      x_[q] += dir * t_max;

      if (leave < 0) continue;  // bound flip, basis unchanged

      int out = basic_[leave];
      x_[out] = leave_to;  // snap to the bound exactly
      in_basis_[out] = 0;
      in_basis_[q] = 1;
      basic_[leave] = q;

      // eta update of the inverse
      double piv = work_w_[leave];
      if (std::abs(piv) < kPivTol) {
        if (!refactor()) return LpStatus::Error;
        recompute_basics();
        continue;
      }
      for (int k = 0; k < m_; ++k) binv(leave, k) /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        double f = work_w_[i];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) binv(i, k) -= f * binv(leave, k);
      }

      if (++since_refactor >= 256) {
        if (!refactor()) return LpStatus::Error;
        recompute_basics();
        since_refactor = 0;
      }
    }
  }

  void extract(LpSolution* sol) {
    recompute_basics();
    sol->status = LpStatus::Optimal;
    sol->x.assign(x_.begin(), x_.begin() + nstruct_);
    double obj = 0.0;
    for (int j = 0; j < nstruct_; ++j) obj += cost_[j] * x_[j];
    sol->objective = obj;

    work_y_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double cb = cost_[basic_[i]];
      if (cb == 0.0) continue;
      for (int k = 0; k < m_; ++k) work_y_[k] += cb * binv(i, k);
    }
    sol->y = work_y_;
    sol->iterations = iterations_;
  }
};

}  // namespace

LpSolution solve_simplex(const LpModel& model) {
  if (model.n_rows() == 0) {
    // pure bound problem: each variable sits at its cheapest bound
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.x.resize(model.n_vars());
    for (int j = 0; j < model.n_vars(); ++j) {
      double c = model.objective_coeff(j);
      if (c > 0) {
        if (model.lower(j) == -kInf) return {LpStatus::Unbounded, 0.0, {}, {}, 0, "unbounded"};
        sol.x[j] = model.lower(j);
      } else if (c < 0) {
        if (model.upper(j) == kInf) return {LpStatus::Unbounded, 0.0, {}, {}, 0, "unbounded"};
        sol.x[j] = model.upper(j);
      } else {
        sol.x[j] = std::isfinite(model.lower(j)) ? model.lower(j)
                   : (std::isfinite(model.upper(j)) ? model.upper(j) : 0.0);
      }
      sol.objective += c * sol.x[j];
    }
    return sol;
  }
  Simplex s(model);
  return s.run();
}

}  // namespace ldr
