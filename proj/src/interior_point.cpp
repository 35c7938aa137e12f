#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "ldr/lp.hpp"

namespace ldr {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// Equality-form working problem: min c'x s.t. Ax = b, l <= x <= u, where
// inequality rows got slack columns and fixed variables were substituted out.
struct WorkLp {
  SpMat A;       // m x n, scaled
  Vec b, c, l, u;
  int n = 0, m = 0;
  int n_orig = 0;                // structural variables of the source model
  std::vector<double> col_scale; // x_orig = col_scale .* x_scaled
  std::vector<double> row_scale; // y_orig = row_scale .* y_scaled * obj_scale
  double obj_scale = 1.0;
  std::vector<int> fixed_var;    // source indices substituted out
  std::vector<double> fixed_val;
  std::vector<int> var_map;      // source var -> working col (-1 if fixed)
};

// Mehrotra predictor-corrector on the regularized augmented system
//   [ -(D + dp I)  A' ] [dx]   [r1]
//   [  A           dd I ] [dy] = [r2]
// factored by simplicial LDL^T (quasi-definite, so no pivoting needed),
// with iterative refinement against the unregularized system.
class InteriorPoint {
 public:
  InteriorPoint(const LpModel& model) : model_(model) {}

  LpSolution run() {
    LpSolution sol;
    if (!prepare(&sol)) return sol;
    if (!factor_symbolic(&sol)) return sol;
    iterate(&sol);
    return sol;
  }

 private:
  static constexpr double kDeltaP = 1e-8;
  static constexpr double kDeltaD = 1e-8;
  static constexpr double kDiagCap = 1e14;  // pinned variables: cap their scaling weight
  static constexpr int kMaxIter = 200;

  const LpModel& model_;
  WorkLp w_;
  SpMat K_;
  std::vector<int> diag_pos_;  // position of column j's diagonal in K values
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;

  bool lu_mode_ = false;
  SpMat K_full_;
  std::vector<int> diag_pos_full_;
  Eigen::SparseLU<SpMat> lu_;
  Vec d_cur_;

  Vec x_, y_, z_, zu_;  // zu = dual for upper bounds (w in the usual notation)
  std::vector<char> has_l_, has_u_;

  bool prepare(LpSolution* sol) {
    int n0 = model_.n_vars();
    int m0 = model_.n_rows();

    w_.var_map.assign(n0, -1);
    std::vector<double> shift_rhs(m0, 0.0);
    int n = 0;
    for (int j = 0; j < n0; ++j) {
      if (model_.lower(j) == model_.upper(j)) {
        w_.fixed_var.push_back(j);
        w_.fixed_val.push_back(model_.lower(j));
      } else {
        w_.var_map[j] = n++;
      }
    }
    // rhs shift from fixed variables
    if (!w_.fixed_var.empty()) {
      std::vector<double> fv(n0, 0.0);
      for (size_t k = 0; k < w_.fixed_var.size(); ++k) fv[w_.fixed_var[k]] = w_.fixed_val[k];
      for (int i = 0; i < m0; ++i)
        for (int p = model_.row_begin(i); p < model_.row_end(i); ++p) {
          int j = model_.entry_col(p);
          if (w_.var_map[j] < 0) shift_rhs[i] += model_.entry_val(p) * fv[j];
        }
    }

    int slacks = 0;
    for (int i = 0; i < m0; ++i)
      if (model_.sense(i) != RowSense::Equal) ++slacks;

    w_.n_orig = n0;
    w_.n = n + slacks;
    w_.m = m0;
    w_.b.resize(m0);
    w_.c = Vec::Zero(w_.n);
    w_.l.resize(w_.n);
    w_.u.resize(w_.n);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(model_.nnz() + slacks);
    for (int i = 0; i < m0; ++i) {
      w_.b[i] = model_.rhs(i) - shift_rhs[i];
      for (int p = model_.row_begin(i); p < model_.row_end(i); ++p) {
        int j = w_.var_map[model_.entry_col(p)];
        if (j >= 0) trips.emplace_back(i, j, model_.entry_val(p));
      }
    }
    for (int j0 = 0; j0 < n0; ++j0) {
      int j = w_.var_map[j0];
      if (j < 0) continue;
      w_.c[j] = model_.objective_coeff(j0);
      w_.l[j] = model_.lower(j0);
      w_.u[j] = model_.upper(j0);
    }
    int sj = n;
    for (int i = 0; i < m0; ++i) {
      if (model_.sense(i) == RowSense::Equal) continue;
      trips.emplace_back(i, sj, 1.0);
      if (model_.sense(i) == RowSense::LessEqual) {
        w_.l[sj] = 0.0;
        w_.u[sj] = kInf;
      } else {
        w_.l[sj] = -kInf;
        w_.u[sj] = 0.0;
      }
      ++sj;
    }
    w_.A.resize(m0, w_.n);
    w_.A.setFromTriplets(trips.begin(), trips.end());
    w_.A.makeCompressed();

    // Ruiz equilibration.
    w_.row_scale.assign(m0, 1.0);
    w_.col_scale.assign(w_.n, 1.0);
    for (int pass = 0; pass < 6; ++pass) {
      std::vector<double> rmax(m0, 0.0), cmax(w_.n, 0.0);
      for (int k = 0; k < w_.A.outerSize(); ++k)
        for (SpMat::InnerIterator it(w_.A, k); it; ++it) {
          double a = std::abs(it.value());
          rmax[it.row()] = std::max(rmax[it.row()], a);
          cmax[it.col()] = std::max(cmax[it.col()], a);
        }
      bool done = true;
      for (int i = 0; i < m0; ++i)
        if (rmax[i] > 0 && (rmax[i] > 1.9 || rmax[i] < 0.53)) done = false;
      for (int j = 0; j < w_.n; ++j)
        if (cmax[j] > 0 && (cmax[j] > 1.9 || cmax[j] < 0.53)) done = false;
      if (done) break;
      std::vector<double> rs(m0), cs(w_.n);
      for (int i = 0; i < m0; ++i) rs[i] = rmax[i] > 0 ? 1.0 / std::sqrt(rmax[i]) : 1.0;
      for (int j = 0; j < w_.n; ++j) cs[j] = cmax[j] > 0 ? 1.0 / std::sqrt(cmax[j]) : 1.0;
      for (int k = 0; k < w_.A.outerSize(); ++k)
        for (SpMat::InnerIterator it(w_.A, k); it; ++it)
          it.valueRef() *= rs[it.row()] * cs[it.col()];
      for (int i = 0; i < m0; ++i) w_.row_scale[i] *= rs[i];
      for (int j = 0; j < w_.n; ++j) w_.col_scale[j] *= cs[j];
    }
    for (int i = 0; i < m0; ++i) w_.b[i] *= w_.row_scale[i];
    for (int j = 0; j < w_.n; ++j) {
      double cs = w_.col_scale[j];
      w_.c[j] *= cs;
      if (w_.l[j] > -kInf) w_.l[j] /= cs;
      if (w_.u[j] < kInf) w_.u[j] /= cs;
    }
    w_.obj_scale = std::max(1.0, w_.c.lpNorm<Eigen::Infinity>());
    w_.c /= w_.obj_scale;

    has_l_.assign(w_.n, 0);
    has_u_.assign(w_.n, 0);
    for (int j = 0; j < w_.n; ++j) {
      has_l_[j] = w_.l[j] > -kInf;
      has_u_[j] = w_.u[j] < kInf;
    }
    (void)sol;
    return true;
  }

  bool factor_symbolic(LpSolution* sol) {
    int N = w_.n + w_.m;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(w_.A.nonZeros() + N);
    for (int j = 0; j < w_.n; ++j) trips.emplace_back(j, j, -1.0);
    for (int k = 0; k < w_.A.outerSize(); ++k)
      for (SpMat::InnerIterator it(w_.A, k); it; ++it)
        trips.emplace_back(w_.n + it.row(), it.col(), it.value());
    for (int i = 0; i < w_.m; ++i) trips.emplace_back(w_.n + i, w_.n + i, kDeltaD);
    K_.resize(N, N);
    K_.setFromTriplets(trips.begin(), trips.end());
    K_.makeCompressed();

    diag_pos_.assign(w_.n, -1);
    for (int j = 0; j < w_.n; ++j) {
      // diagonal is the first stored entry of column j (smallest row index)
      int p = K_.outerIndexPtr()[j];
      if (K_.innerIndexPtr()[p] != j) return fail(sol, "KKT diagonal missing");
      diag_pos_[j] = p;
    }

    ldlt_.analyzePattern(K_);
    if (ldlt_.info() != Eigen::Success) return fail(sol, "KKT symbolic analysis failed");
    return true;
  }

  bool fail(LpSolution* sol, const std::string& msg) {
    sol->status = LpStatus::Error;
    sol->message = msg;
    return false;
  }

  void set_kkt_diagonal(const Vec& d) {
    double* vals = K_.valuePtr();
    for (int j = 0; j < w_.n; ++j) vals[diag_pos_[j]] = -(d[j] + kDeltaP);
  }

  // Unregularized augmented product: out = [ -D dx + A' dy ; A dx ]
  void kkt_product(const Vec& d, const Vec& v, Vec* out) const {
    out->resize(w_.n + w_.m);
    Vec dx = v.head(w_.n);
    Vec dy = v.tail(w_.m);
    out->head(w_.n) = -d.cwiseProduct(dx) + w_.A.transpose() * dy;
    out->tail(w_.m) = w_.A * dx;
  }

  // Numeric refactorization of the current diagonal. The LDLT factor has no
  // numerical pivoting, so once the scaling matrix becomes too ill-conditioned
  // for it the solver switches to a partial-pivoting sparse LU of the same
  // augmented matrix and stays there.
  bool factor_current(const Vec& d) {
    d_cur_ = d;
    if (!lu_mode_) {
      set_kkt_diagonal(d);
      ldlt_.factorize(K_);
      if (ldlt_.info() == Eigen::Success) return true;
      switch_to_lu();
    }
    return factor_lu();
  }

  void switch_to_lu() {
    if (lu_mode_) return;
    lu_mode_ = true;
    if (std::getenv("HYDRO_LDR_IPM_LOG")) fprintf(stderr, "  switching to LU kkt\n");
    // full (symmetric) pattern for the unsymmetric solver
    int N = w_.n + w_.m;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * w_.A.nonZeros() + N);
    for (int j = 0; j < w_.n; ++j) trips.emplace_back(j, j, -1.0);
    for (int k = 0; k < w_.A.outerSize(); ++k)
      for (SpMat::InnerIterator it(w_.A, k); it; ++it) {
        trips.emplace_back(w_.n + it.row(), it.col(), it.value());
        trips.emplace_back(it.col(), w_.n + it.row(), it.value());
      }
    for (int i = 0; i < w_.m; ++i) trips.emplace_back(w_.n + i, w_.n + i, kDeltaD);
    K_full_.resize(N, N);
    K_full_.setFromTriplets(trips.begin(), trips.end());
    K_full_.makeCompressed();
    diag_pos_full_.assign(w_.n, -1);
    for (int j = 0; j < w_.n; ++j) {
      for (int p = K_full_.outerIndexPtr()[j]; p < K_full_.outerIndexPtr()[j + 1]; ++p)
        if (K_full_.innerIndexPtr()[p] == j) {
          diag_pos_full_[j] = p;
          break;
        }
    }
    lu_.analyzePattern(K_full_);
  }

  bool factor_lu() {
    double* vals = K_full_.valuePtr();
    for (int j = 0; j < w_.n; ++j) vals[diag_pos_full_[j]] = -(d_cur_[j] + kDeltaP);
    lu_.factorize(K_full_);
    return lu_.info() == Eigen::Success;
  }

  Vec factor_solve(const Vec& rhs) {
    return lu_mode_ ? lu_.solve(rhs).eval() : ldlt_.solve(rhs).eval();
  }

  // Solve against the exact augmented system with monotone refinement. If the
  // factor cannot reach working accuracy, rebuild it with LU and retry once.
  bool kkt_solve(const Vec& d, const Vec& rhs, Vec* out) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      Vec sol = factor_solve(rhs);
      double rhs_norm = 1.0 + rhs.lpNorm<Eigen::Infinity>();
      Vec best = sol;
      double best_rn = kInf;
      double prev_rn = kInf;
      for (int pass = 0; pass < 10; ++pass) {
        Vec prod;
        kkt_product(d, sol, &prod);
        Vec resid = rhs - prod;
        double rn = resid.lpNorm<Eigen::Infinity>() / rhs_norm;
        if (rn < best_rn) {
          best_rn = rn;
          best = sol;
        }
        if (rn < 1e-12) break;
        if (rn > 0.5 * prev_rn) break;  // refinement no longer halving the residual
        prev_rn = rn;
        sol += factor_solve(resid);
      }
      if (best_rn <= 1e-8) {
        *out = best;
        return true;
      }
      if (lu_mode_) {
        if (std::getenv("HYDRO_LDR_IPM_LOG"))
          fprintf(stderr, "  kkt solve stuck at %.2e under LU\n", best_rn);
        *out = best;
        return best_rn <= 1e-6;  // usable but flag hopeless systems
      }
      switch_to_lu();
      if (!factor_lu()) return false;
    }
    return false;
  }

  void iterate(LpSolution* sol) {
    const int n = w_.n, m = w_.m;
    x_.resize(n);
    z_ = Vec::Zero(n);
    zu_ = Vec::Zero(n);
    y_ = Vec::Zero(m);

    // Mehrotra-style least-squares starting point.
    {
      Vec d = Vec::Ones(n);
      if (!factor_current(d)) {
        fail(sol, "initial KKT factorization failed");
        return;
      }
      Vec rhs = Vec::Zero(n + m);
      rhs.tail(m) = w_.b;
      Vec s1;
      if (!kkt_solve(d, rhs, &s1)) {
        fail(sol, "initial solve failed");
        return;
      }
      Vec x0 = s1.head(n);
      rhs.setZero();
      rhs.head(n) = -w_.c;
      Vec s2;
      kkt_solve(d, rhs, &s2);
      y_ = s2.tail(m);
      Vec g = w_.c - w_.A.transpose() * y_;

      for (int j = 0; j < n; ++j) {
        double xl = has_l_[j] ? w_.l[j] : -kInf;
        double xu = has_u_[j] ? w_.u[j] : kInf;
        double v = x0[j];
        if (has_l_[j] && has_u_[j]) {
          double span = xu - xl;
          double pad = std::min(0.25 * span, std::max(1.0, 0.01 * span));
          v = std::clamp(v, xl + pad, xu - pad);
        } else if (has_l_[j]) {
          v = std::max(v, xl + 1.0);
        } else if (has_u_[j]) {
          v = std::min(v, xu - 1.0);
        }
        x_[j] = v;
        if (has_l_[j]) z_[j] = std::max(1.0, g[j]);
        if (has_u_[j]) zu_[j] = std::max(1.0, z_[j] - g[j]);
      }
    }

    double bnorm = 1.0 + w_.b.lpNorm<Eigen::Infinity>();
    double cnorm = 1.0 + w_.c.lpNorm<Eigen::Infinity>();
    double mu0 = mu();
    double best_err = kInf;
    int stall = 0;

    for (int it = 0; it < kMaxIter; ++it) {
      Vec rp = w_.b - w_.A * x_;
      Vec rd = w_.c - w_.A.transpose() * y_ - z_ + zu_;
      double mu_now = mu();
      double gap = complementarity();
      double pobj = w_.c.dot(x_);
      double rp_rel = rp.lpNorm<Eigen::Infinity>() / bnorm;
      double rd_rel = rd.lpNorm<Eigen::Infinity>() / cnorm;
      double gap_rel = gap / (1.0 + std::abs(pobj));

      // unscaled absolute primal residual, the downstream feasibility metric
      double rp_abs = 0.0;
      for (int i = 0; i < m; ++i) rp_abs = std::max(rp_abs, std::abs(rp[i]) / w_.row_scale[i]);

      bool converged = rp_abs <= 1e-7 && rp_rel <= 1e-8 && rd_rel <= 1e-9 && gap_rel <= 1e-10;
      bool acceptable = rp_abs <= 5e-7 && rd_rel <= 1e-7 && gap_rel <= 1e-8;
      if (std::getenv("HYDRO_LDR_IPM_LOG"))
        fprintf(stderr, "ipm it=%3d mu=%9.2e rp=%9.2e rpa=%9.2e rd=%9.2e gap=%9.2e\n", it,
                mu_now, rp_rel, rp_abs, rd_rel, gap_rel);
      double err = rp_rel + rd_rel + gap_rel;
      if (err < best_err * 0.999) {
        best_err = err;
        stall = 0;
      } else if (++stall > 12 && acceptable) {
        converged = true;  // numerically stuck but within tolerance
      } else if (stall > 18) {
        diagnose_failure(sol, rp_rel, rd_rel, mu_now, mu0);
        return;
      }
      if (converged) {
        extract(sol, it);
        return;
      }
      if (x_.lpNorm<Eigen::Infinity>() > 1e13 || z_.lpNorm<Eigen::Infinity>() > 1e13 ||
          zu_.lpNorm<Eigen::Infinity>() > 1e13) {
        diagnose_failure(sol, rp_rel, rd_rel, mu_now, mu0);
        return;
      }

      // scaling matrix D and factorization for this iteration
      Vec d = Vec::Zero(n);
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        if (has_l_[j]) v += z_[j] / (x_[j] - w_.l[j]);
        if (has_u_[j]) v += zu_[j] / (w_.u[j] - x_[j]);
        d[j] = std::min(v, kDiagCap);  // pinned variables: modified scaling
      }
      if (!factor_current(d)) {
        fail(sol, "KKT factorization failed");
        return;
      }

      // predictor
      Vec rhs(n + m);
      rhs.head(n) = rd + z_ - zu_;  // r_d - r_cl/(x-l) + r_cu/(u-x) for affine
      rhs.tail(m) = rp;
      Vec step;
      if (!kkt_solve(d, rhs, &step)) {
        fail(sol, "KKT solve failed");
        return;
      }
      Vec dx = step.head(n);
      Vec dz(n), dzu(n);
      affine_duals(dx, &dz, &dzu, nullptr, nullptr);

      double ap = max_primal_step(dx);
      double ad = max_dual_step(dz, dzu);
      double mu_aff = mu_after(dx, dz, dzu, ap, ad);
      double sigma = std::pow(mu_aff / std::max(mu_now, 1e-300), 3);
      sigma = std::clamp(sigma, 1e-8, 0.99);

      // corrector
      Vec rcl(n), rcu(n);
      double target = sigma * mu_now;
      for (int j = 0; j < n; ++j) {
        rcl[j] = has_l_[j] ? target - (x_[j] - w_.l[j]) * z_[j] - dx[j] * dz[j] : 0.0;
        rcu[j] = has_u_[j] ? target - (w_.u[j] - x_[j]) * zu_[j] + dx[j] * dzu[j] : 0.0;
      }
      for (int j = 0; j < n; ++j) {
        double r1 = rd[j];
        if (has_l_[j]) r1 -= rcl[j] / (x_[j] - w_.l[j]);
        if (has_u_[j]) r1 += rcu[j] / (w_.u[j] - x_[j]);
        rhs[j] = r1;
      }
      rhs.tail(m) = rp;
      if (!kkt_solve(d, rhs, &step)) {
        fail(sol, "KKT solve failed");
        return;
      }
      dx = step.head(n);
      Vec dy = step.tail(m);
      for (int j = 0; j < n; ++j) {
        dz[j] = has_l_[j] ? (rcl[j] - z_[j] * dx[j]) / (x_[j] - w_.l[j]) : 0.0;
        dzu[j] = has_u_[j] ? (rcu[j] + zu_[j] * dx[j]) / (w_.u[j] - x_[j]) : 0.0;
      }

      ap = 0.9995 * max_primal_step(dx);
      ad = 0.9995 * max_dual_step(dz, dzu);
      ap = std::min(ap, 1.0);
      ad = std::min(ad, 1.0);
      if (std::getenv("HYDRO_LDR_IPM_LOG"))
        fprintf(stderr, "  steps ap=%.2e ad=%.2e sigma=%.2e\n", ap, ad, sigma);

      x_ += ap * dx;
      y_ += ad * dy;
      z_ += ad * dz;
      zu_ += ad * dzu;
    }
    diagnose_failure(sol, -1, -1, mu(), mu0);
  }

  // duals from the affine relation (r_cl = -(x-l)z, r_cu = -(u-x)w)
  void affine_duals(const Vec& dx, Vec* dz, Vec* dzu, const Vec*, const Vec*) const {
    for (int j = 0; j < w_.n; ++j) {
      (*dz)[j] = has_l_[j] ? (-(x_[j] - w_.l[j]) * z_[j] - z_[j] * dx[j]) / (x_[j] - w_.l[j]) : 0.0;
      (*dzu)[j] =
          has_u_[j] ? (-(w_.u[j] - x_[j]) * zu_[j] + zu_[j] * dx[j]) / (w_.u[j] - x_[j]) : 0.0;
    }
  }

  double mu() const { return complementarity() / std::max(1, active_pairs()); }

  int active_pairs() const {
    int k = 0;
    for (int j = 0; j < w_.n; ++j) k += (has_l_[j] ? 1 : 0) + (has_u_[j] ? 1 : 0);
    return k;
  }

  double complementarity() const {
    double s = 0.0;
    for (int j = 0; j < w_.n; ++j) {
      if (has_l_[j]) s += (x_[j] - w_.l[j]) * z_[j];
      if (has_u_[j]) s += (w_.u[j] - x_[j]) * zu_[j];
    }
    return s;
  }

  double max_primal_step(const Vec& dx) const {
    double a = 1.0 / 0.9995 * 10.0;  // allow slightly beyond 1 before capping
    for (int j = 0; j < w_.n; ++j) {
      if (has_l_[j] && dx[j] < 0) a = std::min(a, (w_.l[j] - x_[j]) / dx[j]);
      if (has_u_[j] && dx[j] > 0) a = std::min(a, (w_.u[j] - x_[j]) / dx[j]);
    }
    return a;
  }

  double max_dual_step(const Vec& dz, const Vec& dzu) const {
    double a = 1.0 / 0.9995 * 10.0;
    for (int j = 0; j < w_.n; ++j) {
      if (has_l_[j] && dz[j] < 0) a = std::min(a, -z_[j] / dz[j]);
      if (has_u_[j] && dzu[j] < 0) a = std::min(a, -zu_[j] / dzu[j]);
    }
    return a;
  }

  double mu_after(const Vec& dx, const Vec& dz, const Vec& dzu, double ap, double ad) const {
    double s = 0.0;
    for (int j = 0; j < w_.n; ++j) {
      if (has_l_[j]) s += (x_[j] + ap * dx[j] - w_.l[j]) * (z_[j] + ad * dz[j]);
      if (has_u_[j]) s += (w_.u[j] - x_[j] - ap * dx[j]) * (zu_[j] + ad * dzu[j]);
    }
    return s / std::max(1, active_pairs());
  }

  void diagnose_failure(LpSolution* sol, double rp_rel, double rd_rel, double mu_now,
                        double mu0) {
    // Primal residual stuck while complementarity collapsed: infeasible.
    Vec rp = w_.b - w_.A * x_;
    double rp_rel_now = rp.lpNorm<Eigen::Infinity>() / (1.0 + w_.b.lpNorm<Eigen::Infinity>());
    double dual_norm = std::max(z_.lpNorm<Eigen::Infinity>(), zu_.lpNorm<Eigen::Infinity>());
    if (rp_rel_now > 1e-6 && (mu_now < 1e-10 * std::max(mu0, 1.0) || dual_norm > 1e12)) {
      sol->status = LpStatus::Infeasible;
      int worst = 0;
      for (int i = 1; i < w_.m; ++i)
        if (std::abs(rp[i]) > std::abs(rp[worst])) worst = i;
      sol->message = "infeasible; largest residual on row '" + model_.row_name(worst) + "'";
      return;
    }
    if (x_.lpNorm<Eigen::Infinity>() > 1e12 && rp_rel_now < 1e-6) {
      sol->status = LpStatus::Unbounded;
      sol->message = "iterates diverging with feasible primal: unbounded";
      return;
    }
    sol->status = LpStatus::Error;
    sol->message = "interior point did not converge (rp=" + std::to_string(rp_rel) +
                   ", rd=" + std::to_string(rd_rel) + ")";
  }

  void extract(LpSolution* sol, int iters) {
    sol->status = LpStatus::Optimal;
    sol->iterations = iters;
    sol->x.assign(w_.n_orig, 0.0);
    for (size_t k = 0; k < w_.fixed_var.size(); ++k)
      sol->x[w_.fixed_var[k]] = w_.fixed_val[k];
    for (int j0 = 0; j0 < w_.n_orig; ++j0) {
      int j = w_.var_map[j0];
      if (j >= 0) sol->x[j0] = x_[j] * w_.col_scale[j];
    }
    // clip tiny bound violations from the interior tolerance
    for (int j0 = 0; j0 < w_.n_orig; ++j0) {
      double lo = model_.lower(j0), hi = model_.upper(j0);
      sol->x[j0] = std::min(std::max(sol->x[j0], lo), hi);
    }
    double obj = 0.0;
    for (int j0 = 0; j0 < w_.n_orig; ++j0) obj += model_.objective_coeff(j0) * sol->x[j0];
    sol->objective = obj;
    sol->y.assign(w_.m, 0.0);
    for (int i = 0; i < w_.m; ++i) sol->y[i] = y_[i] * w_.row_scale[i] * w_.obj_scale;
  }
};

}  // namespace

LpSolution solve_interior_point(const LpModel& model) {
  if (model.n_rows() == 0) return solve_simplex(model);
  InteriorPoint ipm(model);
  return ipm.run();
}

}  // namespace ldr
