// Copyright 2026 The csg-solver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csg/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "csg/errors.h"

namespace csg {

void LinearProgram::check() const {
  const int n = num_vars();
  if (A_eq.rows() != num_eq() || (num_eq() > 0 && A_eq.cols() != n)) {
    throw InvalidArgument("equality block has inconsistent dimensions");
  }
  if (A_le.rows() != num_le() || (num_le() > 0 && A_le.cols() != n)) {
    throw InvalidArgument("inequality block has inconsistent dimensions");
  }
  if (!c.allFinite() || !b_eq.allFinite() || !b_le.allFinite() ||
      (num_eq() > 0 && !A_eq.allFinite()) || (num_le() > 0 && !A_le.allFinite())) {
    throw InvalidArgument("linear program has non-finite data");
  }
}

const char* lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class PhaseOutcome { kOptimal, kUnbounded };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {
    n_ = lp.num_vars();
    m1_ = lp.num_eq();
    m2_ = lp.num_le();
    m_ = m1_ + m2_;
    sign_.assign(m_, 1.0);
    for (int r = 0; r < m_; ++r) {
      if (rhs(r) < 0.0) sign_[r] = -1.0;
    }
    // Every equality row and every sign-flipped inequality row gets an
    // artificial column; the other inequality rows start on their slack.
    art_row_.clear();
    for (int r = 0; r < m_; ++r) {
      if (r < m1_ || sign_[r] < 0.0) art_row_.push_back(r);
    }
    n_art_ = static_cast<int>(art_row_.size());
    N_ = n_ + m2_ + n_art_;
    T_ = Tableau::Zero(m_, N_ + 1);
    basis_.assign(m_, -1);
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < n_; ++j) T_(r, j) = sign_[r] * coef(r, j);
      if (r >= m1_) T_(r, n_ + (r - m1_)) = sign_[r];
      T_(r, N_) = sign_[r] * rhs(r);
      if (r >= m1_ && sign_[r] > 0.0) basis_[r] = n_ + (r - m1_);
    }
    for (int k = 0; k < n_art_; ++k) {
      const int r = art_row_[k];
      T_(r, n_ + m2_ + k) = 1.0;
      basis_[r] = n_ + m2_ + k;
    }
    max_iter_ = 50 * (m_ + n_ + m2_);
  }

  LpResult run() {
    LpResult result;
    // Phase 1: minimize the sum of artificials.
    std::vector<double> cost1(N_, 0.0);
    for (int k = 0; k < n_art_; ++k) cost1[n_ + m2_ + k] = 1.0;
    std::vector<bool> allowed(N_, true);
    optimize(cost1, allowed);
    double infeas = 0.0;
    for (int r = 0; r < m_; ++r) {
      if (is_artificial(basis_[r])) infeas += T_(r, N_);
    }
    const double b_scale = std::max(1.0, std::max(lp_.b_eq.size() ? lp_.b_eq.cwiseAbs().maxCoeff() : 0.0,
                                                  lp_.b_le.size() ? lp_.b_le.cwiseAbs().maxCoeff() : 0.0));
    if (infeas > opt_.feasibility_tol * b_scale) {
      result.status = LpStatus::kInfeasible;
      result.iterations = iterations_;
      return result;
    }
    // Drive remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent on the others.
    redundant_.assign(m_, false);
    for (int r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      T_(r, N_) = 0.0;
      int best = -1;
      double best_abs = opt_.pivot_tol;
      for (int j = 0; j < n_ + m2_; ++j) {
        if (std::abs(T_(r, j)) > best_abs) {
          best_abs = std::abs(T_(r, j));
          best = j;
        }
      }
      if (best < 0) {
        redundant_[r] = true;
      } else {
        pivot(r, best, nullptr);
      }
    }

    // Phase 2.
    std::vector<double> cost2(N_, 0.0);
    for (int j = 0; j < n_; ++j) cost2[j] = lp_.c(j);
    for (int j = n_ + m2_; j < N_; ++j) allowed[j] = false;
    if (optimize(cost2, allowed) == PhaseOutcome::kUnbounded) {
      result.status = LpStatus::kUnbounded;
      result.iterations = iterations_;
      return result;
    }
    result.status = LpStatus::kOptimal;
    result.iterations = iterations_;
    recover(result);
    return result;
  }

 private:
  double coef(int r, int j) const { return r < m1_ ? lp_.A_eq(r, j) : lp_.A_le(r - m1_, j); }
  double rhs(int r) const { return r < m1_ ? lp_.b_eq(r) : lp_.b_le(r - m1_); }
  bool is_artificial(int j) const { return j >= n_ + m2_; }

  // Column j of the sign-normalized constraint matrix [A | S].
  double std_coef(int r, int j) const {
    if (j < n_) return sign_[r] * coef(r, j);
    if (j < n_ + m2_) return (r >= m1_ && j - n_ == r - m1_) ? sign_[r] : 0.0;
    return 0.0;
  }

  void pivot(int r, int j, std::vector<double>* d) {
    const double p = T_(r, j);
    T_.row(r) /= p;
    T_(r, j) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = T_(i, j);
      if (f == 0.0) continue;
      T_.row(i) -= f * T_.row(r);
      T_(i, j) = 0.0;
    }
    if (d != nullptr) {
      const double f = (*d)[j];
      if (f != 0.0) {
        for (int k = 0; k <= N_; ++k) (*d)[k] -= f * T_(r, k);
        (*d)[j] = 0.0;
      }
    }
    basis_[r] = j;
  }

  PhaseOutcome optimize(const std::vector<double>& cost, const std::vector<bool>& allowed) {
    // d[j] = cost_j - cost_B' T[:, j]; d[N] = -objective.
    std::vector<double> d(N_ + 1, 0.0);
    for (int j = 0; j < N_; ++j) d[j] = cost[j];
    for (int r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int k = 0; k <= N_; ++k) d[k] -= cb * T_(r, k);
    }
    double c_scale = 1.0;
    for (double v : cost) c_scale = std::max(c_scale, std::abs(v));
    const double dtol = opt_.pivot_tol * c_scale;
    while (true) {
      int enter = -1;
      for (int j = 0; j < N_; ++j) {
        if (allowed[j] && d[j] < -dtol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return PhaseOutcome::kOptimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        if (redundant_.size() && redundant_[r]) continue;
        const double a = T_(r, enter);
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(0.0, T_(r, N_)) / a;
        const double tie = 1e-12 * std::max(1.0, best_ratio);
        if (leave < 0 || ratio < best_ratio - tie) {
          leave = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie && basis_[r] < basis_[leave]) {
          leave = r;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return PhaseOutcome::kUnbounded;
      if (++iterations_ > max_iter_) {
        throw SolverFailure("simplex iteration guard exceeded");
      }
      pivot(leave, enter, &d);
    }
  }

  void recover(LpResult& result) {
    std::vector<int> rows;
    for (int r = 0; r < m_; ++r) {
      if (!redundant_[r]) rows.push_back(r);
    }
    const int k = static_cast<int>(rows.size());
    Eigen::MatrixXd B(k, k);
    Eigen::VectorXd b(k), cb(k);
    for (int a = 0; a < k; ++a) {
      const int col = basis_[rows[a]];
      cb(a) = col < n_ ? lp_.c(col) : 0.0;
      for (int q = 0; q < k; ++q) B(q, a) = std_coef(rows[q], col);
      b(a) = sign_[rows[a]] * rhs(rows[a]);
    }
    Eigen::VectorXd xb = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd yb = Eigen::VectorXd::Zero(k);
    if (k > 0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
      if (!lu.isInvertible()) throw SolverFailure("final simplex basis is singular");
      xb = lu.solve(b);
      yb = lu.transpose().solve(cb);
    }
    result.x = Eigen::VectorXd::Zero(n_);
    for (int a = 0; a < k; ++a) {
      const int col = basis_[rows[a]];
      if (col < n_) result.x(col) = std::max(0.0, xb(a));
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
    for (int a = 0; a < k; ++a) y(rows[a]) = sign_[rows[a]] * yb(a);
    result.y_eq = y.head(m1_);
    result.y_le = y.tail(m2_);
    result.value = lp_.c.dot(result.x);

    // Certificates.
    double primal = 0.0;
    if (m1_ > 0) primal = std::max(primal, (lp_.A_eq * result.x - lp_.b_eq).cwiseAbs().maxCoeff());
    if (m2_ > 0) primal = std::max(primal, (lp_.A_le * result.x - lp_.b_le).maxCoeff());
    Eigen::VectorXd reduced = lp_.c;
    if (m1_ > 0) reduced -= lp_.A_eq.transpose() * result.y_eq;
    if (m2_ > 0) reduced -= lp_.A_le.transpose() * result.y_le;
    double dual = n_ > 0 ? std::max(0.0, -reduced.minCoeff()) : 0.0;
    if (m2_ > 0) dual = std::max(dual, result.y_le.maxCoeff());
    double dual_obj = 0.0;
    if (m1_ > 0) dual_obj += lp_.b_eq.dot(result.y_eq);
    if (m2_ > 0) dual_obj += lp_.b_le.dot(result.y_le);
    result.primal_residual = std::max(0.0, primal);
    result.dual_residual = dual;
    result.duality_gap = std::abs(result.value - dual_obj);

    const double b_scale = std::max(1.0, std::max(m1_ ? lp_.b_eq.cwiseAbs().maxCoeff() : 0.0,
                                                  m2_ ? lp_.b_le.cwiseAbs().maxCoeff() : 0.0));
    const double c_scale = std::max(1.0, n_ ? lp_.c.cwiseAbs().maxCoeff() : 0.0);
    if (result.primal_residual > opt_.feasibility_tol * b_scale ||
        result.dual_residual > opt_.dual_tol * c_scale ||
        result.duality_gap > opt_.gap_tol * std::max(1.0, std::abs(result.value))) {
      throw SolverFailure("optimal basis failed certification (primal " +
                          std::to_string(result.primal_residual) + ", dual " +
                          std::to_string(result.dual_residual) + ", gap " +
                          std::to_string(result.duality_gap) + ")");
    }
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  int n_ = 0, m1_ = 0, m2_ = 0, m_ = 0, n_art_ = 0, N_ = 0;
  std::vector<double> sign_;
  std::vector<int> art_row_;
  std::vector<int> basis_;
  std::vector<bool> redundant_;
  Tableau T_;
  int iterations_ = 0;
  int max_iter_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  lp.check();
  Simplex simplex(lp, options);
  return simplex.run();
}

}  // namespace csg
