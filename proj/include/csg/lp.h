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

#ifndef CSG_LP_H_
#define CSG_LP_H_

#include <Eigen/Dense>
#include <string>

namespace csg {

// minimize c'x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  x >= 0.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_le;
  Eigen::VectorXd b_le;

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_eq() const { return static_cast<int>(b_eq.size()); }
  int num_le() const { return static_cast<int>(b_le.size()); }

  // Throws InvalidArgument on inconsistent dimensions or non-finite data.
  void check() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* lp_status_name(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double value = 0.0;
  // Lagrange multipliers in the convention c = A_eq' y_eq + A_le' y_le + r,
  // r >= 0, y_le <= 0.
  Eigen::VectorXd y_eq;
  Eigen::VectorXd y_le;
  // Certificates, filled when optimal.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-10;
  double feasibility_tol = 1e-9;
  double dual_tol = 1e-9;
  double gap_tol = 1e-8;
};

// Dense two-phase primal simplex with Bland's rule. Throws SolverFailure when
// the iteration guard 50 * (rows + cols) is exceeded or the optimal basis
// fails its primal-dual certification.
LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace csg

#endif  // CSG_LP_H_
