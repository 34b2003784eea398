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

#include "csg/cop.h"

#include <cmath>
#include <limits>

#include "csg/errors.h"

namespace csg {

const char* cop_status_name(CopStatus status) {
  return status == CopStatus::kOptimal ? "optimal" : "infeasible";
}

namespace {

std::vector<int> pair_offsets(const ReducedMdp& r) {
  std::vector<int> offset(r.num_states() + 1, 0);
  for (int x = 0; x < r.num_states(); ++x) offset[x + 1] = offset[x] + r.num_actions(x);
  return offset;
}

// Flow-balance rows over the first num_pairs columns of a matrix with
// `extra` trailing columns.
void fill_flow_rows(const ReducedMdp& r, const std::vector<int>& offset, int extra,
                    LinearProgram& lp) {
  const int S = r.num_states();
  const int P = offset.back();
  lp.A_eq = Eigen::MatrixXd::Zero(S, P + extra);
  lp.b_eq.resize(S);
  for (int x = 0; x < S; ++x) {
    lp.b_eq(x) = (1.0 - r.alpha) * r.eta[x];
    for (int a = 0; a < r.num_actions(x); ++a) lp.A_eq(x, offset[x] + a) += 1.0;
  }
  for (int z = 0; z < S; ++z) {
    for (int a = 0; a < r.num_actions(z); ++a) {
      for (int x = 0; x < S; ++x) {
        const double p = r.kernel[z][a][x];
        if (p != 0.0) lp.A_eq(x, offset[z] + a) -= r.alpha * p;
      }
    }
  }
}

std::vector<std::vector<double>> unpack(const ReducedMdp& r, const std::vector<int>& offset,
                                        const Eigen::VectorXd& x) {
  std::vector<std::vector<double>> w(r.num_states());
  for (int s = 0; s < r.num_states(); ++s) {
    w[s].resize(r.num_actions(s));
    for (int a = 0; a < r.num_actions(s); ++a) w[s][a] = x(offset[s] + a);
  }
  return w;
}

// LP solutions can drift from unit mass by round-off; rescale before
// building the measure so its invariants hold.
OccupationMeasure to_measure(int player, std::vector<std::vector<double>> w) {
  double mass = 0.0;
  for (const auto& row : w)
    for (double v : row) mass += v;
  if (mass > 0.0 && std::abs(mass - 1.0) <= 1e-6) {
    for (auto& row : w)
      for (double& v : row) v /= mass;
  }
  return OccupationMeasure::from_weights(player, std::move(w));
}

}  // namespace

LinearProgram build_cop(const ReducedMdp& r) {
  const auto offset = pair_offsets(r);
  const int P = offset.back();
  const int L = r.num_constraints();
  LinearProgram lp;
  fill_flow_rows(r, offset, 0, lp);
  lp.c.resize(P);
  lp.A_le = Eigen::MatrixXd::Zero(L, P);
  lp.b_le.resize(L);
  for (int x = 0; x < r.num_states(); ++x) {
    for (int a = 0; a < r.num_actions(x); ++a) {
      lp.c(offset[x] + a) = r.cost[0][x][a];
      for (int l = 1; l <= L; ++l) lp.A_le(l - 1, offset[x] + a) = r.cost[l][x][a];
    }
  }
  for (int l = 1; l <= L; ++l) lp.b_le(l - 1) = r.kappa[l - 1];
  return lp;
}

CopSolution solve_cop(const ReducedMdp& reduced) {
  const auto offset = pair_offsets(reduced);
  CopSolution sol;
  sol.player = reduced.player;
  sol.lp = solve_lp(build_cop(reduced));
  if (sol.lp.status == LpStatus::kUnbounded) {
    throw SolverFailure("constrained optimisation problem reported unbounded");
  }
  if (sol.lp.status == LpStatus::kInfeasible) {
    sol.status = CopStatus::kInfeasible;
    return sol;
  }
  sol.status = CopStatus::kOptimal;
  sol.mu = to_measure(reduced.player, unpack(reduced, offset, sol.lp.x));
  sol.phi = disaggregate(sol.mu).strategy;
  sol.value = pair_cost(sol.mu, reduced.cost[0]);
  for (int l = 0; l < reduced.num_constraints(); ++l) {
    sol.duals.push_back(std::max(0.0, -sol.lp.y_le(l)));
  }
  return sol;
}

CopSolution solve_cop(const GameSpec& spec, int player, const MultiStrategy& opp) {
  return solve_cop(reduce(spec, player, opp));
}

SlaterResult slater_check(const ReducedMdp& r) {
  SlaterResult out;
  const int L = r.num_constraints();
  if (L == 0) {
    out.no_constraints = true;
    out.slack = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto offset = pair_offsets(r);
  const int P = offset.back();
  // Columns: mu pairs, then s+ and s- for the free margin s.
  LinearProgram lp;
  fill_flow_rows(r, offset, 2, lp);
  lp.c = Eigen::VectorXd::Zero(P + 2);
  lp.c(P) = -1.0;
  lp.c(P + 1) = 1.0;
  lp.A_le = Eigen::MatrixXd::Zero(L, P + 2);
  lp.b_le.resize(L);
  for (int l = 1; l <= L; ++l) {
    for (int x = 0; x < r.num_states(); ++x)
      for (int a = 0; a < r.num_actions(x); ++a) lp.A_le(l - 1, offset[x] + a) = r.cost[l][x][a];
    lp.A_le(l - 1, P) = 1.0;
    lp.A_le(l - 1, P + 1) = -1.0;
    lp.b_le(l - 1) = r.kappa[l - 1];
  }
  const auto res = solve_lp(lp);
  if (res.status != LpStatus::kOptimal) {
    throw SolverFailure("Slater auxiliary program did not reach an optimum");
  }
  out.slack = res.x(P) - res.x(P + 1);
  if (out.slack > kComputedTol) {
    out.witness = disaggregate(to_measure(r.player, unpack(r, offset, res.x))).strategy;
  }
  return out;
}

SlaterResult slater_check(const GameSpec& spec, int player, const MultiStrategy& opp) {
  return slater_check(reduce(spec, player, opp));
}

}  // namespace csg
