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

#ifndef CSG_EVALUATION_H_
#define CSG_EVALUATION_H_

#include <cstdint>
#include <vector>

#include "csg/model.h"

namespace csg {

// Discounted functionals J[i][l] of a stationary profile plus constraint
// slacks kappa[i][l-1] - J[i][l].
struct CostReport {
  std::vector<std::vector<double>> J;
  std::vector<std::vector<double>> slack;
};

struct FeasibilityReport {
  std::vector<bool> feasible;
  std::vector<std::vector<double>> slack;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t episodes = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
};

// Strategy-averaged one-step kernel P_phi[x][y] and costs c_phi[i][l][x].
struct AveragedChain {
  std::vector<std::vector<double>> kernel;
  std::vector<std::vector<std::vector<double>>> cost;
};

AveragedChain average_chain(const GameSpec& spec, const MultiStrategy& phi);

// Solves (I - alpha P) v = c for each column of `rhs` with one dense LU.
// Throws NumericalError when the residual exceeds 1e-10 * S * max(1, |c|).
std::vector<std::vector<double>> solve_discounted(
    const std::vector<std::vector<double>>& kernel, double alpha,
    const std::vector<std::vector<double>>& rhs);

// Exact values via the discounted linear system.
CostReport evaluate_exact(const GameSpec& spec, const MultiStrategy& phi);

// Same, but starting from `eta` instead of spec.eta.
CostReport evaluate_exact(const GameSpec& spec, const MultiStrategy& phi,
                          const std::vector<double>& eta);

// Smallest T >= 1 with alpha^T * max_cost < 1e-10.
int mc_horizon(double alpha, double max_cost);

// Monte Carlo estimate of every J[i][l]; episode e uses CounterRng(seed, e).
// `threads` only affects speed: per-block sums are combined in block order.
std::vector<std::vector<McEstimate>> evaluate_mc(const GameSpec& spec,
                                                 const MultiStrategy& phi,
                                                 std::int64_t episodes,
                                                 std::uint64_t seed,
                                                 int threads = 1);

FeasibilityReport feasible(const GameSpec& spec, const MultiStrategy& phi);

}  // namespace csg

#endif  // CSG_EVALUATION_H_
