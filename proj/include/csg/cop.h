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

#ifndef CSG_COP_H_
#define CSG_COP_H_

#include <optional>
#include <vector>

#include "csg/lp.h"
#include "csg/model.h"
#include "csg/occupation.h"

namespace csg {

enum class CopStatus { kOptimal, kInfeasible };

const char* cop_status_name(CopStatus status);

struct CopSolution {
  CopStatus status = CopStatus::kInfeasible;
  int player = 0;
  double value = 0.0;
  OccupationMeasure mu;
  StationaryStrategy phi;
  // Nonnegative multipliers of the constraint rows sum c_l mu <= kappa_l.
  std::vector<double> duals;
  LpResult lp;

  bool optimal() const { return status == CopStatus::kOptimal; }
};

// Variables are mu(x, a) in (state, action) lexicographic order.
LinearProgram build_cop(const ReducedMdp& reduced);

CopSolution solve_cop(const ReducedMdp& reduced);
CopSolution solve_cop(const GameSpec& spec, int player, const MultiStrategy& opp);

struct SlaterResult {
  bool no_constraints = false;
  double slack = 0.0;  // +inf when no_constraints
  std::optional<StationaryStrategy> witness;
};

// Largest s such that some occupation measure meets every constraint with
// margin s; a witness strategy is returned when s > 1e-9.
SlaterResult slater_check(const ReducedMdp& reduced);
SlaterResult slater_check(const GameSpec& spec, int player, const MultiStrategy& opp);

}  // namespace csg

#endif  // CSG_COP_H_
