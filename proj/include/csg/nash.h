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

#ifndef CSG_NASH_H_
#define CSG_NASH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csg/cop.h"
#include "csg/model.h"

namespace csg {

enum class SweepOrder { kGaussSeidel, kJacobi };

const char* sweep_order_name(SweepOrder order);
SweepOrder parse_sweep_order(const std::string& name);

// Mixing weight given to the fresh best response at damped sweep k = 0, 1, ...
struct DampingSchedule {
  enum class Kind { kHarmonic, kConstant, kPower };

  Kind kind = Kind::kHarmonic;
  double param = 1.0;

  // harmonic: 1/(k+2); constant: param; power: (k+2)^-param
  double operator()(int k) const;
  std::string describe() const;
  static DampingSchedule parse(const std::string& text);
};

struct NashOptions {
  int max_sweeps = 500;
  DampingSchedule damping;
  double eps = 1e-6;
  int restarts = 5;
  SweepOrder order = SweepOrder::kGaussSeidel;
  std::uint64_t seed = 0;
  int threads = 1;
  // Starting profile of the first attempt; uniform when absent.
  std::optional<MultiStrategy> initial;
};

struct NashReport {
  MultiStrategy profile;
  std::vector<double> gap;          // J_i^0 - value of COP(phi_-i)
  std::vector<double> violation;    // max_l (J_i^l - kappa_i^l)^+
  std::vector<bool> br_infeasible;  // COP(phi_-i) had no feasible point
  std::vector<double> objective;    // J_i^0(phi)
  std::vector<double> br_value;     // value of COP(phi_-i)
  int sweeps = 0;
  int attempt = 0;
  bool converged = false;
  bool slater_warning = false;
  double max_flow_residual = 0.0;
  std::vector<double> trajectory;   // max gap after each sweep of `attempt`

  // max_i max(gap_i, violation_i); +inf with any infeasible marker.
  double max_gap() const;
};

// Exact best response of `player` to the other entries of phi.
CopSolution best_response(const GameSpec& spec, int player, const MultiStrategy& phi);

// Single certificate evaluation; `eps` only sets the converged flag.
NashReport nash_gap(const GameSpec& spec, const MultiStrategy& phi, double eps = 1e-6);

NashReport solve_nash(const GameSpec& spec, const NashOptions& options = {});

}  // namespace csg

#endif  // CSG_NASH_H_
