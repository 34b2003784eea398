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

#ifndef CSG_MODEL_H_
#define CSG_MODEL_H_

#include <span>
#include <string>
#include <vector>

namespace csg {

// Tolerances shared across modules.
inline constexpr double kInputTol = 1e-12;
inline constexpr double kComputedTol = 1e-9;

// A finite constrained discounted stochastic game.
//
// Joint action profiles at a state are indexed row-major over
// (a_1, ..., a_n) with the last player varying fastest. Cost index 0 is the
// objective; indices 1..l are constraint costs bounded by kappa.
struct GameSpec {
  int n_players = 1;
  std::vector<std::string> states;
  // actions[i][x]: action identifiers of player i at state x.
  std::vector<std::vector<std::vector<std::string>>> actions;
  // transition[x][j][y]
  std::vector<std::vector<std::vector<double>>> transition;
  // costs[i][l][x][j]
  std::vector<std::vector<std::vector<std::vector<double>>>> costs;
  // kappa[i][l - 1]
  std::vector<std::vector<double>> kappa;
  double alpha = 0.5;
  std::vector<double> eta;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_constraints() const;
  int num_actions(int player, int state) const;
  int num_profiles(int state) const;

  // Per-player action indices of profile j at state x.
  std::vector<int> decode_profile(int state, int j) const;
  int encode_profile(int state, std::span<const int> profile) const;
  // Action index of `player` inside profile j at state x.
  int action_in_profile(int state, int j, int player) const;

  std::string profile_label(int state, int j) const;
};

// Per-state action distributions of a single player.
struct StationaryStrategy {
  std::vector<std::vector<double>> probs;  // probs[x][a]

  const std::vector<double>& operator[](int x) const { return probs[x]; }
  int num_states() const { return static_cast<int>(probs.size()); }
};

using MultiStrategy = std::vector<StationaryStrategy>;

// Player i's view of the game with opponents' stationary strategies fixed.
struct ReducedMdp {
  int player = 0;
  double alpha = 0.5;
  std::vector<double> eta;
  std::vector<double> kappa;
  // cost[l][x][a]
  std::vector<std::vector<std::vector<double>>> cost;
  // kernel[x][a][y]
  std::vector<std::vector<std::vector<double>>> kernel;

  int num_states() const { return static_cast<int>(eta.size()); }
  int num_actions(int x) const { return static_cast<int>(kernel[x].size()); }
  int num_constraints() const { return static_cast<int>(kappa.size()); }
  int num_pairs() const;
};

enum class Invariant {
  kPlayers = 0,
  kStates,
  kAlphaRange,
  kActionsNonEmpty,
  kIndexComplete,
  kTransitionNegative,
  kRowNotStochastic,
  kEtaNegative,
  kEtaSum,
  kKappaShape,
  kNonFinite,
};

const char* invariant_name(Invariant inv);

struct Violation {
  Invariant invariant;
  std::vector<int> index;  // numeric position, used for ordering
  std::string where;       // the same position with original identifiers
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_spec(const GameSpec& spec);

// Throws InvalidArgument listing the first violation when the spec is invalid.
void require_valid(const GameSpec& spec);

StationaryStrategy uniform_strategy(const GameSpec& spec, int player);
MultiStrategy uniform_profile(const GameSpec& spec);
StationaryStrategy pure_strategy(const GameSpec& spec, int player,
                                 std::span<const int> action_per_state);

// Throws InvalidArgument if `phi` is not a valid strategy of `player`.
void validate_strategy(const GameSpec& spec, int player,
                       const StationaryStrategy& phi);
// Validates every entry except `skip_player` (pass -1 to check all).
void validate_profile(const GameSpec& spec, const MultiStrategy& phi,
                      int skip_player = -1);

// Product weights of every joint profile at state x under phi.
std::vector<double> profile_weights(const GameSpec& spec,
                                    const MultiStrategy& phi, int state);

// Marginalizes the game onto `player` given the other entries of `opp`.
// The entry of `opp` for `player` itself is ignored and may be empty.
ReducedMdp reduce(const GameSpec& spec, int player, const MultiStrategy& opp);

// Largest |C_i^l| entry over everything in the spec.
double max_abs_cost(const GameSpec& spec);

}  // namespace csg

#endif  // CSG_MODEL_H_
