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

#include "csg/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "csg/errors.h"

namespace csg {

int GameSpec::num_constraints() const {
  return kappa.empty() ? 0 : static_cast<int>(kappa.front().size());
}

int GameSpec::num_actions(int player, int state) const {
  return static_cast<int>(actions[player][state].size());
}

int GameSpec::num_profiles(int state) const {
  int count = 1;
  for (int i = 0; i < n_players; ++i) count *= num_actions(i, state);
  return count;
}

std::vector<int> GameSpec::decode_profile(int state, int j) const {
  std::vector<int> profile(n_players);
  for (int i = n_players - 1; i >= 0; --i) {
    const int na = num_actions(i, state);
    profile[i] = j % na;
    j /= na;
  }
  return profile;
}

int GameSpec::encode_profile(int state, std::span<const int> profile) const {
  int j = 0;
  for (int i = 0; i < n_players; ++i) j = j * num_actions(i, state) + profile[i];
  return j;
}

int GameSpec::action_in_profile(int state, int j, int player) const {
  for (int i = n_players - 1; i > player; --i) j /= num_actions(i, state);
  return j % num_actions(player, state);
}

std::string GameSpec::profile_label(int state, int j) const {
  const auto profile = decode_profile(state, j);
  std::string label;
  for (int i = 0; i < n_players; ++i) {
    if (i > 0) label += ',';
    label += actions[i][state][profile[i]];
  }
  return label;
}

int ReducedMdp::num_pairs() const {
  int count = 0;
  for (const auto& row : kernel) count += static_cast<int>(row.size());
  return count;
}

const char* invariant_name(Invariant inv) {
  switch (inv) {
    case Invariant::kPlayers: return "players";
    case Invariant::kStates: return "states";
    case Invariant::kAlphaRange: return "alpha out of range";
    case Invariant::kActionsNonEmpty: return "empty action set";
    case Invariant::kIndexComplete: return "index incomplete";
    case Invariant::kTransitionNegative: return "negative transition";
    case Invariant::kRowNotStochastic: return "row not stochastic";
    case Invariant::kEtaNegative: return "negative eta";
    case Invariant::kEtaSum: return "eta not a distribution";
    case Invariant::kKappaShape: return "kappa shape";
    case Invariant::kNonFinite: return "non-finite value";
  }
  return "unknown";
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(const GameSpec& spec) : spec_(spec) {}

  void add(Invariant inv, std::vector<int> index, std::string where,
           std::string message) {
    report_.violations.push_back(
        {inv, std::move(index), std::move(where), std::move(message)});
  }

  std::string state_name(int x) const {
    return x < spec_.num_states() ? spec_.states[x] : std::to_string(x);
  }

  ValidationReport finish() {
    std::stable_sort(report_.violations.begin(), report_.violations.end(),
                     [](const Violation& a, const Violation& b) {
                       return std::tie(a.invariant, a.index) <
                              std::tie(b.invariant, b.index);
                     });
    return std::move(report_);
  }

 private:
  const GameSpec& spec_;
  ValidationReport report_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate_spec(const GameSpec& spec) {
  ReportBuilder rb(spec);
  const int n = spec.n_players;
  const int S = spec.num_states();

  if (n < 1) {
    rb.add(Invariant::kPlayers, {}, "", "at least one player is required");
    return rb.finish();
  }
  if (S < 1) {
    rb.add(Invariant::kStates, {}, "", "at least one state is required");
    return rb.finish();
  }
  {
    std::set<std::string> seen;
    for (int x = 0; x < S; ++x) {
      if (!seen.insert(spec.states[x]).second) {
        rb.add(Invariant::kStates, {x}, "state=" + spec.states[x],
               "duplicate state identifier");
      }
    }
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    rb.add(Invariant::kAlphaRange, {}, "alpha",
           "alpha = " + fmt(spec.alpha) + " is outside (0,1)");
  }

  // Action sets; a state is structurally usable only if every player has a
  // complete, non-empty action list there.
  std::vector<bool> usable(S, true);
  if (static_cast<int>(spec.actions.size()) != n) {
    rb.add(Invariant::kIndexComplete, {}, "actions",
           "expected one action table per player");
    return rb.finish();
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(spec.actions[i].size()) != S) {
      rb.add(Invariant::kIndexComplete, {i}, "actions[" + std::to_string(i + 1) + "]",
             "expected one action list per state");
      return rb.finish();
    }
    for (int x = 0; x < S; ++x) {
      if (spec.actions[i][x].empty()) {
        rb.add(Invariant::kActionsNonEmpty, {i, x},
               "player=" + std::to_string(i + 1) + ", state=" + rb.state_name(x),
               "action set is empty");
        usable[x] = false;
      }
    }
  }

  // Transition tensor.
  if (static_cast<int>(spec.transition.size()) != S) {
    rb.add(Invariant::kIndexComplete, {}, "transition",
           "expected one transition block per state");
  } else {
    for (int x = 0; x < S; ++x) {
      if (!usable[x]) continue;
      const int J = spec.num_profiles(x);
      if (static_cast<int>(spec.transition[x].size()) != J) {
        rb.add(Invariant::kIndexComplete, {x}, "transition state=" + rb.state_name(x),
               "expected " + std::to_string(J) + " profiles");
        continue;
      }
      for (int j = 0; j < J; ++j) {
        const auto& row = spec.transition[x][j];
        const std::string where =
            "state=" + rb.state_name(x) + ", profile=" + std::to_string(j);
        if (static_cast<int>(row.size()) != S) {
          rb.add(Invariant::kIndexComplete, {x, j}, where,
                 "transition row has wrong length");
          continue;
        }
        bool finite = true;
        bool negative = false;
        double sum = 0.0;
        for (double p : row) {
          if (!std::isfinite(p)) finite = false;
          if (p < 0.0) negative = true;
          sum += p;
        }
        if (!finite) {
          rb.add(Invariant::kNonFinite, {0, x, j}, where, "transition entry not finite");
          continue;
        }
        if (negative) {
          rb.add(Invariant::kTransitionNegative, {x, j}, where,
                 "transition row has a negative entry");
        }
        if (std::abs(sum - 1.0) > kInputTol) {
          rb.add(Invariant::kRowNotStochastic, {x, j}, where,
                 "row sums to " + fmt(sum));
        }
      }
    }
  }

  // Cost tensor: costs[i][l][x][j].
  const int L = spec.num_constraints();
  if (static_cast<int>(spec.costs.size()) != n) {
    rb.add(Invariant::kIndexComplete, {}, "costs", "expected one cost table per player");
  } else {
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(spec.costs[i].size()) != L + 1) {
        rb.add(Invariant::kIndexComplete, {i}, "costs player=" + std::to_string(i + 1),
               "expected " + std::to_string(L + 1) + " cost functions");
        continue;
      }
      for (int l = 0; l <= L; ++l) {
        if (static_cast<int>(spec.costs[i][l].size()) != S) {
          rb.add(Invariant::kIndexComplete, {i, l},
                 "costs player=" + std::to_string(i + 1) + ", l=" + std::to_string(l),
                 "expected one cost block per state");
          continue;
        }
        for (int x = 0; x < S; ++x) {
          if (!usable[x]) continue;
          const auto& row = spec.costs[i][l][x];
          const std::string where = "player=" + std::to_string(i + 1) +
                                    ", l=" + std::to_string(l) +
                                    ", state=" + rb.state_name(x);
          if (static_cast<int>(row.size()) != spec.num_profiles(x)) {
            rb.add(Invariant::kIndexComplete, {i, l, x}, where,
                   "expected " + std::to_string(spec.num_profiles(x)) + " profiles");
            continue;
          }
          for (double c : row) {
            if (!std::isfinite(c)) {
              rb.add(Invariant::kNonFinite, {1, i, l, x}, where, "cost entry not finite");
              break;
            }
          }
        }
      }
    }
  }

  // Constraint bounds.
  if (static_cast<int>(spec.kappa.size()) != n) {
    rb.add(Invariant::kKappaShape, {}, "kappa", "expected one bound list per player");
  } else {
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(spec.kappa[i].size()) != L) {
        rb.add(Invariant::kKappaShape, {i}, "kappa player=" + std::to_string(i + 1),
               "every player needs the same number of constraint bounds");
      }
      for (double k : spec.kappa[i]) {
        if (!std::isfinite(k)) {
          rb.add(Invariant::kNonFinite, {2, i}, "kappa player=" + std::to_string(i + 1),
                 "bound not finite");
          break;
        }
      }
    }
  }

  // Initial distribution.
  if (static_cast<int>(spec.eta.size()) != S) {
    rb.add(Invariant::kIndexComplete, {}, "eta", "expected one entry per state");
  } else {
    double sum = 0.0;
    for (int x = 0; x < S; ++x) {
      if (spec.eta[x] < 0.0) {
        rb.add(Invariant::kEtaNegative, {x}, "state=" + rb.state_name(x),
               "eta = " + fmt(spec.eta[x]));
      }
      sum += spec.eta[x];
    }
    if (!std::isfinite(sum)) {
      rb.add(Invariant::kNonFinite, {3}, "eta", "eta entry not finite");
    } else if (std::abs(sum - 1.0) > kInputTol) {
      rb.add(Invariant::kEtaSum, {}, "eta", "eta sums to " + fmt(sum));
    }
  }
  return rb.finish();
}

void require_valid(const GameSpec& spec) {
  const auto report = validate_spec(spec);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw InvalidArgument(std::string("invalid game spec: ") +
                          invariant_name(v.invariant) + " at " + v.where + ": " +
                          v.message);
  }
}

StationaryStrategy uniform_strategy(const GameSpec& spec, int player) {
  StationaryStrategy phi;
  phi.probs.resize(spec.num_states());
  for (int x = 0; x < spec.num_states(); ++x) {
    const int na = spec.num_actions(player, x);
    phi.probs[x].assign(na, 1.0 / na);
  }
  return phi;
}

MultiStrategy uniform_profile(const GameSpec& spec) {
  MultiStrategy phi;
  for (int i = 0; i < spec.n_players; ++i) phi.push_back(uniform_strategy(spec, i));
  return phi;
}

StationaryStrategy pure_strategy(const GameSpec& spec, int player,
                                 std::span<const int> action_per_state) {
  StationaryStrategy phi;
  phi.probs.resize(spec.num_states());
  for (int x = 0; x < spec.num_states(); ++x) {
    phi.probs[x].assign(spec.num_actions(player, x), 0.0);
    phi.probs[x].at(action_per_state[x]) = 1.0;
  }
  return phi;
}

void validate_strategy(const GameSpec& spec, int player,
                       const StationaryStrategy& phi) {
  if (player < 0 || player >= spec.n_players) {
    throw InvalidPlayer("player index " + std::to_string(player + 1) +
                        " out of range");
  }
  if (phi.num_states() != spec.num_states()) {
    throw InvalidArgument("strategy of player " + std::to_string(player + 1) +
                          " has the wrong number of states");
  }
  for (int x = 0; x < spec.num_states(); ++x) {
    if (static_cast<int>(phi.probs[x].size()) != spec.num_actions(player, x)) {
      throw InvalidArgument("strategy of player " + std::to_string(player + 1) +
                            " has the wrong number of actions at state " +
                            spec.states[x]);
    }
    double sum = 0.0;
    for (double p : phi.probs[x]) {
      if (!(p >= 0.0)) {
        throw InvalidArgument("strategy of player " + std::to_string(player + 1) +
                              " has a negative probability at state " +
                              spec.states[x]);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kInputTol) {
      throw InvalidArgument("strategy of player " + std::to_string(player + 1) +
                            " does not sum to 1 at state " + spec.states[x]);
    }
  }
}

void validate_profile(const GameSpec& spec, const MultiStrategy& phi,
                      int skip_player) {
  if (static_cast<int>(phi.size()) != spec.n_players) {
    throw InvalidArgument("profile must hold one strategy per player");
  }
  for (int i = 0; i < spec.n_players; ++i) {
    if (i != skip_player) validate_strategy(spec, i, phi[i]);
  }
}

std::vector<double> profile_weights(const GameSpec& spec,
                                    const MultiStrategy& phi, int state) {
  const int J = spec.num_profiles(state);
  std::vector<double> w(J);
  for (int j = 0; j < J; ++j) {
    double p = 1.0;
    int rest = j;
    for (int i = spec.n_players - 1; i >= 0; --i) {
      const int na = spec.num_actions(i, state);
      p *= phi[i].probs[state][rest % na];
      rest /= na;
    }
    w[j] = p;
  }
  return w;
}

ReducedMdp reduce(const GameSpec& spec, int player, const MultiStrategy& opp) {
  if (player < 0 || player >= spec.n_players) {
    throw InvalidPlayer("player index " + std::to_string(player + 1) +
                        " out of range");
  }
  validate_profile(spec, opp, player);

  const int S = spec.num_states();
  const int L = spec.num_constraints();
  ReducedMdp r;
  r.player = player;
  r.alpha = spec.alpha;
  r.eta = spec.eta;
  r.kappa = spec.kappa[player];
  r.cost.assign(L + 1, std::vector<std::vector<double>>(S));
  r.kernel.resize(S);
  for (int x = 0; x < S; ++x) {
    const int na = spec.num_actions(player, x);
    for (int l = 0; l <= L; ++l) r.cost[l][x].assign(na, 0.0);
    r.kernel[x].assign(na, std::vector<double>(S, 0.0));

    const int J = spec.num_profiles(x);
    for (int j = 0; j < J; ++j) {
      double w = 1.0;
      int a_i = 0;
      int rest = j;
      for (int k = spec.n_players - 1; k >= 0; --k) {
        const int nk = spec.num_actions(k, x);
        const int a = rest % nk;
        rest /= nk;
        if (k == player) {
          a_i = a;
        } else {
          w *= opp[k].probs[x][a];
        }
      }
      if (w == 0.0) continue;
      for (int l = 0; l <= L; ++l) r.cost[l][x][a_i] += w * spec.costs[player][l][x][j];
      auto& row = r.kernel[x][a_i];
      const auto& p = spec.transition[x][j];
      for (int y = 0; y < S; ++y) row[y] += w * p[y];
    }
  }
  return r;
}

double max_abs_cost(const GameSpec& spec) {
  double m = 0.0;
  for (const auto& per_player : spec.costs)
    for (const auto& per_l : per_player)
      for (const auto& per_x : per_l)
        for (double c : per_x) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace csg
