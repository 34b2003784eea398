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

#include "csg/json_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <set>

#include "csg/errors.h"

namespace csg {

namespace {

const std::set<std::string> kSpecKeys = {"format", "players", "states", "actions",
                                         "transition", "costs", "kappa", "alpha", "eta"};

void reject_unknown(const Json& j, const std::set<std::string>& allowed,
                    const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ParseError("unknown key '" + it.key() + "' in " + what);
    }
  }
}

const Json& need(const Json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing key '" + key + "'");
  return *it;
}

void need_type(bool ok, const std::string& what, const std::string& type) {
  if (!ok) throw ParseError(what + " must be " + type);
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
  need_type(j.is_array(), what, "an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    need_type(e.is_string(), what + " entry", "a string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> number_list(const Json& j, const std::string& what) {
  need_type(j.is_array(), what, "an array");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(number_from(e, what));
  return out;
}

}  // namespace

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError(what + " must be a number");
}

GameSpec spec_from_json(const Json& j) {
  need_type(j.is_object(), "game", "an object");
  reject_unknown(j, kSpecKeys, "game");
  const Json& format = need(j, "format");
  if (!format.is_string() || format.get<std::string>() != "csg-1") {
    throw ParseError("unsupported format; expected \"csg-1\"");
  }
  GameSpec spec;
  const Json& players = need(j, "players");
  need_type(players.is_number_integer(), "players", "an integer");
  spec.n_players = players.get<int>();
  spec.states = string_list(need(j, "states"), "states");
  std::map<std::string, int> index;
  for (int x = 0; x < spec.num_states(); ++x) {
    if (!index.emplace(spec.states[x], x).second) {
      throw ParseError("duplicate state '" + spec.states[x] + "'");
    }
  }
  const int S = spec.num_states();
  auto state_of = [&index](const std::string& name, const std::string& what) {
    auto it = index.find(name);
    if (it == index.end()) throw ParseError("unknown state '" + name + "' in " + what);
    return it->second;
  };
  spec.alpha = number_from(need(j, "alpha"), "alpha");

  const Json& actions = need(j, "actions");
  need_type(actions.is_array(), "actions", "an array");
  for (const auto& table : actions) {
    need_type(table.is_object(), "actions entry", "an object");
    std::vector<std::vector<std::string>> per_state(S);
    for (auto it = table.begin(); it != table.end(); ++it) {
      const int x = state_of(it.key(), "actions");
      per_state[x] = string_list(it.value(), "actions of " + it.key());
      std::set<std::string> seen(per_state[x].begin(), per_state[x].end());
      if (seen.size() != per_state[x].size()) {
        throw ParseError("duplicate action at state '" + it.key() + "'");
      }
    }
    spec.actions.push_back(std::move(per_state));
  }

  const Json& transition = need(j, "transition");
  need_type(transition.is_object(), "transition", "an object");
  spec.transition.assign(S, {});
  for (auto it = transition.begin(); it != transition.end(); ++it) {
    const int x = state_of(it.key(), "transition");
    need_type(it.value().is_array(), "transition of " + it.key(), "an array");
    for (const auto& row : it.value()) {
      need_type(row.is_object(), "transition row", "an object");
      std::vector<double> dense(S, 0.0);
      for (auto r = row.begin(); r != row.end(); ++r) {
        dense[state_of(r.key(), "transition of " + it.key())] +=
            number_from(r.value(), "transition probability");
      }
      spec.transition[x].push_back(std::move(dense));
    }
  }

  const Json& costs = need(j, "costs");
  need_type(costs.is_array(), "costs", "an array");
  for (const auto& player_costs : costs) {
    need_type(player_costs.is_array(), "costs entry", "an array");
    std::vector<std::vector<std::vector<double>>> per_l;
    for (const auto& table : player_costs) {
      need_type(table.is_object(), "cost table", "an object");
      std::vector<std::vector<double>> per_state(S);
      for (auto it = table.begin(); it != table.end(); ++it) {
        per_state[state_of(it.key(), "costs")] = number_list(it.value(), "costs");
      }
      per_l.push_back(std::move(per_state));
    }
    spec.costs.push_back(std::move(per_l));
  }

  const Json& kappa = need(j, "kappa");
  need_type(kappa.is_array(), "kappa", "an array");
  for (const auto& k : kappa) spec.kappa.push_back(number_list(k, "kappa"));

  const Json& eta = need(j, "eta");
  need_type(eta.is_object(), "eta", "an object");
  spec.eta.assign(S, 0.0);
  for (auto it = eta.begin(); it != eta.end(); ++it) {
    spec.eta[state_of(it.key(), "eta")] = number_from(it.value(), "eta");
  }
  return spec;
}

GameSpec parse_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(j);
}

Json spec_to_json(const GameSpec& spec) {
  Json j;
  j["format"] = "csg-1";
  j["players"] = spec.n_players;
  j["states"] = spec.states;
  j["alpha"] = number(spec.alpha);
  Json actions = Json::array();
  for (int i = 0; i < spec.n_players; ++i) {
    Json t = Json::object();
    for (int x = 0; x < spec.num_states(); ++x) t[spec.states[x]] = spec.actions[i][x];
    actions.push_back(std::move(t));
  }
  j["actions"] = std::move(actions);
  Json transition = Json::object();
  for (int x = 0; x < spec.num_states(); ++x) {
    Json rows = Json::array();
    for (const auto& row : spec.transition[x]) {
      Json r = Json::object();
      for (int y = 0; y < spec.num_states(); ++y)
        if (row[y] != 0.0) r[spec.states[y]] = number(row[y]);
      rows.push_back(std::move(r));
    }
    transition[spec.states[x]] = std::move(rows);
  }
  j["transition"] = std::move(transition);
  Json costs = Json::array();
  for (const auto& per_l : spec.costs) {
    Json pc = Json::array();
    for (const auto& per_state : per_l) {
      Json t = Json::object();
      for (int x = 0; x < spec.num_states(); ++x) {
        Json row = Json::array();
        for (double c : per_state[x]) row.push_back(number(c));
        t[spec.states[x]] = std::move(row);
      }
      pc.push_back(std::move(t));
    }
    costs.push_back(std::move(pc));
  }
  j["costs"] = std::move(costs);
  Json kappa = Json::array();
  for (const auto& k : spec.kappa) {
    Json row = Json::array();
    for (double v : k) row.push_back(number(v));
    kappa.push_back(std::move(row));
  }
  j["kappa"] = std::move(kappa);
  Json eta = Json::object();
  for (int x = 0; x < spec.num_states(); ++x)
    if (spec.eta[x] != 0.0) eta[spec.states[x]] = number(spec.eta[x]);
  j["eta"] = std::move(eta);
  return j;
}

MultiStrategy profile_from_json(const GameSpec& spec, const Json& j) {
  need_type(j.is_object(), "strategy file", "an object");
  reject_unknown(j, {"players"}, "strategy file");
  const Json& players = need(j, "players");
  need_type(players.is_array(), "players", "an array");
  if (static_cast<int>(players.size()) != spec.n_players) {
    throw InvalidArgument("strategy file lists " + std::to_string(players.size()) +
                          " players, game has " + std::to_string(spec.n_players));
  }
  MultiStrategy phi(spec.n_players);
  for (int i = 0; i < spec.n_players; ++i) {
    const Json& p = players[i];
    if (p.is_null()) continue;
    need_type(p.is_object(), "player strategy", "an object or null");
    phi[i].probs.resize(spec.num_states());
    std::vector<bool> seen(spec.num_states(), false);
    for (int x = 0; x < spec.num_states(); ++x) {
      auto it = p.find(spec.states[x]);
      if (it == p.end()) {
        throw InvalidArgument("strategy of player " + std::to_string(i + 1) +
                              " misses state '" + spec.states[x] + "'");
      }
      need_type(it->is_object(), "state distribution", "an object");
      const auto& names = spec.actions[i][x];
      phi[i].probs[x].assign(names.size(), 0.0);
      for (auto a = it->begin(); a != it->end(); ++a) {
        auto pos = std::find(names.begin(), names.end(), a.key());
        if (pos == names.end()) {
          throw InvalidArgument("unknown action '" + a.key() + "' at state '" +
                                spec.states[x] + "'");
        }
        phi[i].probs[x][pos - names.begin()] = number_from(a.value(), "probability");
      }
    }
    if (p.size() != static_cast<size_t>(spec.num_states())) {
      throw InvalidArgument("strategy of player " + std::to_string(i + 1) +
                            " names an unknown state");
    }
  }
  return phi;
}

Json strategy_to_json(const GameSpec& spec, int player, const StationaryStrategy& phi) {
  Json j = Json::object();
  for (int x = 0; x < spec.num_states(); ++x) {
    Json d = Json::object();
    for (int a = 0; a < spec.num_actions(player, x); ++a)
      d[spec.actions[player][x][a]] = number(phi.probs[x][a]);
    j[spec.states[x]] = std::move(d);
  }
  return j;
}

Json profile_to_json(const GameSpec& spec, const MultiStrategy& phi) {
  Json players = Json::array();
  for (int i = 0; i < static_cast<int>(phi.size()); ++i) {
    if (phi[i].probs.empty()) {
      players.push_back(nullptr);
    } else {
      players.push_back(strategy_to_json(spec, i, phi[i]));
    }
  }
  return Json{{"players", std::move(players)}};
}

Json validation_to_json(const ValidationReport& report) {
  Json v = Json::array();
  for (const auto& e : report.violations) {
    v.push_back({{"invariant", invariant_name(e.invariant)},
                 {"where", e.where},
                 {"message", e.message}});
  }
  return Json{{"ok", report.ok()}, {"violations", std::move(v)}};
}

namespace {

Json matrix(const std::vector<std::vector<double>>& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (double v : row) r.push_back(number(v));
    out.push_back(std::move(r));
  }
  return out;
}

Json vec(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace

Json cost_report_to_json(const CostReport& report) {
  return Json{{"J", matrix(report.J)}, {"slack", matrix(report.slack)}};
}

Json mc_to_json(const std::vector<std::vector<McEstimate>>& mc) {
  Json est = Json::array(), se = Json::array();
  std::int64_t episodes = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  for (const auto& row : mc) {
    Json e = Json::array(), s = Json::array();
    for (const auto& m : row) {
      e.push_back(number(m.estimate));
      s.push_back(number(m.std_error));
      episodes = m.episodes;
      horizon = m.horizon;
      seed = m.seed;
    }
    est.push_back(std::move(e));
    se.push_back(std::move(s));
  }
  return Json{{"estimate", std::move(est)}, {"std_error", std::move(se)},
              {"episodes", episodes}, {"horizon", horizon}, {"seed", seed}};
}

Json occupation_to_json(const GameSpec& spec, const OccupationMeasure& mu) {
  const int i = mu.player();
  Json w = Json::object(), marg = Json::object();
  for (int x = 0; x < spec.num_states(); ++x) {
    Json d = Json::object();
    for (int a = 0; a < spec.num_actions(i, x); ++a)
      d[spec.actions[i][x][a]] = number(mu.weight(x, a));
    w[spec.states[x]] = std::move(d);
    marg[spec.states[x]] = number(mu.marginal()[x]);
  }
  return Json{{"player", i + 1}, {"weights", std::move(w)}, {"marginal", std::move(marg)}};
}

Json cop_to_json(const GameSpec& spec, const CopSolution& sol) {
  Json j;
  j["status"] = cop_status_name(sol.status);
  j["player"] = sol.player + 1;
  j["lp"] = Json{{"status", lp_status_name(sol.lp.status)},
                 {"iterations", sol.lp.iterations},
                 {"primal_residual", number(sol.lp.primal_residual)},
                 {"dual_residual", number(sol.lp.dual_residual)},
                 {"duality_gap", number(sol.lp.duality_gap)}};
  if (!sol.optimal()) return j;
  j["value"] = number(sol.value);
  j["occupation"] = occupation_to_json(spec, sol.mu);
  j["strategy"] = strategy_to_json(spec, sol.player, sol.phi);
  j["duals"] = vec(sol.duals);
  return j;
}

Json nash_to_json(const GameSpec& spec, const NashReport& r) {
  Json j;
  j["profile"] = profile_to_json(spec, r.profile);
  j["gap"] = vec(r.gap);
  j["violation"] = vec(r.violation);
  j["br_infeasible"] = r.br_infeasible;
  j["objective"] = vec(r.objective);
  j["br_value"] = vec(r.br_value);
  j["max_gap"] = number(r.max_gap());
  j["sweeps"] = r.sweeps;
  j["attempt"] = r.attempt;
  j["converged"] = r.converged;
  j["slater_warning"] = r.slater_warning;
  j["max_flow_residual"] = number(r.max_flow_residual);
  j["trajectory"] = vec(r.trajectory);
  return j;
}

Json diagnostics_to_json(const TruncationDiagnostics& d) {
  return Json{{"m", d.m},
              {"sqrt_m", number(d.sqrt_m)},
              {"m_clip", d.m_clip},
              {"m_eta", d.m_eta},
              {"m_kappa", d.m_kappa},
              {"levels", d.levels},
              {"retained_states", d.retained_states},
              {"has_boundary", d.has_boundary},
              {"redirected_mass_max", number(d.redirected_mass_max)},
              {"redirect_witness", d.redirect_witness},
              {"redirecting_pairs", d.redirecting_pairs},
              {"escape_flag", d.escape_flag},
              {"eta_tail_mass", number(d.eta_tail_mass)},
              {"eta_m_tail_mass", number(d.eta_m_tail_mass)},
              {"eta_l1_distance", number(d.eta_l1_distance)}};
}

Json sweep_to_json(const std::vector<SweepRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) {
    Json j;
    j["m"] = r.m;
    j["ok"] = r.ok;
    if (!r.ok) {
      j["error"] = r.error;
      out.push_back(std::move(j));
      continue;
    }
    j["diagnostics"] = diagnostics_to_json(r.diagnostics);
    j["max_gap"] = number(r.report.max_gap());
    j["converged"] = r.report.converged;
    j["sweeps"] = r.report.sweeps;
    j["gap"] = vec(r.report.gap);
    j["J_eta_m"] = matrix(r.J_eta_m);
    j["J_eta"] = matrix(r.J_eta);
    j["gap_I"] = number(r.gap_I);
    j["bound_I"] = number(r.bound_I);
    j["redirect_slack"] = number(r.redirect_slack);
    j["bound_holds"] = r.bound_holds;
    out.push_back(std::move(j));
  }
  return out;
}

Json b_bound_to_json(const BBoundReport& r) {
  return Json{{"holds", r.holds},
              {"worst_ratio", number(r.worst_ratio)},
              {"worst_state", r.worst_state},
              {"worst_profile", r.worst_profile},
              {"worst_player", r.worst_player + 1},
              {"worst_cost", r.worst_cost},
              {"states_checked", r.states_checked},
              {"partial", r.partial}};
}

Json drift_to_json(const DriftReport& r) {
  Json per = Json::object();
  for (const auto& [k, v] : r.per_action) per[k] = number(v);
  return Json{{"delta_min", number(r.delta_min)},
              {"alpha", number(r.alpha)},
              {"holds_w", r.holds_w},
              {"worst_state", r.worst_state},
              {"worst_profile", r.worst_profile},
              {"per_action", std::move(per)},
              {"states_checked", r.states_checked},
              {"partial", r.partial},
              {"w_eta_partial_sum", number(r.w_eta_partial_sum)},
              {"w_eta_tail_unchecked", r.w_eta_tail_unchecked}};
}

Json zhang_to_json(const ZhangReport& r) {
  return Json{{"beta_sq_min", number(r.beta_sq_min)},
              {"holds", r.holds},
              {"implication_consistent", r.implication_consistent},
              {"drift_w_squared", drift_to_json(r.drift_w_squared)}};
}

Json slater_to_json(const SlaterSampleReport& r) {
  return Json{{"no_constraints", r.no_constraints},
              {"min_slack", number(r.min_slack)},
              {"flagged", r.flagged},
              {"profiles", r.profiles},
              {"slack", matrix(r.slack)},
              {"note", SlaterSampleReport::kNote}};
}

namespace {

void write_float(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  if (std::strpbrk(buf, ".e") == nullptr) out += ".0";
}

void write_canonical(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write_canonical(out, value, depth + 1);
      }
      out += "\n" + std::string(2 * depth, ' ') + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t k = 0; k < j.size(); ++k) {
        if (k > 0) out += ",\n";
        out += pad;
        write_canonical(out, j[k], depth + 1);
      }
      out += "\n" + std::string(2 * depth, ' ') + "]";
      return;
    }
    case Json::value_t::number_float:
      write_float(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

// Sorted keys, two-space indent, floats at 17 significant digits.
std::string canonical_dump(const Json& j) {
  std::string out;
  write_canonical(out, j, 0);
  out += "\n";
  return out;
}

}  // namespace csg
