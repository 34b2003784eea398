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

#include "csg/truncation.h"

#include <cmath>
#include <memory>
#include <sstream>

#include "csg/errors.h"

namespace csg {

int CountableModel::num_profiles(std::int64_t x) const {
  int count = 1;
  for (int i = 0; i < n_players; ++i) count *= static_cast<int>(actions(i, x).size());
  return count;
}

std::string CountableModel::profile_label(std::int64_t x, int j) const {
  std::vector<std::vector<std::string>> acts;
  for (int i = 0; i < n_players; ++i) acts.push_back(actions(i, x));
  std::vector<std::string> picked(n_players);
  for (int i = n_players - 1; i >= 0; --i) {
    const int na = static_cast<int>(acts[i].size());
    picked[i] = acts[i][j % na];
    j /= na;
  }
  std::string label;
  for (int i = 0; i < n_players; ++i) {
    if (i > 0) label += ',';
    label += picked[i];
  }
  return label;
}

CountableModel model_from_spec(const GameSpec& spec_in) {
  require_valid(spec_in);
  auto spec = std::make_shared<const GameSpec>(spec_in);
  CountableModel model;
  model.name = "finite";
  model.n_players = spec->n_players;
  model.num_constraints = spec->num_constraints();
  model.states_per_level = 1;
  model.size = spec->num_states();
  model.alpha = spec->alpha;
  model.kappa = spec->kappa;
  model.state_name = [spec](std::int64_t x) { return spec->states[x]; };
  model.actions = [spec](int i, std::int64_t x) { return spec->actions[i][x]; };
  model.transition = [spec](std::int64_t x, int j) {
    std::vector<Transition> out;
    const auto& row = spec->transition[x][j];
    for (size_t y = 0; y < row.size(); ++y) {
      if (row[y] != 0.0) out.push_back({static_cast<std::int64_t>(y), row[y]});
    }
    return out;
  };
  model.cost = [spec](int i, int l, std::int64_t x, int j) { return spec->costs[i][l][x][j]; };
  model.eta = [spec](std::int64_t x) { return spec->eta[x]; };
  model.eta_tail = [spec](std::int64_t count) -> std::optional<double> {
    double tail = 0.0;
    for (std::int64_t x = count; x < spec->num_states(); ++x) tail += spec->eta[x];
    return tail;
  };
  return model;
}

std::vector<double> perturb_eta(const std::vector<double>& eta,
                                const std::vector<double>& eta_tilde, int m) {
  if (m < 1) throw InvalidArgument("m must be at least 1");
  if (eta.size() != eta_tilde.size()) throw InvalidArgument("eta/eta_tilde size mismatch");
  bool any_zero = false;
  for (size_t x = 0; x < eta.size(); ++x) {
    if (eta[x] > 0.0 && eta_tilde[x] != 0.0) {
      throw InvalidArgument("eta_tilde must vanish where eta is positive");
    }
    if (eta_tilde[x] < 0.0) throw InvalidArgument("eta_tilde has a negative entry");
    any_zero = any_zero || eta[x] == 0.0;
  }
  if (!any_zero) return eta;
  const double w = 1.0 / m;
  std::vector<double> out(eta.size());
  for (size_t x = 0; x < eta.size(); ++x) out[x] = (1.0 - w) * eta[x] + w * eta_tilde[x];
  return out;
}

double clip_cost(double c, int m) {
  const double r = std::sqrt(static_cast<double>(m));
  if (c < -r) return -r;
  if (c > r) return r;
  return c;
}

GameSpec clip_costs(const GameSpec& spec, int m) {
  if (m < 1) throw InvalidArgument("m must be at least 1");
  GameSpec out = spec;
  for (auto& per_player : out.costs)
    for (auto& per_l : per_player)
      for (auto& per_x : per_l)
        for (double& c : per_x) c = clip_cost(c, m);
  return out;
}

double relax_kappa(double kappa, int m) {
  if (m < 1) throw InvalidArgument("m must be at least 1");
  return (1.0 - 1.0 / m) * kappa + 1.0 / std::sqrt(static_cast<double>(m));
}

std::int64_t resolve_levels(const CountableModel& model, const McsgParams& params) {
  const std::int64_t k = model.states_per_level;
  std::int64_t max_levels = std::int64_t{1} << 40;
  if (model.size) max_levels = (*model.size + k - 1) / k;
  if (params.levels) {
    if (*params.levels < 1) throw InvalidModel("cutoff must retain at least one level");
    return std::min(*params.levels, max_levels);
  }
  // Finite models are kept whole unless a cutoff is given.
  if (model.size) return max_levels;
  if (!model.eta_tail) throw InvalidModel("eta tail mass is not computable for " + model.name);
  constexpr std::int64_t kSearchLimit = 10'000'000;
  for (std::int64_t levels = 1; levels <= kSearchLimit; ++levels) {
    const auto tail = model.eta_tail(levels * k);
    if (!tail) throw InvalidModel("eta tail mass is not computable for " + model.name);
    if (*tail <= params.tau_tail) return levels;
  }
  throw InvalidModel("eta tail does not fall below the threshold within the search limit");
}

McsgBuild build_mcsg(const CountableModel& model, const McsgParams& params) {
  if (params.m < 1) throw InvalidArgument("m must be at least 1");
  const int m = params.m;
  const int m_clip = params.m_clip.value_or(m);
  const int m_eta = params.m_eta.value_or(m);
  const int m_kappa = params.m_kappa.value_or(m);
  if (m_clip < 1 || m_eta < 1 || m_kappa < 1) throw InvalidArgument("m must be at least 1");
  const std::int64_t levels = resolve_levels(model, params);
  std::int64_t R = levels * model.states_per_level;
  if (model.size) R = std::min(R, *model.size);
  const bool boundary = !(model.size && R >= *model.size);
  const int S = static_cast<int>(R + (boundary ? 1 : 0));
  const int B = static_cast<int>(R);
  const int n = model.n_players;
  const int L = model.num_constraints;

  McsgBuild out;
  GameSpec& g = out.spec;
  TruncationDiagnostics& diag = out.diagnostics;
  diag.m = m;
  diag.sqrt_m = std::sqrt(static_cast<double>(m));
  diag.m_clip = m_clip;
  diag.m_eta = m_eta;
  diag.m_kappa = m_kappa;
  diag.levels = levels;
  diag.retained_states = R;
  diag.has_boundary = boundary;

  g.n_players = n;
  g.alpha = model.alpha;
  g.states.resize(S);
  g.actions.assign(n, std::vector<std::vector<std::string>>(S));
  g.transition.resize(S);
  g.costs.assign(n, std::vector<std::vector<std::vector<double>>>(L + 1, std::vector<std::vector<double>>(S)));
  for (int x = 0; x < B; ++x) {
    g.states[x] = model.state_name(x);
    for (int i = 0; i < n; ++i) g.actions[i][x] = model.actions(i, x);
  }
  if (boundary) {
    g.states[B] = kBoundaryState;
    for (int i = 0; i < n; ++i) g.actions[i][B] = {"stay"};
  }

  for (int x = 0; x < B; ++x) {
    const int J = g.num_profiles(x);
    g.transition[x].assign(J, std::vector<double>(S, 0.0));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l <= L; ++l) g.costs[i][l][x].resize(J);
    for (int j = 0; j < J; ++j) {
      double escaped = 0.0;
      for (const auto& t : model.transition(x, j)) {
        if (t.target < R) {
          g.transition[x][j][t.target] += t.prob;
        } else {
          g.transition[x][j][B] += t.prob;
          escaped += t.prob;
        }
      }
      if (escaped > 0.0) {
        ++diag.redirecting_pairs;
        if (escaped > diag.redirected_mass_max) {
          diag.redirected_mass_max = escaped;
          diag.redirect_witness = g.states[x] + "|" + g.profile_label(x, j);
        }
      }
      for (int i = 0; i < n; ++i)
        for (int l = 0; l <= L; ++l) g.costs[i][l][x][j] = clip_cost(model.cost(i, l, x, j), m_clip);
    }
  }
  if (boundary) {
    g.transition[B] = {std::vector<double>(S, 0.0)};
    g.transition[B][0][B] = 1.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l <= L; ++l) g.costs[i][l][B] = {0.0};
  }
  diag.escape_flag = diag.redirected_mass_max > kInputTol;

  g.kappa.assign(n, std::vector<double>(L));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < L; ++l) g.kappa[i][l] = relax_kappa(model.kappa[i][l], m_kappa);

  // Initial distributions on the retained states.
  std::vector<double> eta(B), eta_tilde(B, 0.0);
  for (int x = 0; x < B; ++x) eta[x] = model.eta(x);
  if (model.eta_tilde) {
    for (int x = 0; x < B; ++x) eta_tilde[x] = model.eta_tilde(x);
  } else {
    // Geometric with ratio 1/2 over retained zero-mass states, renormalized.
    double w = 0.5, total = 0.0;
    for (int x = 0; x < B; ++x) {
      if (eta[x] == 0.0) {
        eta_tilde[x] = w;
        total += w;
        w *= 0.5;
      }
    }
    if (total > 0.0)
      for (double& v : eta_tilde) v /= total;
  }
  const auto eta_m = perturb_eta(eta, eta_tilde, m_eta);

  auto complete = [&](const std::vector<double>& part) {
    std::vector<double> full(S, 0.0);
    double sum = 0.0;
    for (int x = 0; x < B; ++x) {
      full[x] = part[x];
      sum += part[x];
    }
    if (boundary) full[B] = std::max(0.0, 1.0 - sum);
    return full;
  };
  g.eta = complete(eta_m);
  out.eta_restricted = complete(eta);
  if (boundary) {
    diag.eta_tail_mass = out.eta_restricted[B];
    diag.eta_m_tail_mass = g.eta[B];
    if (model.eta_tail) {
      if (const auto tail = model.eta_tail(R)) diag.eta_tail_mass = *tail;
    }
  }
  for (int x = 0; x < S; ++x) diag.eta_l1_distance += std::abs(g.eta[x] - out.eta_restricted[x]);

  require_valid(g);
  return out;
}

std::vector<SweepRecord> truncation_sweep(const CountableModel& model,
                                          const std::vector<int>& ms,
                                          const McsgParams& params,
                                          const NashOptions& nash_options) {
  for (size_t k = 0; k < ms.size(); ++k) {
    if (ms[k] < 1) throw InvalidArgument("every m must be at least 1");
    if (k > 0 && ms[k] <= ms[k - 1]) throw InvalidArgument("ms must be strictly increasing");
  }
  std::vector<SweepRecord> records;
  for (int m : ms) {
    SweepRecord rec;
    rec.m = m;
    try {
      McsgParams p = params;
      p.m = m;
      const auto built = build_mcsg(model, p);
      rec.diagnostics = built.diagnostics;
      rec.report = solve_nash(built.spec, nash_options);
      rec.J_eta_m = evaluate_exact(built.spec, rec.report.profile).J;
      rec.J_eta = evaluate_exact(built.spec, rec.report.profile, built.eta_restricted).J;
      for (size_t i = 0; i < rec.J_eta.size(); ++i)
        for (size_t l = 0; l < rec.J_eta[i].size(); ++l)
          rec.gap_I = std::max(rec.gap_I, std::abs(rec.J_eta_m[i][l] - rec.J_eta[i][l]));
      const auto& d = built.diagnostics;
      const double scale = std::sqrt(static_cast<double>(d.m_clip));
      const double nominal = 2.0 * scale / d.m_eta;
      rec.redirect_slack = std::max(0.0, scale * d.eta_l1_distance - nominal);
      rec.bound_I = nominal + rec.redirect_slack;
      rec.bound_holds = rec.gap_I <= rec.bound_I + kComputedTol;
      rec.ok = true;
    } catch (const Error& e) {
      rec.ok = false;
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string sweep_summary_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os.precision(17);
  os << "m,sqrt_m,levels,states,ok,converged,sweeps,max_gap,J0,gap_I,bound_I,"
        "bound_holds,redirected_mass_max,eta_tail_mass\n";
  for (const auto& r : records) {
    os << r.m << ',' << r.diagnostics.sqrt_m << ',' << r.diagnostics.levels << ','
       << (r.diagnostics.retained_states + (r.diagnostics.has_boundary ? 1 : 0)) << ','
       << (r.ok ? 1 : 0) << ',';
    if (r.ok) {
      os << (r.report.converged ? 1 : 0) << ',' << r.report.sweeps << ','
         << r.report.max_gap() << ',' << r.J_eta_m[0][0] << ',' << r.gap_I << ','
         << r.bound_I << ',' << (r.bound_holds ? 1 : 0) << ',';
    } else {
      os << ",,,,,,,";
    }
    os << r.diagnostics.redirected_mass_max << ',' << r.diagnostics.eta_tail_mass << '\n';
  }
  return os.str();
}

}  // namespace csg
