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

#include "csg/assumptions.h"

#include <cmath>
#include <limits>

#include "csg/cop.h"
#include "csg/errors.h"
#include "csg/rng.h"

namespace csg {

namespace {

// Uniform read access to the states covered by a check.
struct CheckView {
  std::int64_t count = 0;
  bool partial = false;
  int n_players = 1;
  int num_constraints = 0;
  std::function<std::string(std::int64_t)> name;
  std::function<int(std::int64_t)> profiles;
  std::function<std::string(std::int64_t, int)> label;
  std::function<std::vector<Transition>(std::int64_t, int)> transition;
  std::function<double(int, int, std::int64_t, int)> cost;
  std::function<double(std::int64_t)> eta;
};

CheckView view_of(const GameSpec& spec) {
  require_valid(spec);
  CheckView v;
  v.count = spec.num_states();
  v.n_players = spec.n_players;
  v.num_constraints = spec.num_constraints();
  const GameSpec* s = &spec;
  v.name = [s](std::int64_t x) { return s->states[x]; };
  v.profiles = [s](std::int64_t x) { return s->num_profiles(static_cast<int>(x)); };
  v.label = [s](std::int64_t x, int j) { return s->profile_label(static_cast<int>(x), j); };
  v.transition = [s](std::int64_t x, int j) {
    std::vector<Transition> out;
    const auto& row = s->transition[x][j];
    for (size_t y = 0; y < row.size(); ++y)
      if (row[y] != 0.0) out.push_back({static_cast<std::int64_t>(y), row[y]});
    return out;
  };
  v.cost = [s](int i, int l, std::int64_t x, int j) { return s->costs[i][l][x][j]; };
  v.eta = [s](std::int64_t x) { return s->eta[x]; };
  return v;
}

CheckView view_of(const CountableModel& model, std::int64_t levels) {
  if (levels < 1) throw InvalidArgument("at least one level must be checked");
  CheckView v;
  v.count = levels * model.states_per_level;
  v.partial = true;
  if (model.size && v.count >= *model.size) {
    v.count = *model.size;
    v.partial = false;
  }
  v.n_players = model.n_players;
  v.num_constraints = model.num_constraints;
  const CountableModel* m = &model;
  v.name = m->state_name;
  v.profiles = [m](std::int64_t x) { return m->num_profiles(x); };
  v.label = [m](std::int64_t x, int j) { return m->profile_label(x, j); };
  v.transition = m->transition;
  v.cost = m->cost;
  v.eta = m->eta;
  return v;
}

WeightFn weight_of(const std::vector<double>& w, std::int64_t S) {
  if (static_cast<std::int64_t>(w.size()) != S) {
    throw InvalidArgument("weight vector needs one entry per state");
  }
  return [&w](std::int64_t x) { return w[x]; };
}

BBoundReport b_bound(const CheckView& v, const WeightFn& w) {
  BBoundReport r;
  r.partial = v.partial;
  r.states_checked = v.count;
  for (std::int64_t x = 0; x < v.count; ++x) {
    const double wx = w(x);
    if (!(wx >= 1.0)) {
      throw InvalidArgument("weight function must map into [1, inf); w(" + v.name(x) +
                            ") = " + std::to_string(wx));
    }
    for (int j = 0; j < v.profiles(x); ++j) {
      for (int i = 0; i < v.n_players; ++i) {
        for (int l = 0; l <= v.num_constraints; ++l) {
          const double c = std::abs(v.cost(i, l, x, j));
          const double ratio = c / wx;
          if (ratio > r.worst_ratio) {
            r.worst_ratio = ratio;
            r.worst_state = v.name(x);
            r.worst_profile = v.label(x, j);
            r.worst_player = i;
            r.worst_cost = l;
          }
          if (c > wx) r.holds = false;
        }
      }
    }
  }
  return r;
}

DriftReport drift(const CheckView& v, const WeightFn& w, double alpha) {
  DriftReport r;
  r.alpha = alpha;
  r.partial = v.partial;
  r.states_checked = v.count;
  r.w_eta_tail_unchecked = v.partial;
  bool first = true;
  for (std::int64_t x = 0; x < v.count; ++x) {
    const double wx = w(x);
    if (!(wx > 0.0)) throw InvalidArgument("weight function must be positive");
    r.w_eta_partial_sum += wx * v.eta(x);
    for (int j = 0; j < v.profiles(x); ++j) {
      double acc = 0.0;
      for (const auto& t : v.transition(x, j)) acc += w(t.target) * t.prob;
      const double ratio = acc / wx;
      const std::string label = v.label(x, j);
      auto it = r.per_action.find(label);
      if (it == r.per_action.end()) {
        r.per_action.emplace(label, ratio);
      } else {
        it->second = std::max(it->second, ratio);
      }
      if (first || ratio > r.delta_min) {
        r.delta_min = ratio;
        r.worst_state = v.name(x);
        r.worst_profile = label;
        first = false;
      }
    }
  }
  r.holds_w = r.delta_min * alpha < 1.0;
  return r;
}

ZhangReport zhang(const CheckView& v, const WeightFn& w, double alpha) {
  ZhangReport z;
  const WeightFn w2 = [&w](std::int64_t x) {
    const double wx = w(x);
    return wx * wx;
  };
  z.drift_w_squared = drift(v, w2, alpha);
  z.beta_sq_min = z.drift_w_squared.delta_min;
  z.holds = alpha * z.beta_sq_min < 1.0;
  z.implication_consistent = !z.holds || z.drift_w_squared.holds_w;
  return z;
}

}  // namespace

BBoundReport check_b_bound(const GameSpec& spec, const std::vector<double>& w) {
  return b_bound(view_of(spec), weight_of(w, spec.num_states()));
}

BBoundReport check_b_bound(const CountableModel& model, const WeightFn& w,
                           std::int64_t levels) {
  return b_bound(view_of(model, levels), w);
}

DriftReport check_drift(const GameSpec& spec, const std::vector<double>& w, double alpha) {
  return drift(view_of(spec), weight_of(w, spec.num_states()), alpha);
}

DriftReport check_drift(const CountableModel& model, const WeightFn& w, double alpha,
                        std::int64_t levels) {
  return drift(view_of(model, levels), w, alpha);
}

ZhangReport check_zhang(const GameSpec& spec, const std::vector<double>& w, double alpha) {
  return zhang(view_of(spec), weight_of(w, spec.num_states()), alpha);
}

ZhangReport check_zhang(const CountableModel& model, const WeightFn& w, double alpha,
                        std::int64_t levels) {
  return zhang(view_of(model, levels), w, alpha);
}

PositivityReport check_positivity(const std::vector<double>& eta,
                                  const std::vector<std::string>& names) {
  PositivityReport r;
  for (size_t x = 0; x < eta.size(); ++x) {
    if (!(eta[x] > 0.0)) {
      r.holds = false;
      r.zero_states.push_back(x < names.size() ? names[x] : std::to_string(x));
    }
  }
  return r;
}

SlaterSampleReport check_slater(const GameSpec& spec, int samples, std::uint64_t seed) {
  require_valid(spec);
  if (samples < 0) throw InvalidArgument("sample count must be nonnegative");
  SlaterSampleReport r;
  if (spec.num_constraints() == 0) {
    r.no_constraints = true;
    r.min_slack = std::numeric_limits<double>::infinity();
    return r;
  }
  std::vector<MultiStrategy> profiles{uniform_profile(spec)};
  for (int k = 0; k < samples; ++k) {
    CounterRng rng(seed, (std::uint64_t{1} << 41) + static_cast<std::uint64_t>(k));
    MultiStrategy phi(spec.n_players);
    for (int i = 0; i < spec.n_players; ++i) {
      phi[i].probs.resize(spec.num_states());
      for (int x = 0; x < spec.num_states(); ++x)
        phi[i].probs[x] = rng.flat_dirichlet(spec.num_actions(i, x));
    }
    profiles.push_back(std::move(phi));
  }
  r.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& phi : profiles) {
    std::vector<double> row;
    for (int i = 0; i < spec.n_players; ++i) {
      const auto s = slater_check(spec, i, phi);
      row.push_back(s.slack);
      r.min_slack = std::min(r.min_slack, s.slack);
    }
    r.slack.push_back(std::move(row));
  }
  r.profiles = static_cast<std::int64_t>(profiles.size());
  r.flagged = !(r.min_slack > kComputedTol);
  return r;
}

std::int64_t example1_index(std::int64_t n, bool star) {
  return 2 * (n - 1) + (star ? 1 : 0);
}

namespace {

std::int64_t level_of(std::int64_t x) { return x / 2 + 1; }
bool is_star(std::int64_t x) { return (x % 2) == 1; }

void check_example1(const Example1Params& p) {
  if (!(p.q >= 0.0 && p.q <= 1.0)) throw InvalidArgument("q must lie in [0,1]");
  if (!(p.g > 0.0 && p.g < 1.0)) throw InvalidArgument("g must lie in (0,1)");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  if (!(p.d >= 0.0)) throw InvalidArgument("weight shift d must be nonnegative");
  if (!(p.level_cost >= 0.0 && p.level_cost <= 1.0)) {
    throw InvalidArgument("level cost must lie in [0,1]");
  }
  if (!(p.star_cost_scale >= 0.0 && p.star_cost_scale <= 1.0)) {
    throw InvalidArgument("star cost scale must lie in [0,1]");
  }
  if (p.constrained && !std::isfinite(p.kappa)) throw InvalidArgument("kappa must be finite");
}

}  // namespace

WeightFn example1_weight(const Example1Params& p) {
  if (p.weight == Example1Weight::kSimple) {
    return [](std::int64_t x) {
      return is_star(x) ? static_cast<double>(level_of(x)) : 1.0;
    };
  }
  const double d = p.d;
  return [d](std::int64_t x) {
    const auto n = level_of(x);
    if (is_star(x) && n == 1) return 1.0;
    return static_cast<double>(n) + d;
  };
}

CountableModel build_example1(const Example1Params& p) {
  check_example1(p);
  CountableModel model;
  model.name = "example1";
  model.n_players = 1;
  model.num_constraints = p.constrained ? 1 : 0;
  model.states_per_level = 2;
  model.alpha = p.alpha;
  model.kappa = {p.constrained ? std::vector<double>{p.kappa} : std::vector<double>{}};
  model.state_name = [](std::int64_t x) {
    return std::to_string(level_of(x)) + (is_star(x) ? "*" : "");
  };
  model.actions = [](int, std::int64_t x) {
    return is_star(x) ? std::vector<std::string>{"s"} : std::vector<std::string>{"c", "s"};
  };
  const double q = p.q;
  model.transition = [q](std::int64_t x, int j) {
    const auto n = level_of(x);
    std::vector<Transition> out;
    if (is_star(x)) {
      out.push_back({example1_index(1, true), 1.0});
    } else if (j == 0) {  // continue
      if (q > 0.0) out.push_back({example1_index(1, true), q});
      if (q < 1.0) out.push_back({example1_index(n + 1, false), 1.0 - q});
    } else {  // stop
      out.push_back({example1_index(n + 1, true), 1.0});
    }
    return out;
  };
  const double level_cost = p.level_cost;
  const double scale = p.star_cost_scale;
  model.cost = [level_cost, scale](int, int l, std::int64_t x, int j) {
    const auto n = level_of(x);
    if (l == 0) {
      if (!is_star(x)) return level_cost;
      return n == 1 ? 0.0 : scale * static_cast<double>(n);
    }
    return (!is_star(x) && j == 0) ? 1.0 : 0.0;
  };
  const double g = p.g;
  model.eta = [g](std::int64_t x) {
    if (is_star(x)) return 0.0;
    return (1.0 - g) * std::pow(g, static_cast<double>(level_of(x) - 1));
  };
  model.eta_tail = [g](std::int64_t count) -> std::optional<double> {
    const std::int64_t retained_levels = (count + 1) / 2;
    return std::pow(g, static_cast<double>(retained_levels));
  };
  model.weight = example1_weight(p);
  return model;
}

double example1_tail_bound(std::int64_t n, double alpha, double g) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const double a = alpha;
  const double an1 = std::pow(a, static_cast<double>(n - 1));
  const double an = an1 * a;
  return (an1 * static_cast<double>(n - 1) * (1.0 - a) + an) / ((1.0 - a) * (1.0 - a)) +
         an1 / (g * (1.0 - a));
}

McEstimate simulate_weighted_tail(
    const CountableModel& model, const WeightFn& w,
    const std::function<std::vector<double>(std::int64_t)>& policy, std::int64_t n,
    std::int64_t episodes, std::uint64_t seed) {
  if (model.n_players != 1) throw InvalidArgument("tail simulation needs a single-player model");
  if (episodes <= 0) throw InvalidArgument("episodes must be positive");
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const double a = model.alpha;
  // Horizon: the remaining weighted tail a^(T-1) (T + 200) / (1-a)^2 is
  // negligible against the estimate.
  std::int64_t T = n;
  while (std::pow(a, static_cast<double>(T - 1)) * (static_cast<double>(T) + 200.0) /
             ((1.0 - a) * (1.0 - a)) >= 1e-12) {
    ++T;
  }
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t e = 0; e < episodes; ++e) {
    CounterRng rng(seed, static_cast<std::uint64_t>(e));
    const double u = rng.uniform();
    std::int64_t x = 0;
    double cum = model.eta(0);
    while (u >= cum && x < 100'000'000) {
      ++x;
      cum += model.eta(x);
    }
    double acc = 0.0;
    double disc = 1.0;
    for (std::int64_t t = 1; t <= T; ++t) {
      if (t >= n) acc += disc * w(x);
      const auto probs = policy(x);
      double cu = rng.uniform();
      int action = static_cast<int>(probs.size()) - 1;
      for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
        if (cu < probs[k]) {
          action = k;
          break;
        }
        cu -= probs[k];
      }
      const auto next = model.transition(x, action);
      double v = rng.uniform();
      std::int64_t y = next.back().target;
      for (const auto& tr : next) {
        if (v < tr.prob) {
          y = tr.target;
          break;
        }
        v -= tr.prob;
      }
      x = y;
      disc *= a;
    }
    const double value = (1.0 - a) * acc;
    sum += value;
    sum_sq += value * value;
  }
  McEstimate est;
  const double N = static_cast<double>(episodes);
  est.estimate = sum / N;
  const double var = episodes > 1 ? std::max(0.0, (sum_sq - N * est.estimate * est.estimate) / (N - 1.0)) : 0.0;
  est.std_error = std::sqrt(var / N);
  est.episodes = episodes;
  est.horizon = static_cast<int>(T);
  est.seed = seed;
  return est;
}

}  // namespace csg
