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

#ifndef CSG_ASSUMPTIONS_H_
#define CSG_ASSUMPTIONS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "csg/evaluation.h"
#include "csg/model.h"
#include "csg/truncation.h"

namespace csg {

using WeightFn = std::function<double(std::int64_t)>;

// Checks on countable models cover the first `levels` levels only and say so
// through `partial`.
struct BBoundReport {
  bool holds = true;
  double worst_ratio = 0.0;  // max |c| / w
  std::string worst_state;
  std::string worst_profile;
  int worst_player = 0;
  int worst_cost = 0;
  std::int64_t states_checked = 0;
  bool partial = false;
};

struct DriftReport {
  double delta_min = 0.0;  // max over checked (x, profile) of sum_y w(y)p(y|x,.)/w(x)
  double alpha = 0.0;
  bool holds_w = false;    // delta_min * alpha < 1
  std::string worst_state;
  std::string worst_profile;
  // Maximum ratio restricted to each profile label.
  std::map<std::string, double> per_action;
  std::int64_t states_checked = 0;
  bool partial = false;
  double w_eta_partial_sum = 0.0;  // sum of w * eta over checked states
  bool w_eta_tail_unchecked = false;
};

struct ZhangReport {
  double beta_sq_min = 0.0;
  bool holds = false;             // alpha * beta_sq_min < 1
  DriftReport drift_w_squared;    // check_drift with w^2
  bool implication_consistent = true;  // holds implies drift_w_squared.holds_w
};

struct PositivityReport {
  bool holds = true;
  std::vector<std::string> zero_states;
};

struct SlaterSampleReport {
  bool no_constraints = false;
  std::vector<std::vector<double>> slack;  // [profile][player]
  double min_slack = 0.0;
  bool flagged = false;
  std::int64_t profiles = 0;
  static constexpr const char* kNote =
      "sampled evidence over stationary opponent profiles, not a certificate";
};

BBoundReport check_b_bound(const GameSpec& spec, const std::vector<double>& w);
BBoundReport check_b_bound(const CountableModel& model, const WeightFn& w,
                           std::int64_t levels = 10'000);

DriftReport check_drift(const GameSpec& spec, const std::vector<double>& w, double alpha);
DriftReport check_drift(const CountableModel& model, const WeightFn& w, double alpha,
                        std::int64_t levels = 10'000);

ZhangReport check_zhang(const GameSpec& spec, const std::vector<double>& w, double alpha);
ZhangReport check_zhang(const CountableModel& model, const WeightFn& w, double alpha,
                        std::int64_t levels = 10'000);

PositivityReport check_positivity(const std::vector<double>& eta,
                                  const std::vector<std::string>& names);

// Runs slater_check for each player against the uniform profile and
// `samples` seeded random profiles.
SlaterSampleReport check_slater(const GameSpec& spec, int samples = 50,
                                std::uint64_t seed = 0);

enum class Example1Weight {
  kSimple,  // w(n) = 1, w(n*) = n
  kLinear,  // w(n) = n + d, w(n*) = n + d, w(1*) = 1
};

struct Example1Params {
  double q = 0.5;
  double g = 0.5;
  double alpha = 0.9;
  double d = 0.0;
  Example1Weight weight = Example1Weight::kSimple;
  // c(n, .) for both actions; must lie in [0, 1].
  double level_cost = 0.5;
  // c(n*, s) = star_cost_scale * n for n >= 2; scale in [0, 1].
  double star_cost_scale = 1.0;
  // Adds the constraint cost c1(n, c) = 1 (else 0) with bound kappa.
  bool constrained = true;
  double kappa = 0.5;
};

// Two-copy chain 1, 1*, 2, 2*, ... with actions {c, s} on N and {s} on N*.
CountableModel build_example1(const Example1Params& params);

// Enumeration index of n and n* (n >= 1).
std::int64_t example1_index(std::int64_t n, bool star);

WeightFn example1_weight(const Example1Params& params);

// [a^(n-1) (n-1)(1-a) + a^n] / (1-a)^2 + a^(n-1) / (g (1-a))
double example1_tail_bound(std::int64_t n, double alpha, double g);

// Monte Carlo estimate of (1-alpha) E sum_{t>=n} alpha^(t-1) w(x^t) for a
// single-player model under a stationary policy given per state index.
McEstimate simulate_weighted_tail(
    const CountableModel& model, const WeightFn& w,
    const std::function<std::vector<double>(std::int64_t)>& policy, std::int64_t n,
    std::int64_t episodes, std::uint64_t seed);

}  // namespace csg

#endif  // CSG_ASSUMPTIONS_H_
