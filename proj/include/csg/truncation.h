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

#ifndef CSG_TRUNCATION_H_
#define CSG_TRUNCATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csg/evaluation.h"
#include "csg/model.h"
#include "csg/nash.h"

namespace csg {

struct Transition {
  std::int64_t target;
  double prob;
};

// Generator-style description of a game on a countable state space.
//
// States are enumerated by index 0, 1, 2, ...; enumeration is grouped in
// levels of `states_per_level` consecutive indices, and every cutoff or
// partial check counts whole levels.
struct CountableModel {
  std::string name;
  int n_players = 1;
  int num_constraints = 0;
  int states_per_level = 1;
  std::optional<std::int64_t> size;  // set for finite models
  double alpha = 0.5;
  std::vector<std::vector<double>> kappa;

  std::function<std::string(std::int64_t)> state_name;
  std::function<std::vector<std::string>(int, std::int64_t)> actions;
  std::function<std::vector<Transition>(std::int64_t, int)> transition;
  std::function<double(int, int, std::int64_t, int)> cost;
  std::function<double(std::int64_t)> eta;
  // Mass of eta on indices >= count, when computable.
  std::function<std::optional<double>(std::int64_t)> eta_tail;
  // Optional weight function w >= 1.
  std::function<double(std::int64_t)> weight;
  // Optional auxiliary initial distribution concentrated where eta is 0.
  std::function<double(std::int64_t)> eta_tilde;

  int num_profiles(std::int64_t x) const;
  std::string profile_label(std::int64_t x, int j) const;
};

// Wraps a finite game spec as a countable model (one state per level).
CountableModel model_from_spec(const GameSpec& spec);

struct McsgParams {
  int m = 1;
  // Number of retained levels; resolved from tau_tail when absent.
  std::optional<std::int64_t> levels;
  double tau_tail = 1e-9;
  // Separate indices for clipping, eta perturbation and kappa relaxation;
  // each defaults to m.
  std::optional<int> m_clip;
  std::optional<int> m_eta;
  std::optional<int> m_kappa;
};

struct TruncationDiagnostics {
  int m = 1;
  double sqrt_m = 1.0;
  int m_clip = 1;
  int m_eta = 1;
  int m_kappa = 1;
  std::int64_t levels = 0;
  std::int64_t retained_states = 0;
  bool has_boundary = false;
  double redirected_mass_max = 0.0;
  std::string redirect_witness;  // "state|profile" of the maximum
  std::int64_t redirecting_pairs = 0;
  bool escape_flag = false;
  double eta_tail_mass = 0.0;
  double eta_m_tail_mass = 0.0;
  // sum_x |eta_m(x) - eta(x)| on the finite spec
  double eta_l1_distance = 0.0;
};

struct McsgBuild {
  GameSpec spec;                        // eta = perturbed eta(m)
  std::vector<double> eta_restricted;   // unperturbed eta on the same states
  TruncationDiagnostics diagnostics;
};

inline constexpr const char* kBoundaryState = "__boundary__";

// (1 - 1/m) eta + (1/m) eta_tilde. Throws InvalidArgument if eta_tilde
// charges a state where eta is positive.
std::vector<double> perturb_eta(const std::vector<double>& eta,
                                const std::vector<double>& eta_tilde, int m);

// Clamp to [-sqrt(m), sqrt(m)].
double clip_cost(double c, int m);
GameSpec clip_costs(const GameSpec& spec, int m);

// (1 - 1/m) kappa + 1/sqrt(m)
double relax_kappa(double kappa, int m);

// Number of levels retained under `params`; throws InvalidModel when the
// tail of eta is not computable.
std::int64_t resolve_levels(const CountableModel& model, const McsgParams& params);

McsgBuild build_mcsg(const CountableModel& model, const McsgParams& params);

struct SweepRecord {
  int m = 0;
  bool ok = false;
  std::string error;
  TruncationDiagnostics diagnostics;
  NashReport report;
  std::vector<std::vector<double>> J_eta_m;  // under eta(m)
  std::vector<std::vector<double>> J_eta;    // under eta restricted
  double gap_I = 0.0;
  double bound_I = 0.0;       // 2 sqrt(m_clip)/m_eta + redirect_slack
  double redirect_slack = 0.0;
  bool bound_holds = false;
};

// `params.m` is ignored; each entry of `ms` (strictly increasing) is used.
std::vector<SweepRecord> truncation_sweep(const CountableModel& model,
                                          const std::vector<int>& ms,
                                          const McsgParams& params,
                                          const NashOptions& nash_options);

std::string sweep_summary_csv(const std::vector<SweepRecord>& records);

}  // namespace csg

#endif  // CSG_TRUNCATION_H_
