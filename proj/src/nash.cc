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

#include "csg/nash.h"

#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "csg/errors.h"
#include "csg/evaluation.h"
#include "csg/occupation.h"
#include "csg/rng.h"

namespace csg {

const char* sweep_order_name(SweepOrder order) {
  return order == SweepOrder::kJacobi ? "jacobi" : "gauss-seidel";
}

SweepOrder parse_sweep_order(const std::string& name) {
  if (name == "gauss-seidel") return SweepOrder::kGaussSeidel;
  if (name == "jacobi") return SweepOrder::kJacobi;
  throw InvalidArgument("unknown sweep order '" + name + "'");
}

double DampingSchedule::operator()(int k) const {
  switch (kind) {
    case Kind::kHarmonic: return 1.0 / (k + 2.0);
    case Kind::kConstant: return param;
    case Kind::kPower: return std::pow(k + 2.0, -param);
  }
  return 1.0;
}

std::string DampingSchedule::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::kHarmonic: return "harmonic";
    case Kind::kConstant: os << "constant:" << param; break;
    case Kind::kPower: os << "power:" << param; break;
  }
  return os.str();
}

DampingSchedule DampingSchedule::parse(const std::string& text) {
  DampingSchedule d;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  double value = 1.0;
  if (colon != std::string::npos) {
    try {
      value = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("bad damping parameter in '" + text + "'");
    }
  }
  if (head == "harmonic" && colon == std::string::npos) {
    d.kind = Kind::kHarmonic;
  } else if (head == "constant" && colon != std::string::npos) {
    if (!(value > 0.0 && value <= 1.0)) throw InvalidArgument("constant damping must lie in (0,1]");
    d.kind = Kind::kConstant;
    d.param = value;
  } else if (head == "power" && colon != std::string::npos) {
    if (!(value > 0.0)) throw InvalidArgument("power damping exponent must be positive");
    d.kind = Kind::kPower;
    d.param = value;
  } else {
    throw InvalidArgument("unknown damping schedule '" + text + "'");
  }
  return d;
}

double NashReport::max_gap() const {
  double worst = 0.0;
  for (size_t i = 0; i < gap.size(); ++i) {
    if (br_infeasible[i]) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::max(gap[i], violation[i]));
  }
  return worst;
}

CopSolution best_response(const GameSpec& spec, int player, const MultiStrategy& phi) {
  return solve_cop(spec, player, phi);
}

NashReport nash_gap(const GameSpec& spec, const MultiStrategy& phi, double eps) {
  const auto costs = evaluate_exact(spec, phi);
  const int n = spec.n_players;
  NashReport report;
  report.profile = phi;
  report.gap.assign(n, 0.0);
  report.violation.assign(n, 0.0);
  report.br_infeasible.assign(n, false);
  report.objective.assign(n, 0.0);
  report.br_value.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    report.objective[i] = costs.J[i][0];
    double v = 0.0;
    for (double s : costs.slack[i]) v = std::max(v, -s);
    report.violation[i] = v;
    const auto br = best_response(spec, i, phi);
    if (!br.optimal()) {
      report.br_infeasible[i] = true;
      report.gap[i] = std::numeric_limits<double>::quiet_NaN();
      report.br_value[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    report.br_value[i] = br.value;
    report.gap[i] = costs.J[i][0] - br.value;
  }
  report.converged = report.max_gap() <= eps;
  return report;
}

namespace {

constexpr double kFlowTol = 1e-8;

MultiStrategy random_profile(const GameSpec& spec, std::uint64_t seed, int attempt) {
  // Stream ids below 2^32 are reserved for Monte Carlo episodes.
  CounterRng rng(seed, (std::uint64_t{1} << 40) + static_cast<std::uint64_t>(attempt));
  MultiStrategy phi(spec.n_players);
  for (int i = 0; i < spec.n_players; ++i) {
    phi[i].probs.resize(spec.num_states());
    for (int x = 0; x < spec.num_states(); ++x) {
      phi[i].probs[x] = rng.flat_dirichlet(spec.num_actions(i, x));
    }
  }
  return phi;
}

MultiStrategy feasible_random_profile(const GameSpec& spec, std::uint64_t seed, int attempt) {
  MultiStrategy phi;
  for (int draw = 0; draw < 20; ++draw) {
    phi = random_profile(spec, seed, attempt * 20 + draw);
    const auto f = feasible(spec, phi);
    bool all = true;
    for (bool ok : f.feasible) all = all && ok;
    if (all) break;
  }
  return phi;
}

// Moves player i's occupation measure towards its best response and returns
// the flow residual of the mixed measure.
double damped_update(const ReducedMdp& reduced, const CopSolution& br, double lambda,
                     StationaryStrategy& phi_i) {
  const auto current = occupation_from_strategy(reduced, phi_i);
  const auto mixed = mix(br.mu, current, lambda);
  phi_i = disaggregate(mixed).strategy;
  return flow_residual(mixed, reduced);
}

}  // namespace

NashReport solve_nash(const GameSpec& spec, const NashOptions& options) {
  require_valid(spec);
  if (!(options.eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (options.max_sweeps < 0 || options.restarts < 0) {
    throw InvalidArgument("sweep and restart counts must be nonnegative");
  }
  if (options.initial) validate_profile(spec, *options.initial);
  const int n = spec.n_players;

  NashReport best;
  bool have_best = false;
  auto consider = [&](const NashReport& r) {
    if (!have_best || r.max_gap() < best.max_gap()) {
      best = r;
      have_best = true;
    }
  };

  bool slater_warning = false;
  for (int attempt = 0; attempt <= options.restarts; ++attempt) {
    MultiStrategy phi = attempt == 0
                            ? (options.initial ? *options.initial : uniform_profile(spec))
                            : feasible_random_profile(spec, options.seed, attempt);
    if (attempt == 0) {
      for (int i = 0; i < n && !slater_warning; ++i) {
        const auto s = slater_check(spec, i, phi);
        if (!s.no_constraints && !(s.slack > kComputedTol)) slater_warning = true;
      }
    }

    NashReport report = nash_gap(spec, phi, options.eps);
    report.attempt = attempt;
    bool all_infeasible = true;
    for (bool b : report.br_infeasible) all_infeasible = all_infeasible && b;
    if (attempt == 0 && all_infeasible) {
      report.slater_warning = true;
      return report;
    }
    consider(report);
    if (report.converged) break;

    std::vector<double> trajectory;
    double flow_worst = 0.0;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      // The first sweep is an undamped best response; later sweeps follow
      // the schedule indexed by the number of damped sweeps so far.
      const double lambda = sweep == 0 ? 1.0 : options.damping(sweep - 1);
      if (options.order == SweepOrder::kGaussSeidel) {
        for (int i = 0; i < n; ++i) {
          const auto reduced = reduce(spec, i, phi);
          const auto br = solve_cop(reduced);
          if (!br.optimal()) continue;
          flow_worst = std::max(flow_worst, damped_update(reduced, br, lambda, phi[i]));
        }
      } else {
        std::vector<ReducedMdp> reduced(n);
        std::vector<CopSolution> br(n);
        auto work = [&](int i) {
          reduced[i] = reduce(spec, i, phi);
          br[i] = solve_cop(reduced[i]);
        };
        if (options.threads > 1 && n > 1) {
          std::vector<std::future<void>> jobs;
          for (int i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, work, i));
          for (auto& j : jobs) j.get();
        } else {
          for (int i = 0; i < n; ++i) work(i);
        }
        for (int i = 0; i < n; ++i) {
          if (!br[i].optimal()) continue;
          flow_worst = std::max(flow_worst, damped_update(reduced[i], br[i], lambda, phi[i]));
        }
      }
      if (flow_worst > kFlowTol) {
        throw NumericalError("damped occupation measure left the flow-feasible set");
      }
      report = nash_gap(spec, phi, options.eps);
      report.attempt = attempt;
      report.sweeps = sweep + 1;
      trajectory.push_back(report.max_gap());
      report.trajectory = trajectory;
      report.max_flow_residual = flow_worst;
      consider(report);
      if (report.converged) break;
    }
    if (best.converged) break;
  }
  best.slater_warning = slater_warning;
  return best;
}

}  // namespace csg
