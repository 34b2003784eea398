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

// Acceptance checks for the solver. Prints one PASS/FAIL line per criterion
// and exits nonzero if any fails.
//
// Usage: csg_acceptance --tool PATH --workdir DIR [--only K]
// With --only, criterion 2 is not reported.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "csg/assumptions.h"
#include "csg/cop.h"
#include "csg/evaluation.h"
#include "csg/json_io.h"
#include "csg/nash.h"
#include "csg/occupation.h"
#include "csg/rng.h"
#include "csg/truncation.h"
#include "support/test_games.h"

namespace csg {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Largest flow residual over every measure built by occupation_from_strategy,
// solve_cop or mix anywhere in this run.
double g_flow_worst = 0.0;
long g_flow_count = 0;

OccupationMeasure track(OccupationMeasure mu, const ReducedMdp& reduced) {
  g_flow_worst = std::max(g_flow_worst, flow_residual(mu, reduced));
  ++g_flow_count;
  return mu;
}

// 1. pair cost of the occupation measure equals the discounted cost.
Outcome occupation_identity() {
  Stopwatch sw;
  Rng rng(101);
  testing::RandomGameParams p;
  p.max_states = 6;
  p.max_actions = 4;
  p.constraints = 2;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const GameSpec g = testing::random_game(rng, p);
    const MultiStrategy phi = {testing::random_strategy(rng, g, 0)};
    const auto reduced = reduce(g, 0, phi);
    const auto mu = track(occupation_from_strategy(reduced, phi[0]), reduced);
    const auto J = evaluate_exact(g, phi).J;
    for (int l = 0; l <= g.num_constraints(); ++l) {
      worst = std::max(worst, std::abs(pair_cost(mu, reduced.cost[l]) - J[0][l]));
    }
  }
  const double t = sw.seconds();
  return {worst <= 1e-9 && t < 10.0,
          fmt("occupation identity on 200 specs, max error %.3g (tol 1e-9), %.2f s (limit 10 s)",
              worst, t)};
}

// 3. COP optimality against sampled feasible strategies and value iteration.
Outcome cop_optimality() {
  Stopwatch sw;
  Rng rng(303);
  testing::RandomGameParams p;
  p.max_states = 5;
  p.max_actions = 4;
  p.constraints = 2;
  p.safe_action = true;
  double worst_excess = -INFINITY;
  double worst_slater = INFINITY;
  double worst_violation = 0.0;
  int not_optimal = 0;
  for (int k = 0; k < 50; ++k) {
    const GameSpec g = testing::random_game(rng, p);
    const auto reduced = reduce(g, 0, uniform_profile(g));
    worst_slater = std::min(worst_slater, slater_check(reduced).slack);
    const auto sol = solve_cop(reduced);
    if (!sol.optimal()) {
      ++not_optimal;
      continue;
    }
    track(sol.mu, reduced);
    const std::vector<int> zeros(g.num_states(), 0);
    const auto safe = track(occupation_from_strategy(reduced, pure_strategy(g, 0, zeros)), reduced);
    for (int s = 0; s < 1000; ++s) {
      const auto raw =
          track(occupation_from_strategy(reduced, testing::random_strategy(rng, g, 0)), reduced);
      // Largest weight on the random measure that keeps every constraint.
      double lmax = 1.0;
      for (int l = 1; l <= g.num_constraints(); ++l) {
        const double a = pair_cost(raw, reduced.cost[l]);
        const double b = pair_cost(safe, reduced.cost[l]);
        const double kap = g.kappa[0][l - 1];
        if (a > kap) lmax = std::min(lmax, (kap - b) / (a - b));
      }
      const auto mu = track(mix(raw, safe, testing::unif(rng) * lmax), reduced);
      const MultiStrategy sigma = {disaggregate(mu).strategy};
      const auto J = evaluate_exact(g, sigma).J;
      for (int l = 1; l <= g.num_constraints(); ++l) {
        worst_violation = std::max(worst_violation, J[0][l] - g.kappa[0][l - 1]);
      }
      worst_excess = std::max(worst_excess, sol.value - J[0][0]);
    }
  }
  p.constraints = 0;
  p.safe_action = false;
  double worst_vi = 0.0;
  for (int k = 0; k < 50; ++k) {
    const GameSpec g = testing::random_game(rng, p);
    const auto reduced = reduce(g, 0, uniform_profile(g));
    const auto sol = solve_cop(reduced);
    if (!sol.optimal()) {
      ++not_optimal;
      continue;
    }
    track(sol.mu, reduced);
    worst_vi = std::max(worst_vi, std::abs(sol.value - testing::optimal_value(g)));
  }
  const double t = sw.seconds();
  const bool ok = not_optimal == 0 && worst_slater >= 0.05 && worst_violation <= 1e-9 &&
                  worst_excess <= 1e-8 && worst_vi <= 1e-6 && t < 60.0;
  return {ok, fmt("COP value minus sampled J0 max %.3g (tol 1e-8) over 50x1000 feasible "
                  "strategies, min Slater slack %.3g, sample violation %.3g, value iteration "
                  "error %.3g (tol 1e-6), %d not optimal, %.1f s (limit 60 s)",
                  worst_excess, worst_slater, worst_violation, worst_vi, not_optimal, t)};
}

// 4. The two-action constrained game has value 1/2 at phi(b) = 1/2.
Outcome g2_closed_form() {
  const GameSpec g = testing::g2();
  const auto reduced = reduce(g, 0, uniform_profile(g));
  const auto sol = solve_cop(reduced);
  if (!sol.optimal()) return {false, "COP on the two-action game is not optimal"};
  track(sol.mu, reduced);
  const double value_err = std::abs(sol.value - 0.5);
  const double phi_err = std::abs(sol.phi.probs[0][1] - 0.5);
  double best_t = -1.0, best_v = INFINITY;
  for (int k = 0; k <= 1000; ++k) {
    const double t = k * 1e-3;
    const MultiStrategy phi = {StationaryStrategy{{{1.0 - t, t}}}};
    const auto J = evaluate_exact(g, phi).J;
    if (J[0][1] <= g.kappa[0][0] + 1e-12 && J[0][0] < best_v) {
      best_v = J[0][0];
      best_t = t;
    }
  }
  const double grid_err = std::max(std::abs(best_t - sol.phi.probs[0][1]),
                                   std::abs(best_v - sol.value));
  return {value_err <= 1e-8 && phi_err <= 1e-8 && grid_err <= 1e-3,
          fmt("value %.12g, phi(b) %.12g (tol 1e-8), grid oracle phi(b) %.3f value %.6f, "
              "disagreement %.3g (tol 1e-3)",
              sol.value, sol.phi.probs[0][1], best_t, best_v, grid_err)};
}

// 5. Damped best-response iteration on constructed-feasible 2-player games.
Outcome nash_rate() {
  Stopwatch sw;
  Rng rng(2026);
  testing::RandomGameParams p;
  p.players = 2;
  p.max_states = 4;
  p.max_actions = 3;
  p.constraints = 1;
  p.safe_action = true;
  int reached = 0;
  double worst_recheck = 0.0;
  for (int k = 0; k < 50; ++k) {
    const GameSpec g = testing::random_game(rng, p);
    NashOptions o;
    o.max_sweeps = 500;
    o.eps = 1e-4;
    o.seed = k;
    o.damping = DampingSchedule::parse("power:0.85");
    const auto r = solve_nash(g, o);
    g_flow_worst = std::max(g_flow_worst, r.max_flow_residual);
    if (r.max_gap() <= 1e-4) ++reached;
    const auto again = nash_gap(g, r.profile);
    for (int i = 0; i < 2; ++i) {
      if (r.br_infeasible[i] != again.br_infeasible[i]) {
        worst_recheck = INFINITY;
        continue;
      }
      worst_recheck = std::max(worst_recheck, std::abs(again.gap[i] - r.gap[i]));
      worst_recheck = std::max(worst_recheck, std::abs(again.violation[i] - r.violation[i]));
    }
  }
  const double t = sw.seconds();
  return {reached >= 45 && worst_recheck <= 1e-8 && t < 300.0,
          fmt("%d/50 instances reach max-gap <= 1e-4 within 500 sweeps (need 45), "
              "certificate recheck error %.3g (tol 1e-8), %.1f s (limit 300 s)",
              reached, worst_recheck, t)};
}

Example1Params extremal_example1() {
  Example1Params ep;
  ep.level_cost = 1.0;
  ep.star_cost_scale = 1.0;
  return ep;
}

// 6. Perturbation gap of the m-CSG and convergence of the sweep values.
Outcome truncation_bounds() {
  const auto model = build_example1(extremal_example1());
  const std::vector<int> ms = {4, 16, 64, 256};
  Rng rng(606);
  double worst_ratio = 0.0;
  std::string worst_at;
  for (int m : ms) {
    McsgParams mp;
    mp.m = m;
    const auto built = build_mcsg(model, mp);
    const auto& d = built.diagnostics;
    const double sm = std::sqrt(static_cast<double>(m));
    const double slack = std::max(0.0, sm * d.eta_l1_distance - 2.0 / sm);
    const double bound = 2.0 / sm + slack;
    for (int k = 0; k < 20; ++k) {
      const MultiStrategy phi = {testing::random_strategy(rng, built.spec, 0)};
      const auto a = evaluate_exact(built.spec, phi).J;
      const auto b = evaluate_exact(built.spec, phi, built.eta_restricted).J;
      for (size_t l = 0; l < a[0].size(); ++l) {
        const double ratio = std::abs(a[0][l] - b[0][l]) / bound;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst_at = fmt("m=%d", m);
        }
      }
    }
  }
  const auto recs = truncation_sweep(model, ms, McsgParams{}, NashOptions{});
  bool sweeps_ok = true;
  std::vector<double> j0;
  for (const auto& r : recs) {
    sweeps_ok = sweeps_ok && r.ok && r.report.converged && r.bound_holds;
    if (r.ok) j0.push_back(r.J_eta_m[0][0]);
  }
  std::vector<double> diffs;
  for (size_t k = 1; k < j0.size(); ++k) diffs.push_back(std::abs(j0[k] - j0[k - 1]));
  bool shrinking = diffs.size() == ms.size() - 1;
  for (size_t k = 1; k < diffs.size(); ++k) shrinking = shrinking && diffs[k] < diffs[k - 1];
  std::ostringstream ds;
  for (size_t k = 0; k < diffs.size(); ++k) ds << (k ? ", " : "") << fmt("%.3g", diffs[k]);
  return {worst_ratio <= 1.0 && sweeps_ok && shrinking,
          fmt("max |J(eta_m) - J(eta)| / (2/sqrt(m) + slack) = %.3g at %s over 20 strategies "
              "per m; sweep J0 differences [%s] %s",
              worst_ratio, worst_at.c_str(), ds.str().c_str(),
              shrinking ? "shrinking" : "not shrinking")};
}

// 7. Drift constants of example1 under the three weight choices.
Outcome example1_certificates() {
  const std::int64_t levels = 5'000;  // 10^4 states
  double worst = 0.0;
  bool threshold_ok = true;
  for (double q : {0.0, 0.3, 0.5, 0.9}) {
    Example1Params p;
    p.q = q;
    p.weight = Example1Weight::kLinear;
    const auto m = build_example1(p);
    const auto r = check_drift(m, m.weight, 0.49, levels);
    worst = std::max(worst, std::abs(r.per_action.at("s") - 2.0));
    worst = std::max(worst, std::abs(r.per_action.at("c") - (2.0 - q)));
    worst = std::max(worst, std::abs(r.delta_min - 2.0));
    threshold_ok = threshold_ok && r.holds_w && r.states_checked == 2 * levels &&
                   !check_drift(m, m.weight, 0.5, levels).holds_w;
  }
  for (double d : {0.5, 1.0, 4.0, 20.0}) {
    Example1Params p;
    p.d = d;
    p.weight = Example1Weight::kLinear;
    const auto m = build_example1(p);
    const auto r = check_drift(m, m.weight, 0.9, levels);
    worst = std::max(worst, std::abs(r.delta_min - (1.0 + 1.0 / (1.0 + d))));
  }
  const auto simple = build_example1(Example1Params{});
  std::string simple_detail;
  bool diverges = true;
  for (int n : {10, 100}) {
    const auto r = check_drift(simple, simple.weight, 0.5, n);
    diverges = diverges && r.delta_min > n;
    simple_detail += fmt(" delta_min(%d)=%.6g", n, r.delta_min);
  }
  return {worst <= 1e-12 && threshold_ok && diverges,
          fmt("linear and shifted weights max deviation %.3g (tol 1e-12) over 10^4 states, "
              "alpha threshold 1/2 %s; simple weight%s",
              worst, threshold_ok ? "confirmed" : "wrong", simple_detail.c_str())};
}

// 8. Monte Carlo agrees with the exact values, and the tail bound dominates.
Outcome monte_carlo() {
  Stopwatch sw;
  Rng rng(808);
  testing::RandomGameParams p;
  p.max_states = 4;
  p.max_actions = 3;
  p.constraints = 1;
  int agree = 0;
  for (int k = 0; k < 200; ++k) {
    p.players = 1 + k % 2;
    const GameSpec g = testing::random_game(rng, p);
    const MultiStrategy phi = testing::random_profile(rng, g);
    const auto exact = evaluate_exact(g, phi).J;
    const auto mc = evaluate_mc(g, phi, 100'000, 9000 + k);
    bool ok = true;
    for (int i = 0; i < g.n_players; ++i) {
      for (int l = 0; l <= g.num_constraints(); ++l) {
        const double err = std::abs(mc[i][l].estimate - exact[i][l]);
        // Episodes stop at a horizon whose discounted tail is below 1e-10.
        ok = ok && err <= 4.0 * mc[i][l].std_error + 1e-10;
      }
    }
    if (ok) ++agree;
  }

  Example1Params ep;
  ep.alpha = 0.7;
  const auto model = build_example1(ep);
  const auto w = example1_weight(ep);
  int dominated = 0, tails = 0;
  double worst_margin = -INFINITY;
  for (int s = 0; s < 100; ++s) {
    auto policy = [s](std::int64_t x) {
      if (x % 2 == 1) return std::vector<double>{1.0};
      CounterRng r(static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(x));
      const double c = r.uniform();
      return std::vector<double>{c, 1.0 - c};
    };
    for (int n : {1, 3, 6}) {
      const auto est = simulate_weighted_tail(model, w, policy, n, 2'000, 100 * s + n);
      const double bound = (1.0 - ep.alpha) * example1_tail_bound(n, ep.alpha, ep.g);
      const double margin = est.estimate - bound - 3.0 * est.std_error;
      worst_margin = std::max(worst_margin, margin / bound);
      ++tails;
      if (margin <= 0.0) ++dominated;
    }
  }
  const double t = sw.seconds();
  return {agree >= 198 && dominated == tails,
          fmt("%d/200 instances within 4 standard errors (+1e-10 horizon bias) at 1e5 episodes "
              "(need 198); tail "
              "bound dominates %d/%d simulated tails at 3 sigma (worst relative margin %.3g), "
              "%.1f s",
              agree, dominated, tails, worst_margin, t)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// 9. Repeated CLI invocations produce identical bytes.
Outcome cli_determinism(const std::string& tool, const fs::path& workdir) {
  const fs::path dir = workdir / "acceptance_determinism";
  fs::create_directories(dir);
  Rng rng(909);
  testing::RandomGameParams p;
  p.players = 2;
  p.max_states = 3;
  p.max_actions = 3;
  p.constraints = 1;
  p.safe_action = true;
  const GameSpec g = testing::random_game(rng, p);
  const MultiStrategy phi = testing::random_profile(rng, g);
  write_file(dir / "game.json", canonical_dump(spec_to_json(g)));
  write_file(dir / "profile.json", canonical_dump(profile_to_json(g, phi)));
  Json w = Json::object();
  for (const auto& s : g.states) w[s] = 1.0;
  write_file(dir / "w.json", canonical_dump(w));
  write_file(dir / "params.json", "{\"levels\": 8, \"level_cost\": 1.0}\n");

  const std::string game = (dir / "game.json").string();
  const std::string profile = (dir / "profile.json").string();
  const std::map<std::string, std::string> commands = {
      {"validate", "validate --spec " + game},
      {"eval", "eval --spec " + game + " --strategy " + profile + " --mc 20000 --seed 11"},
      {"cop", "cop --spec " + game + " --player 2 --opponents " + profile},
      {"nash", "nash --spec " + game + " --max-sweeps 60 --restarts 2 --seed 5"},
      {"nash_jacobi", "nash --spec " + game + " --max-sweeps 60 --mode jacobi --threads 2"},
      {"truncate", "truncate --model example1 --params " + (dir / "params.json").string() +
                       " --ms 4,16 --max-sweeps 50"},
      {"check", "check --spec " + game + " --w " + (dir / "w.json").string() +
                    " --zhang --slater --samples 20 --seed 3"},
      {"example1", "example1 --q 0.4 --alpha 0.6 --levels 200 --tail-n 3 --episodes 300 "
                   "--strategies 5 --seed 8"},
  };
  int identical = 0;
  std::string broken;
  for (const auto& [name, args] : commands) {
    std::string runs[2];
    int codes[2];
    const fs::path out = dir / (name + ".json");
    const fs::path err = dir / (name + ".err");
    const fs::path csv = dir / (name + ".csv");
    std::string cmd = "\"" + tool + "\" " + args + " --out " + out.string();
    if (name == "truncate") cmd += " --csv " + csv.string();
    cmd += " 2> " + err.string();
    for (int k = 0; k < 2; ++k) {
      codes[k] = std::system(cmd.c_str());
      runs[k] = slurp(out) + slurp(err);
      if (name == "truncate") runs[k] += slurp(csv);
      fs::remove(out);
    }
    if (!runs[0].empty() && runs[0] == runs[1] && codes[0] == codes[1]) {
      ++identical;
    } else {
      broken += " " + name;
    }
  }
  return {identical == static_cast<int>(commands.size()),
          fmt("%d/%zu subcommand invocations byte-identical on repeat%s%s", identical,
              commands.size(), broken.empty() ? "" : "; differing:", broken.c_str())};
}

}  // namespace
}  // namespace csg

int main(int argc, char** argv) {
  std::string tool;
  std::string workdir = ".";
  int only = 0;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--tool" && k + 1 < argc) {
      tool = argv[++k];
    } else if (a == "--workdir" && k + 1 < argc) {
      workdir = argv[++k];
    } else if (a == "--only" && k + 1 < argc) {
      only = std::atoi(argv[++k]);
    } else {
      std::fprintf(stderr, "usage: %s --tool PATH --workdir DIR [--only K]\n", argv[0]);
      return 2;
    }
  }

  using csg::Outcome;
  std::map<int, Outcome> results;
  auto run = [&](int k, const std::function<Outcome()>& fn) {
    if (only != 0 && only != k) return;
    try {
      results[k] = fn();
    } catch (const std::exception& e) {
      results[k] = {false, std::string("exception: ") + e.what()};
    }
  };
  run(1, csg::occupation_identity);
  run(3, csg::cop_optimality);
  run(4, csg::g2_closed_form);
  run(5, csg::nash_rate);
  run(6, csg::truncation_bounds);
  run(7, csg::example1_certificates);
  run(8, csg::monte_carlo);
  if (only == 0 || only == 9) {
    if (tool.empty()) {
      results[9] = {false, "no --tool given"};
    } else {
      run(9, [&] { return csg::cli_determinism(tool, workdir); });
    }
  }
  // Flow balance is accumulated over the other criteria.
  if (only == 0) {
    results[2] = {csg::g_flow_worst <= 1e-8,
                  csg::fmt("max flow residual %.3g (tol 1e-8) over %ld measures and the "
                           "damped Nash iterates",
                           csg::g_flow_worst, csg::g_flow_count)};
  }

  int failed = 0;
  std::string report;
  for (const auto& [k, r] : results) {
    report += csg::fmt("%s criterion %d: ", r.pass ? "PASS" : "FAIL", k) + r.detail + "\n";
    if (!r.pass) ++failed;
  }
  std::fputs(report.c_str(), stdout);
  if (only == 0) {
    std::ofstream(std::filesystem::path(workdir) / "acceptance_report.txt") << report;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
