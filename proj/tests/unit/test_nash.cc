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

#include <cmath>

#include "doctest.h"

#include "csg/errors.h"
#include "csg/evaluation.h"
#include "csg/nash.h"
#include "support/test_games.h"

namespace csg {
namespace {

using testing::g2;
using testing::g3;

GameSpec single_action_pair() {
  GameSpec g;
  g.n_players = 2;
  g.states = {"s0"};
  g.actions = {{{"a"}}, {{"a"}}};
  g.transition = {{{1.0}}};
  g.costs = {{{{0.3}}}, {{{0.7}}}};
  g.kappa = {{}, {}};
  g.alpha = 0.5;
  g.eta = {1.0};
  return g;
}

// Player 1 wants to match, player 2 wants to mismatch.
GameSpec pennies() { return g3({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}); }

TEST_SUITE("nash") {

TEST_CASE("damping schedules") {
  DampingSchedule h;
  CHECK(h(0) == 0.5);
  CHECK(h(3) == 0.2);
  CHECK(DampingSchedule::parse("harmonic").describe() == "harmonic");
  const auto c = DampingSchedule::parse("constant:0.25");
  CHECK(c(7) == 0.25);
  const auto p = DampingSchedule::parse("power:0.5");
  CHECK(p(2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(DampingSchedule::parse("constant:0"), InvalidArgument);
  CHECK_THROWS_AS(DampingSchedule::parse("linear"), InvalidArgument);
  CHECK(parse_sweep_order("jacobi") == SweepOrder::kJacobi);
  CHECK_THROWS_AS(parse_sweep_order("random"), InvalidArgument);
}

TEST_CASE("gap of the two-action game") {
  auto r = nash_gap(g2(), {StationaryStrategy{{{0.5, 0.5}}}});
  CHECK(std::abs(r.gap[0]) <= 1e-9);
  CHECK(r.violation[0] == 0.0);
  CHECK(r.converged);
  r = nash_gap(g2(), {StationaryStrategy{{{0.0, 1.0}}}});
  CHECK(r.gap[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.violation[0] == 0.0);
  CHECK(r.br_value[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(r.converged);
  r = nash_gap(g2(), {StationaryStrategy{{{1.0, 0.0}}}});
  CHECK(r.violation[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate single-action game") {
  const GameSpec g = single_action_pair();
  auto r = nash_gap(g, uniform_profile(g));
  CHECK(r.gap == std::vector<double>{0.0, 0.0});
  CHECK(r.converged);
  r = solve_nash(g);
  CHECK(r.converged);
  CHECK(r.sweeps <= 1);
  CHECK(r.max_gap() == 0.0);
}

TEST_CASE("best response to a pure opponent is the pure counter-action") {
  const GameSpec g = pennies();
  for (int b = 0; b < 2; ++b) {
    MultiStrategy phi = uniform_profile(g);
    const int pick[] = {b};
    phi[1] = pure_strategy(g, 1, pick);
    const auto br = best_response(g, 0, phi);
    REQUIRE(br.optimal());
    CHECK(br.phi.probs[0][b] == doctest::Approx(1.0).epsilon(1e-12));
    // Enumerate the two pure replies.
    double best = INFINITY;
    for (int a = 0; a < 2; ++a) {
      MultiStrategy psi = phi;
      const int own[] = {a};
      psi[0] = pure_strategy(g, 0, own);
      best = std::min(best, evaluate_exact(g, psi).J[0][0]);
    }
    CHECK(std::abs(best - br.value) <= 1e-12);
  }
}

TEST_CASE("single-player games converge after one sweep") {
  NashOptions o;
  o.initial = MultiStrategy{StationaryStrategy{{{0.0, 1.0}}}};
  const auto r = solve_nash(g2(), o);
  CHECK(r.converged);
  CHECK(r.sweeps == 1);
  CHECK(r.max_gap() <= 1e-9);

  testing::Rng rng(4);
  testing::RandomGameParams p;
  p.max_states = 5;
  p.constraints = 1;
  p.safe_action = true;
  for (int trial = 0; trial < 10; ++trial) {
    const GameSpec g = testing::random_game(rng, p);
    const auto rr = solve_nash(g);
    CHECK(rr.converged);
    CHECK(rr.sweeps <= 1);
    CHECK(rr.max_gap() <= 1e-9);
  }
}

TEST_CASE("matching pennies converges to the mixed equilibrium") {
  NashOptions o;
  o.eps = 1e-4;
  o.max_sweeps = 2000;
  o.restarts = 0;
  o.initial = MultiStrategy{StationaryStrategy{{{0.9, 0.1}}}, StationaryStrategy{{{0.2, 0.8}}}};
  const auto r = solve_nash(pennies(), o);
  CHECK(r.max_gap() <= 1e-2);
  CHECK(r.trajectory.size() == static_cast<size_t>(r.sweeps));
}

TEST_CASE("certificates re-verify and gaps are nonnegative") {
  testing::Rng rng(77);
  testing::RandomGameParams p;
  p.players = 2;
  p.max_states = 3;
  p.max_actions = 3;
  p.constraints = 1;
  p.safe_action = true;
  p.alpha_hi = 0.7;
  NashOptions o;
  o.max_sweeps = 60;
  o.restarts = 1;
  for (int trial = 0; trial < 8; ++trial) {
    const GameSpec g = testing::random_game(rng, p);
    const auto r = solve_nash(g, o);
    const auto again = nash_gap(g, r.profile);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(again.gap[i] - r.gap[i]) <= 1e-8);
      CHECK(std::abs(again.violation[i] - r.violation[i]) <= 1e-8);
      if (r.violation[i] == 0.0) CHECK(r.gap[i] >= -1e-8);
    }
    CHECK(r.max_flow_residual <= 1e-8);
    CHECK_FALSE(r.slater_warning);
    CHECK(r.converged == (r.max_gap() <= o.eps));
  }
}

TEST_CASE("an equilibrium is a fixed point of one sweep") {
  NashOptions o;
  o.initial = MultiStrategy{StationaryStrategy{{{0.5, 0.5}}}, StationaryStrategy{{{0.5, 0.5}}}};
  o.max_sweeps = 1;
  o.restarts = 0;
  const auto r = solve_nash(pennies(), o);
  CHECK(r.max_gap() <= 1e-8);

  // Strict pure equilibrium; the tiny eps forces an actual sweep.
  const GameSpec coord = g3({{0.2, 1}, {1, 1}}, {{0.3, 1}, {1, 1}});
  o.eps = 1e-300;
  o.initial = MultiStrategy{StationaryStrategy{{{1.0, 0.0}}}, StationaryStrategy{{{1.0, 0.0}}}};
  const auto c = solve_nash(coord, o);
  CHECK(c.sweeps <= 1);
  CHECK(c.max_gap() <= 1e-8);
}

TEST_CASE("reports are reproducible and Jacobi threads do not change them") {
  testing::Rng rng(9);
  testing::RandomGameParams p;
  p.players = 3;
  p.max_states = 3;
  p.max_actions = 2;
  p.constraints = 1;
  p.safe_action = true;
  const GameSpec g = testing::random_game(rng, p);
  NashOptions o;
  o.max_sweeps = 20;
  o.restarts = 1;
  o.seed = 5;
  o.order = SweepOrder::kJacobi;
  const auto a = solve_nash(g, o);
  o.threads = 3;
  const auto b = solve_nash(g, o);
  CHECK(a.trajectory == b.trajectory);
  CHECK(a.gap == b.gap);
  for (int i = 0; i < 3; ++i) CHECK(a.profile[i].probs == b.profile[i].probs);
  o.order = SweepOrder::kGaussSeidel;
  o.threads = 1;
  const auto c = solve_nash(g, o);
  const auto d = solve_nash(g, o);
  CHECK(c.trajectory == d.trajectory);
}

TEST_CASE("infeasible constraints are surfaced") {
  const GameSpec bad = g2(0.7, -1.0);
  const auto r = solve_nash(bad);
  CHECK(r.br_infeasible[0]);
  CHECK(std::isinf(r.max_gap()));
  CHECK_FALSE(r.converged);
  CHECK(r.slater_warning);

  const auto tight = solve_nash(g2(0.7, 0.0));
  CHECK(tight.slater_warning);
}

TEST_CASE("options are validated") {
  NashOptions o;
  o.eps = 0.0;
  CHECK_THROWS_AS(solve_nash(g2(), o), InvalidArgument);
  o = NashOptions{};
  o.initial = MultiStrategy{StationaryStrategy{{{0.2, 0.2}}}};
  CHECK_THROWS_AS(solve_nash(g2(), o), InvalidArgument);
}

}  // TEST_SUITE

}  // namespace
}  // namespace csg
