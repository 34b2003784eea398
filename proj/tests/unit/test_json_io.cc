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
#include "csg/json_io.h"
#include "support/test_games.h"

namespace csg {
namespace {

using testing::g1;
using testing::g2;

const char* kG2Text = R"({
  "format": "csg-1",
  "players": 1,
  "states": ["s0"],
  "actions": [{"s0": ["a", "b"]}],
  "transition": {"s0": [{"s0": 1}, {"s0": 1}]},
  "costs": [[{"s0": [0, 1]}, {"s0": [1, 0]}]],
  "kappa": [[0.5]],
  "alpha": 0.7,
  "eta": {"s0": 1}
})";

TEST_SUITE("json_io") {

TEST_CASE("parse a hand-written game") {
  const GameSpec g = parse_spec(kG2Text);
  const GameSpec ref = g2();
  CHECK(g.states == ref.states);
  CHECK(g.actions == ref.actions);
  CHECK(g.transition == ref.transition);
  CHECK(g.costs == ref.costs);
  CHECK(g.kappa == ref.kappa);
  CHECK(g.alpha == ref.alpha);
  CHECK(g.eta == ref.eta);
}

TEST_CASE("round trip through JSON") {
  testing::Rng rng(13);
  testing::RandomGameParams p;
  p.players = 2;
  p.max_states = 4;
  p.constraints = 2;
  p.full_support_eta = false;
  for (int trial = 0; trial < 20; ++trial) {
    const GameSpec g = testing::random_game(rng, p);
    const GameSpec h = parse_spec(spec_to_json(g).dump());
    CHECK(h.states == g.states);
    CHECK(h.actions == g.actions);
    CHECK(h.transition == g.transition);
    CHECK(h.costs == g.costs);
    CHECK(h.kappa == g.kappa);
    CHECK(h.alpha == g.alpha);
    CHECK(h.eta == g.eta);
    const auto phi = testing::random_profile(rng, g);
    const auto back = profile_from_json(g, profile_to_json(g, phi));
    for (int i = 0; i < 2; ++i) CHECK(back[i].probs == phi[i].probs);
  }
}

TEST_CASE("structural errors") {
  Json j = Json::parse(kG2Text);
  j["extra"] = 1;
  CHECK_THROWS_AS(spec_from_json(j), ParseError);
  j = Json::parse(kG2Text);
  j.erase("format");
  CHECK_THROWS_AS(spec_from_json(j), ParseError);
  j = Json::parse(kG2Text);
  j["format"] = "csg-2";
  CHECK_THROWS_AS(spec_from_json(j), ParseError);
  j = Json::parse(kG2Text);
  j["transition"]["s0"][0] = {{"s9", 1}};
  CHECK_THROWS_AS(spec_from_json(j), ParseError);
  j = Json::parse(kG2Text);
  j["states"] = {"s0", "s0"};
  CHECK_THROWS_AS(spec_from_json(j), ParseError);
  CHECK_THROWS_AS(parse_spec("{not json"), ParseError);
}

TEST_CASE("semantic problems reach validation with original names") {
  Json j = Json::parse(kG2Text);
  j["transition"]["s0"][1] = {{"s0", 0.5}};
  auto r = validate_spec(spec_from_json(j));
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].invariant == Invariant::kRowNotStochastic);
  CHECK(r.violations[0].where.find("s0") != std::string::npos);

  j = Json::parse(kG2Text);
  j["costs"][0][0]["s0"][0] = "nan";
  r = validate_spec(spec_from_json(j));
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].invariant == Invariant::kNonFinite);

  j = Json::parse(kG2Text);
  j["transition"].erase("s0");
  r = validate_spec(spec_from_json(j));
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].invariant == Invariant::kIndexComplete);

  const auto vj = validation_to_json(r);
  CHECK(vj["ok"] == false);
  CHECK(vj["violations"][0]["invariant"] == "index incomplete");
}

TEST_CASE("strategy files") {
  const GameSpec g = g2();
  auto phi = profile_from_json(g, Json::parse(R"({"players": [{"s0": {"b": 1}}]})"));
  CHECK(phi[0].probs[0] == std::vector<double>{0.0, 1.0});
  phi = profile_from_json(g, Json::parse(R"({"players": [null]})"));
  CHECK(phi[0].probs.empty());
  CHECK_THROWS_AS(profile_from_json(g, Json::parse(R"({"players": [{"s0": {"z": 1}}]})")),
                  InvalidArgument);
  CHECK_THROWS_AS(profile_from_json(g, Json::parse(R"({"players": [{}]})")), InvalidArgument);
  CHECK_THROWS_AS(profile_from_json(g, Json::parse(R"({"players": []})")), InvalidArgument);
  CHECK_THROWS_AS(profile_from_json(g, Json::parse(R"({"players": [null], "x": 1})")), ParseError);
}

TEST_CASE("numbers and canonical output") {
  CHECK(number(0.25) == 0.25);
  CHECK(number(INFINITY) == "inf");
  CHECK(number(-INFINITY) == "-inf");
  CHECK(number(NAN) == "nan");
  CHECK(std::isinf(number_from("inf", "x")));
  CHECK_THROWS_AS(number_from(Json("x"), "x"), ParseError);
  Json j = {{"b", 0.1}, {"a", {{"d", 1}, {"c", 2}}}};
  const std::string s = canonical_dump(j);
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("\"c\"") < s.find("\"d\""));
  CHECK(s.back() == '\n');
  CHECK(Json::parse(s)["b"].get<double>() == 0.1);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(canonical_dump(Json{{"x", 2.0}, {"y", 3}, {"z", Json::array()}}) ==
        "{\n  \"x\": 2.0,\n  \"y\": 3,\n  \"z\": []\n}\n");
  const double third = 1.0 / 3.0;
  CHECK(Json::parse(canonical_dump(Json(third))).get<double>() == third);
}

TEST_CASE("occupation serialization names states and actions") {
  const GameSpec g = g1();
  const auto mu = OccupationMeasure::from_weights(0, {{0.5}, {0.5}});
  const auto j = occupation_to_json(g, mu);
  CHECK(j["player"] == 1);
  CHECK(j["weights"]["s1"]["go"] == 0.5);
}

}  // TEST_SUITE

}  // namespace
}  // namespace csg
