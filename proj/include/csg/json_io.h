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

#ifndef CSG_JSON_IO_H_
#define CSG_JSON_IO_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "csg/assumptions.h"
#include "csg/cop.h"
#include "csg/evaluation.h"
#include "csg/model.h"
#include "csg/nash.h"
#include "csg/occupation.h"
#include "csg/truncation.h"

namespace csg {

using Json = nlohmann::json;

// Game file layout ("format": "csg-1"):
//   players     number of players
//   states      state identifiers
//   actions     per player: {state: [action, ...]}
//   transition  {state: [{next_state: prob}, ...]} one map per joint profile
//   costs       per player, per cost index: {state: [value per profile]}
//   kappa       per player: constraint bounds
//   alpha       discount factor
//   eta         {state: prob}; absent states get 0
// Joint profiles are listed with the last player's action varying fastest.
// Numbers may be written as "inf", "-inf" or "nan". Unknown keys are
// rejected. Structural problems throw ParseError; semantic ones are left to
// validate_spec.
GameSpec spec_from_json(const Json& j);
GameSpec parse_spec(const std::string& text);
Json spec_to_json(const GameSpec& spec);

// Finite numbers as-is, others as the strings above.
Json number(double v);
double number_from(const Json& j, const std::string& what);

// {"players": [{state: {action: prob}} or null, ...]}. Null entries become
// empty strategies. Absent actions get probability 0.
MultiStrategy profile_from_json(const GameSpec& spec, const Json& j);
Json strategy_to_json(const GameSpec& spec, int player, const StationaryStrategy& phi);
Json profile_to_json(const GameSpec& spec, const MultiStrategy& phi);

Json validation_to_json(const ValidationReport& report);
Json cost_report_to_json(const CostReport& report);
Json mc_to_json(const std::vector<std::vector<McEstimate>>& mc);
Json occupation_to_json(const GameSpec& spec, const OccupationMeasure& mu);
Json cop_to_json(const GameSpec& spec, const CopSolution& sol);
Json nash_to_json(const GameSpec& spec, const NashReport& report);
Json diagnostics_to_json(const TruncationDiagnostics& d);
Json sweep_to_json(const std::vector<SweepRecord>& records);
Json b_bound_to_json(const BBoundReport& r);
Json drift_to_json(const DriftReport& r);
Json zhang_to_json(const ZhangReport& r);
Json slater_to_json(const SlaterSampleReport& r);

// Sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);

}  // namespace csg

#endif  // CSG_JSON_IO_H_
