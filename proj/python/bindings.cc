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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "csg/assumptions.h"
#include "csg/cli.h"
#include "csg/cop.h"
#include "csg/errors.h"
#include "csg/evaluation.h"
#include "csg/json_io.h"
#include "csg/nash.h"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

csg::GameSpec load(const std::string& text) {
  csg::GameSpec spec = csg::parse_spec(text);
  csg::require_valid(spec);
  return spec;
}

csg::MultiStrategy load_profile(const csg::GameSpec& spec, const std::string& text) {
  return csg::profile_from_json(spec, csg::Json::parse(text));
}

std::string dump(const csg::Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constrained discounted stochastic game solver";
  m.attr("__version__") = csg::kToolVersion;

  // Translators run newest first.
  py::register_exception<csg::Error>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<csg::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("validate", [](const std::string& spec) {
    return dump(csg::validation_to_json(csg::validate_spec(csg::parse_spec(spec))));
  }, "spec"_a);

  m.def("evaluate", [](const std::string& spec, const std::string& profile) {
    const auto g = load(spec);
    const auto phi = load_profile(g, profile);
    csg::validate_profile(g, phi);
    return dump(csg::cost_report_to_json(csg::evaluate_exact(g, phi)));
  }, "spec"_a, "profile"_a);

  m.def("evaluate_mc", [](const std::string& spec, const std::string& profile,
                          std::int64_t episodes, std::uint64_t seed, int threads) {
    const auto g = load(spec);
    const auto phi = load_profile(g, profile);
    csg::validate_profile(g, phi);
    py::gil_scoped_release release;
    return dump(csg::mc_to_json(csg::evaluate_mc(g, phi, episodes, seed, threads)));
  }, "spec"_a, "profile"_a, "episodes"_a, "seed"_a = 0, "threads"_a = 1);

  m.def("solve_cop", [](const std::string& spec, int player,
                        std::optional<std::string> opponents) {
    const auto g = load(spec);
    if (player < 1 || player > g.n_players) throw csg::InvalidPlayer("player out of range");
    csg::MultiStrategy opp = opponents ? load_profile(g, *opponents) : csg::uniform_profile(g);
    csg::validate_profile(g, opp, player - 1);
    return dump(csg::cop_to_json(g, csg::solve_cop(g, player - 1, opp)));
  }, "spec"_a, "player"_a, "opponents"_a = py::none());

  m.def("solve_nash", [](const std::string& spec, double eps, int max_sweeps, int restarts,
                         const std::string& mode, const std::string& damping,
                         std::uint64_t seed) {
    const auto g = load(spec);
    csg::NashOptions o;
    o.eps = eps;
    o.max_sweeps = max_sweeps;
    o.restarts = restarts;
    o.order = csg::parse_sweep_order(mode);
    o.damping = csg::DampingSchedule::parse(damping);
    o.seed = seed;
    py::gil_scoped_release release;
    return dump(csg::nash_to_json(g, csg::solve_nash(g, o)));
  }, "spec"_a, "eps"_a = 1e-6, "max_sweeps"_a = 500, "restarts"_a = 5,
     "mode"_a = "gauss-seidel", "damping"_a = "harmonic", "seed"_a = 0);

  m.def("nash_gap", [](const std::string& spec, const std::string& profile) {
    const auto g = load(spec);
    const auto phi = load_profile(g, profile);
    csg::validate_profile(g, phi);
    return dump(csg::nash_to_json(g, csg::nash_gap(g, phi)));
  }, "spec"_a, "profile"_a);

  m.def("example1_drift", [](double q, double g, double alpha, double d,
                             const std::string& weight, std::int64_t levels) {
    csg::Example1Params p;
    p.q = q;
    p.g = g;
    p.alpha = alpha;
    p.d = d;
    if (weight == "simple") {
      p.weight = csg::Example1Weight::kSimple;
    } else if (weight == "linear") {
      p.weight = csg::Example1Weight::kLinear;
    } else {
      throw csg::InvalidArgument("weight must be simple or linear");
    }
    const auto model = csg::build_example1(p);
    return dump(csg::drift_to_json(csg::check_drift(model, model.weight, alpha, levels)));
  }, "q"_a = 0.5, "g"_a = 0.5, "alpha"_a = 0.9, "d"_a = 0.0, "weight"_a = "linear",
     "levels"_a = 10'000);

  m.def("example1_tail_bound", &csg::example1_tail_bound, "n"_a, "alpha"_a, "g"_a);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = csg::dispatch(args, out, err);
    return std::make_tuple(code, out.str(), err.str());
  }, "args"_a);
}
