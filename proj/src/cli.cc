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

#include "csg/cli.h"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "csg/assumptions.h"
#include "csg/cop.h"
#include "csg/errors.h"
#include "csg/evaluation.h"
#include "csg/json_io.h"
#include "csg/nash.h"
#include "csg/rng.h"
#include "csg/truncation.h"

namespace csg {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

namespace {

struct InvalidSpec {
  ValidationReport report;
};

struct Run {
  std::string command;
  Json inputs = Json::object();
  std::optional<std::uint64_t> seed;

  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string bytes = ss.str();
    inputs[path] = sha256_hex(bytes);
    return bytes;
  }

  Json read_json(const std::string& path) {
    const std::string text = read(path);
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError("malformed JSON in '" + path + "': " + e.what());
    }
  }

  GameSpec spec(const std::string& path) {
    GameSpec g = spec_from_json(read_json(path));
    auto report = validate_spec(g);
    if (!report.ok()) throw InvalidSpec{std::move(report)};
    return g;
  }
};

struct NashFlags {
  double eps = 1e-6;
  int max_sweeps = 500;
  int restarts = 5;
  std::string mode = "gauss-seidel";
  std::string damping = "harmonic";
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--eps", eps, "convergence threshold on the max gap");
    app->add_option("--max-sweeps", max_sweeps, "sweeps per attempt");
    app->add_option("--restarts", restarts, "random restarts after the first attempt");
    app->add_option("--mode", mode, "gauss-seidel or jacobi");
    app->add_option("--damping", damping, "harmonic, constant:X or power:P");
    app->add_option("--seed", seed, "seed for restart profiles");
  }

  NashOptions options(int threads) const {
    NashOptions o;
    o.eps = eps;
    o.max_sweeps = max_sweeps;
    o.restarts = restarts;
    o.order = parse_sweep_order(mode);
    o.damping = DampingSchedule::parse(damping);
    o.seed = seed;
    o.threads = threads;
    return o;
  }
};

MultiStrategy full_profile(const GameSpec& spec, const Json& j) {
  auto phi = profile_from_json(spec, j);
  for (int i = 0; i < spec.n_players; ++i) {
    if (phi[i].probs.empty()) {
      throw InvalidArgument("strategy of player " + std::to_string(i + 1) + " is missing");
    }
  }
  validate_profile(spec, phi);
  return phi;
}

std::vector<double> weight_vector(const GameSpec& spec, const Json& j) {
  if (!j.is_object()) throw ParseError("weight file must map states to numbers");
  std::vector<double> w(spec.num_states());
  for (int x = 0; x < spec.num_states(); ++x) {
    auto it = j.find(spec.states[x]);
    if (it == j.end()) throw InvalidArgument("weight missing for state '" + spec.states[x] + "'");
    w[x] = number_from(*it, "weight");
  }
  if (j.size() != w.size()) throw InvalidArgument("weight file names an unknown state");
  return w;
}

Example1Weight parse_weight(const std::string& name) {
  if (name == "simple") return Example1Weight::kSimple;
  if (name == "linear") return Example1Weight::kLinear;
  throw InvalidArgument("unknown weight '" + name + "'; expected simple or linear");
}

const char* weight_name(Example1Weight w) {
  return w == Example1Weight::kSimple ? "simple" : "linear";
}

Json example1_params_json(const Example1Params& p) {
  return Json{{"q", p.q},
              {"g", p.g},
              {"alpha", p.alpha},
              {"d", p.d},
              {"weight", weight_name(p.weight)},
              {"level_cost", p.level_cost},
              {"star_cost_scale", p.star_cost_scale},
              {"constrained", p.constrained},
              {"kappa", p.kappa}};
}

// Reads truncation keys and, for example1, model parameters.
void read_truncation_params(const Json& j, bool example1, Example1Params& ep, McsgParams& mp) {
  if (!j.is_object()) throw ParseError("params file must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    auto integer = [&]() {
      if (!v.is_number_integer()) throw ParseError(k + " must be an integer");
      return v.get<std::int64_t>();
    };
    if (k == "levels") {
      mp.levels = integer();
    } else if (k == "tau_tail") {
      mp.tau_tail = number_from(v, k);
    } else if (k == "m_clip") {
      mp.m_clip = static_cast<int>(integer());
    } else if (k == "m_eta") {
      mp.m_eta = static_cast<int>(integer());
    } else if (k == "m_kappa") {
      mp.m_kappa = static_cast<int>(integer());
    } else if (example1 && k == "q") {
      ep.q = number_from(v, k);
    } else if (example1 && k == "g") {
      ep.g = number_from(v, k);
    } else if (example1 && k == "alpha") {
      ep.alpha = number_from(v, k);
    } else if (example1 && k == "d") {
      ep.d = number_from(v, k);
    } else if (example1 && k == "weight") {
      if (!v.is_string()) throw ParseError("weight must be a string");
      ep.weight = parse_weight(v.get<std::string>());
    } else if (example1 && k == "level_cost") {
      ep.level_cost = number_from(v, k);
    } else if (example1 && k == "star_cost_scale") {
      ep.star_cost_scale = number_from(v, k);
    } else if (example1 && k == "constrained") {
      if (!v.is_boolean()) throw ParseError("constrained must be a boolean");
      ep.constrained = v.get<bool>();
    } else if (example1 && k == "kappa") {
      ep.kappa = number_from(v, k);
    } else {
      throw ParseError("unknown key '" + k + "' in params");
    }
  }
}

std::vector<int> parse_ms(const std::string& text) {
  std::vector<int> ms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const int m = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      ms.push_back(m);
    } catch (const std::exception&) {
      throw InvalidArgument("--ms expects a comma-separated list of integers");
    }
  }
  if (ms.empty()) throw InvalidArgument("--ms is empty");
  return ms;
}

Json describe_example1(const CountableModel& model, std::int64_t levels) {
  Json states = Json::array();
  for (std::int64_t x = 0; x < levels * model.states_per_level; ++x) {
    const auto acts = model.actions(0, x);
    Json tr = Json::object(), cost = Json::object();
    for (int a = 0; a < static_cast<int>(acts.size()); ++a) {
      Json row = Json::object();
      for (const auto& t : model.transition(x, a)) row[model.state_name(t.target)] = t.prob;
      tr[acts[a]] = std::move(row);
      Json c = Json::array();
      for (int l = 0; l <= model.num_constraints; ++l) c.push_back(model.cost(0, l, x, a));
      cost[acts[a]] = std::move(c);
    }
    states.push_back(Json{{"state", model.state_name(x)},
                          {"actions", acts},
                          {"transition", std::move(tr)},
                          {"cost", std::move(cost)},
                          {"eta", model.eta(x)},
                          {"w", model.weight(x)}});
  }
  return states;
}

int threads_default() {
  if (const char* env = std::getenv("CSG_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

Json resolved_options(const CLI::App* sub) {
  Json o = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      o[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& res = opt->results();
      o[name] = res.size() == 1 ? Json(res.front()) : Json(res);
    } else {
      o[name] = opt->get_default_str();
    }
  }
  return o;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver for constrained discounted stochastic games", "csg"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", kToolVersion);

  std::string out_path;
  int threads = threads_default();
  bool record_timing = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write the JSON document here instead of stdout");
    sub->add_option("--threads", threads, "worker threads (default $CSG_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--record-timing", record_timing,
                  "add the wall-clock duration to the manifest");
  };

  std::string spec_path, strategy_path, opponents_path, w_path, model_name, params_path,
      ms_text, csv_path, initial_path;

  auto* validate = app.add_subcommand("validate", "check a game file");
  validate->add_option("--spec", spec_path, "game file")->required();
  common(validate);

  std::int64_t mc_episodes = 0;
  std::uint64_t seed = 0;
  auto* eval = app.add_subcommand("eval", "evaluate a stationary profile");
  eval->add_option("--spec", spec_path, "game file")->required();
  eval->add_option("--strategy", strategy_path, "profile file")->required();
  eval->add_option("--mc", mc_episodes, "Monte Carlo episodes (0 = exact only)");
  eval->add_option("--seed", seed, "Monte Carlo seed");
  common(eval);

  int player = 1;
  auto* cop = app.add_subcommand("cop", "solve one player's constrained problem");
  cop->add_option("--spec", spec_path, "game file")->required();
  cop->add_option("--player", player, "player (1-based)")->required();
  cop->add_option("--opponents", opponents_path, "profile file (default uniform)");
  common(cop);

  NashFlags nash_flags;
  auto* nash = app.add_subcommand("nash", "compute a stationary constrained equilibrium");
  nash->add_option("--spec", spec_path, "game file")->required();
  nash->add_option("--initial", initial_path, "starting profile file");
  nash_flags.add(nash);
  common(nash);

  NashFlags trunc_flags;
  auto* truncate = app.add_subcommand("truncate", "sweep m-CSG approximations");
  truncate->add_option("--model", model_name, "example1 or a game file")->required();
  truncate->add_option("--params", params_path, "params file");
  truncate->add_option("--ms", ms_text, "comma-separated m values")->required();
  truncate->add_option("--csv", csv_path, "also write the summary table here");
  trunc_flags.add(truncate);
  common(truncate);

  double check_alpha = -1.0;
  bool zhang = false, slater = false;
  int samples = 50;
  auto* check = app.add_subcommand("check", "check assumptions on a game file");
  check->add_option("--spec", spec_path, "game file")->required();
  check->add_option("--w", w_path, "weight file {state: w}");
  check->add_option("--alpha", check_alpha, "discount for the drift test (default: game alpha)");
  check->add_flag("--zhang", zhang, "also test the squared-weight condition");
  check->add_flag("--slater", slater, "sample the Slater condition");
  check->add_option("--samples", samples, "random opponent profiles");
  check->add_option("--seed", seed, "sampling seed");
  common(check);

  Example1Params ep;
  std::string weight = "simple";
  bool unconstrained = false;
  std::int64_t levels = 10'000, show_levels = 3, tail_n = 0, episodes = 1000;
  int strategies = 100;
  auto* ex1 = app.add_subcommand("example1", "example1 chain and its certificates");
  ex1->add_option("--q", ep.q, "jump probability of continue");
  ex1->add_option("--g", ep.g, "ratio of the geometric initial distribution");
  ex1->add_option("--alpha", ep.alpha, "discount factor");
  ex1->add_option("--shift", ep.d, "weight shift d");
  ex1->add_option("--weight", weight, "simple or linear");
  ex1->add_option("--level-cost", ep.level_cost, "c(n, .)");
  ex1->add_option("--star-cost-scale", ep.star_cost_scale, "c(n*) = scale * n");
  ex1->add_option("--kappa", ep.kappa, "constraint bound");
  ex1->add_flag("--unconstrained", unconstrained, "drop the constraint cost");
  ex1->add_option("--levels", levels, "levels covered by the checks");
  ex1->add_option("--show-levels", show_levels, "levels listed in the model dump");
  ex1->add_option("--tail-n", tail_n, "simulate the weighted tail from step n (0 = skip)");
  ex1->add_option("--episodes", episodes, "episodes per simulated strategy");
  ex1->add_option("--strategies", strategies, "random stationary strategies simulated");
  ex1->add_option("--seed", seed, "simulation seed");
  common(ex1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitInvalid;
  }

  CLI::App* sub = app.get_subcommands().front();
  Run run;
  run.command = sub->get_name();
  const auto start = std::chrono::steady_clock::now();
  Json result;
  int code = kExitOk;
  std::string csv_text;

  try {
    if (sub == validate) {
      const GameSpec g = spec_from_json(run.read_json(spec_path));
      const auto report = validate_spec(g);
      result = validation_to_json(report);
      code = report.ok() ? kExitOk : kExitInvalid;
    } else if (sub == eval) {
      const GameSpec g = run.spec(spec_path);
      const auto phi = full_profile(g, run.read_json(strategy_path));
      result = cost_report_to_json(evaluate_exact(g, phi));
      result["feasible"] = feasible(g, phi).feasible;
      if (mc_episodes > 0) {
        run.seed = seed;
        result["mc"] = mc_to_json(evaluate_mc(g, phi, mc_episodes, seed, threads));
      } else if (mc_episodes < 0) {
        throw InvalidArgument("--mc must be nonnegative");
      }
    } else if (sub == cop) {
      const GameSpec g = run.spec(spec_path);
      if (player < 1 || player > g.n_players) {
        throw InvalidPlayer("player " + std::to_string(player) + " out of range 1.." +
                            std::to_string(g.n_players));
      }
      MultiStrategy opp = uniform_profile(g);
      if (!opponents_path.empty()) {
        opp = profile_from_json(g, run.read_json(opponents_path));
        validate_profile(g, opp, player - 1);
        for (int i = 0; i < g.n_players; ++i) {
          if (i != player - 1 && opp[i].probs.empty()) {
            throw InvalidArgument("strategy of player " + std::to_string(i + 1) + " is missing");
          }
        }
      }
      const auto sol = solve_cop(g, player - 1, opp);
      result = cop_to_json(g, sol);
      if (!sol.optimal()) code = kExitInfeasible;
    } else if (sub == nash) {
      const GameSpec g = run.spec(spec_path);
      NashOptions o = nash_flags.options(threads);
      run.seed = o.seed;
      if (!initial_path.empty()) {
        o.initial = full_profile(g, run.read_json(initial_path));
      }
      const auto report = solve_nash(g, o);
      result = nash_to_json(g, report);
      bool infeasible = false;
      for (bool b : report.br_infeasible) infeasible = infeasible || b;
      if (infeasible) {
        code = kExitInfeasible;
      } else if (!report.converged) {
        code = kExitNotConverged;
      }
    } else if (sub == truncate) {
      NashOptions o = trunc_flags.options(threads);
      run.seed = o.seed;
      const bool is_example1 = model_name == "example1";
      Example1Params tp;
      McsgParams mp;
      if (!params_path.empty()) {
        read_truncation_params(run.read_json(params_path), is_example1, tp, mp);
      }
      CountableModel model;
      GameSpec finite;
      if (is_example1) {
        model = build_example1(tp);
        result["params"] = example1_params_json(tp);
      } else {
        finite = run.spec(model_name);
        model = model_from_spec(finite);
      }
      const auto ms = parse_ms(ms_text);
      const auto records = truncation_sweep(model, ms, mp, o);
      result["model"] = model_name;
      result["records"] = sweep_to_json(records);
      csv_text = sweep_summary_csv(records);
      result["summary_csv"] = csv_text;
      for (const auto& r : records) {
        if (!r.ok || !r.report.converged) code = kExitNotConverged;
      }
    } else if (sub == check) {
      const GameSpec g = run.spec(spec_path);
      const double a = check_alpha < 0.0 ? g.alpha : check_alpha;
      if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("--alpha must lie in (0,1)");
      result["positivity"] = [&] {
        const auto p = check_positivity(g.eta, g.states);
        return Json{{"holds", p.holds}, {"zero_states", p.zero_states}};
      }();
      if (!w_path.empty()) {
        const auto w = weight_vector(g, run.read_json(w_path));
        result["b_bound"] = b_bound_to_json(check_b_bound(g, w));
        result["drift"] = drift_to_json(check_drift(g, w, a));
        if (zhang) result["zhang"] = zhang_to_json(check_zhang(g, w, a));
      } else if (zhang) {
        throw InvalidArgument("--zhang needs --w");
      }
      if (slater) {
        run.seed = seed;
        const auto s = check_slater(g, samples, seed);
        result["slater"] = slater_to_json(s);
        if (s.flagged) code = kExitInfeasible;
      }
    } else if (sub == ex1) {
      ep.weight = parse_weight(weight);
      ep.constrained = !unconstrained;
      const auto model = build_example1(ep);
      if (levels < 1 || show_levels < 0) throw InvalidArgument("levels must be positive");
      result["params"] = example1_params_json(ep);
      result["model"] = describe_example1(model, show_levels);
      result["b_bound"] = b_bound_to_json(check_b_bound(model, model.weight, levels));
      result["drift"] = drift_to_json(check_drift(model, model.weight, ep.alpha, levels));
      result["zhang"] = zhang_to_json(check_zhang(model, model.weight, ep.alpha, levels));
      if (tail_n > 0) {
        run.seed = seed;
        if (strategies < 1) throw InvalidArgument("--strategies must be positive");
        const double bound = example1_tail_bound(tail_n, ep.alpha, ep.g);
        const double scaled = (1.0 - ep.alpha) * bound;
        // The closed-form bound is stated for the simple weight.
        Example1Params simple = ep;
        simple.weight = Example1Weight::kSimple;
        const auto w = example1_weight(simple);
        Json sims = Json::array();
        bool dominated = true;
        for (int k = 0; k < strategies; ++k) {
          const std::uint64_t key = seed + static_cast<std::uint64_t>(k);
          auto policy = [key](std::int64_t x) {
            if (x % 2 == 1) return std::vector<double>{1.0};
            CounterRng rng(key, (std::uint64_t{1} << 42) + static_cast<std::uint64_t>(x));
            const double pc = rng.uniform();
            return std::vector<double>{pc, 1.0 - pc};
          };
          const auto est = simulate_weighted_tail(model, w, policy, tail_n, episodes,
                                                  seed * 7919 + static_cast<std::uint64_t>(k));
          const bool ok = est.estimate <= scaled + 3.0 * est.std_error;
          dominated = dominated && ok;
          sims.push_back(Json{{"estimate", number(est.estimate)},
                              {"std_error", number(est.std_error)},
                              {"within_bound", ok}});
        }
        result["tail"] = Json{{"n", tail_n},
                              {"bound", number(bound)},
                              {"scaled_bound", number(scaled)},
                              {"episodes", episodes},
                              {"horizon", mc_horizon(ep.alpha, 1.0)},
                              {"simulations", std::move(sims)},
                              {"dominated", dominated},
                              {"note", "random stationary strategies only; history-dependent "
                                       "strategies are not sampled"}};
      }
    }
  } catch (const InvalidSpec& e) {
    result = validation_to_json(e.report);
    code = kExitInvalid;
  } catch (const InvalidArgument& e) {
    result = Json{{"error", {{"kind", "invalid-input"}, {"message", e.what()}}}};
    code = kExitInvalid;
  } catch (const Error& e) {
    result = Json{{"error", {{"kind", "failure"}, {"message", e.what()}}}};
    code = kExitFailure;
  }
  if (result.contains("error")) err << "error: " << result["error"]["message"].get<std::string>() << "\n";

  Json manifest{{"command", run.command},
                {"options", resolved_options(sub)},
                {"inputs", run.inputs},
                {"version", kToolVersion}};
  manifest["seed"] = run.seed ? Json(*run.seed) : Json(nullptr);
  if (record_timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    manifest["duration_seconds"] = dt.count();
  }
  Json doc{{"command", run.command}, {"exit_code", code}, {"manifest", manifest},
           {"result", std::move(result)}};
  const std::string text = canonical_dump(doc);
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitInvalid;
    }
    f << text;
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << csv_path << "'\n";
      return kExitInvalid;
    }
    f << csv_text;
  }
  return code;
}

}  // namespace csg
