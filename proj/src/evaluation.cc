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

#include "csg/evaluation.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

#include "csg/errors.h"
#include "csg/rng.h"

namespace csg {

AveragedChain average_chain(const GameSpec& spec, const MultiStrategy& phi) {
  const int S = spec.num_states();
  const int L = spec.num_constraints();
  AveragedChain chain;
  chain.kernel.assign(S, std::vector<double>(S, 0.0));
  chain.cost.assign(spec.n_players,
                    std::vector<std::vector<double>>(L + 1, std::vector<double>(S, 0.0)));
  for (int x = 0; x < S; ++x) {
    const auto w = profile_weights(spec, phi, x);
    for (int j = 0; j < static_cast<int>(w.size()); ++j) {
      if (w[j] == 0.0) continue;
      for (int y = 0; y < S; ++y) chain.kernel[x][y] += w[j] * spec.transition[x][j][y];
      for (int i = 0; i < spec.n_players; ++i)
        for (int l = 0; l <= L; ++l) chain.cost[i][l][x] += w[j] * spec.costs[i][l][x][j];
    }
  }
  return chain;
}

std::vector<std::vector<double>> solve_discounted(
    const std::vector<std::vector<double>>& kernel, double alpha,
    const std::vector<std::vector<double>>& rhs) {
  const int S = static_cast<int>(kernel.size());
  const int K = static_cast<int>(rhs.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(S, S);
  for (int x = 0; x < S; ++x)
    for (int y = 0; y < S; ++y) A(x, y) -= alpha * kernel[x][y];
  Eigen::MatrixXd B(S, K);
  double scale = 1.0;
  for (int k = 0; k < K; ++k)
    for (int x = 0; x < S; ++x) {
      B(x, k) = rhs[k][x];
      scale = std::max(scale, std::abs(rhs[k][x]));
    }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::MatrixXd V = lu.solve(B);
  const double residual = K > 0 ? (A * V - B).cwiseAbs().maxCoeff() : 0.0;
  if (!(residual <= 1e-10 * S * scale)) {
    throw NumericalError("discounted linear solve residual " + std::to_string(residual) +
                         " exceeds bound");
  }
  std::vector<std::vector<double>> out(K, std::vector<double>(S));
  for (int k = 0; k < K; ++k)
    for (int x = 0; x < S; ++x) out[k][x] = V(x, k);
  return out;
}

CostReport evaluate_exact(const GameSpec& spec, const MultiStrategy& phi) {
  return evaluate_exact(spec, phi, spec.eta);
}

CostReport evaluate_exact(const GameSpec& spec, const MultiStrategy& phi,
                          const std::vector<double>& eta) {
  validate_profile(spec, phi);
  const int S = spec.num_states();
  const int L = spec.num_constraints();
  const auto chain = average_chain(spec, phi);
  std::vector<std::vector<double>> rhs;
  for (int i = 0; i < spec.n_players; ++i)
    for (int l = 0; l <= L; ++l) rhs.push_back(chain.cost[i][l]);
  const auto values = solve_discounted(chain.kernel, spec.alpha, rhs);

  CostReport report;
  report.J.assign(spec.n_players, std::vector<double>(L + 1, 0.0));
  report.slack.assign(spec.n_players, std::vector<double>(L, 0.0));
  int k = 0;
  for (int i = 0; i < spec.n_players; ++i) {
    for (int l = 0; l <= L; ++l, ++k) {
      double acc = 0.0;
      for (int x = 0; x < S; ++x) acc += eta[x] * values[k][x];
      report.J[i][l] = (1.0 - spec.alpha) * acc;
    }
    for (int l = 1; l <= L; ++l) report.slack[i][l - 1] = spec.kappa[i][l - 1] - report.J[i][l];
  }
  return report;
}

int mc_horizon(double alpha, double max_cost) {
  if (max_cost <= 0.0) return 1;
  int T = 1;
  double tail = alpha * max_cost;
  while (!(tail < 1e-10)) {
    tail *= alpha;
    ++T;
  }
  return T;
}

namespace {

constexpr std::int64_t kBlock = 1024;

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double acc = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    c[k] = acc;
  }
  return c;
}

struct BlockSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

}  // namespace

std::vector<std::vector<McEstimate>> evaluate_mc(const GameSpec& spec,
                                                 const MultiStrategy& phi,
                                                 std::int64_t episodes,
                                                 std::uint64_t seed, int threads) {
  if (episodes <= 0) throw InvalidArgument("episodes must be positive");
  validate_profile(spec, phi);
  const int S = spec.num_states();
  const int n = spec.n_players;
  const int L = spec.num_constraints();
  const int K = n * (L + 1);
  const double alpha = spec.alpha;
  const int horizon = mc_horizon(alpha, max_abs_cost(spec));

  const auto eta_cum = cumulative(spec.eta);
  std::vector<std::vector<std::vector<double>>> strat_cum(n);
  for (int i = 0; i < n; ++i)
    for (int x = 0; x < S; ++x) strat_cum[i].push_back(cumulative(phi[i].probs[x]));
  std::vector<std::vector<std::vector<double>>> trans_cum(S);
  for (int x = 0; x < S; ++x)
    for (const auto& row : spec.transition[x]) trans_cum[x].push_back(cumulative(row));

  const std::int64_t num_blocks = (episodes + kBlock - 1) / kBlock;
  std::vector<BlockSums> blocks(num_blocks);

  auto run_block = [&](std::int64_t b) {
    BlockSums out{std::vector<double>(K, 0.0), std::vector<double>(K, 0.0)};
    std::vector<double> acc(K);
    std::vector<int> profile(n);
    const std::int64_t end = std::min(episodes, (b + 1) * kBlock);
    for (std::int64_t e = b * kBlock; e < end; ++e) {
      CounterRng rng(seed, static_cast<std::uint64_t>(e));
      std::fill(acc.begin(), acc.end(), 0.0);
      int x = rng.categorical(eta_cum);
      double disc = 1.0;
      for (int t = 0; t < horizon; ++t) {
        for (int i = 0; i < n; ++i) profile[i] = rng.categorical(strat_cum[i][x]);
        const int j = spec.encode_profile(x, profile);
        int k = 0;
        for (int i = 0; i < n; ++i)
          for (int l = 0; l <= L; ++l, ++k) acc[k] += disc * spec.costs[i][l][x][j];
        x = rng.categorical(trans_cum[x][j]);
        disc *= alpha;
      }
      for (int k = 0; k < K; ++k) {
        const double v = (1.0 - alpha) * acc[k];
        out.sum[k] += v;
        out.sum_sq[k] += v * v;
      }
    }
    blocks[b] = std::move(out);
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(num_blocks)));
  if (workers == 1) {
    for (std::int64_t b = 0; b < num_blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t b = w; b < num_blocks; b += workers) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> sum(K, 0.0), sum_sq(K, 0.0);
  for (const auto& blk : blocks) {
    for (int k = 0; k < K; ++k) {
      sum[k] += blk.sum[k];
      sum_sq[k] += blk.sum_sq[k];
    }
  }

  std::vector<std::vector<McEstimate>> out(n, std::vector<McEstimate>(L + 1));
  const double N = static_cast<double>(episodes);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l <= L; ++l, ++k) {
      McEstimate& est = out[i][l];
      est.estimate = sum[k] / N;
      double var = 0.0;
      if (episodes > 1) var = std::max(0.0, (sum_sq[k] - N * est.estimate * est.estimate) / (N - 1.0));
      est.std_error = std::sqrt(var / N);
      est.episodes = episodes;
      est.horizon = horizon;
      est.seed = seed;
    }
  }
  return out;
}

FeasibilityReport feasible(const GameSpec& spec, const MultiStrategy& phi) {
  const auto report = evaluate_exact(spec, phi);
  FeasibilityReport out;
  out.slack = report.slack;
  for (int i = 0; i < spec.n_players; ++i) {
    bool ok = true;
    for (double s : report.slack[i]) ok = ok && (s >= -kComputedTol);
    out.feasible.push_back(ok);
  }
  return out;
}

}  // namespace csg
