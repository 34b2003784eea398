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

#include "csg/occupation.h"

#include <Eigen/Dense>
#include <cmath>

#include "csg/errors.h"
#include "csg/evaluation.h"

namespace csg {

namespace {

constexpr double kClampTol = 1e-12;
constexpr double kZeroMarginal = 1e-12;

std::vector<double> stationary_marginal(const std::vector<std::vector<double>>& kernel,
                                        double alpha, const std::vector<double>& eta) {
  // mu_hat = (1-alpha) eta + alpha K^T mu_hat
  const int S = static_cast<int>(eta.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(S, S);
  Eigen::VectorXd b(S);
  for (int z = 0; z < S; ++z) {
    b(z) = (1.0 - alpha) * eta[z];
    for (int x = 0; x < S; ++x) A(x, z) -= alpha * kernel[z][x];
  }
  const Eigen::VectorXd m = A.partialPivLu().solve(b);
  const double residual = (A * m - b).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10 * std::max(1, S))) {
    throw NumericalError("occupation marginal solve residual too large");
  }
  return std::vector<double>(m.data(), m.data() + S);
}

}  // namespace

OccupationMeasure::OccupationMeasure(int player, std::vector<std::vector<double>> weights)
    : player_(player), weights_(std::move(weights)) {
  marginal_.resize(weights_.size());
  for (size_t x = 0; x < weights_.size(); ++x) {
    double acc = 0.0;
    for (double w : weights_[x]) acc += w;
    marginal_[x] = acc;
  }
}

OccupationMeasure OccupationMeasure::from_weights(int player,
                                                  std::vector<std::vector<double>> weights) {
  double before = 0.0;
  double after = 0.0;
  for (auto& row : weights) {
    for (double& w : row) {
      if (!std::isfinite(w)) throw InvalidArgument("occupation weight not finite");
      before += w;
      if (w < 0.0) {
        if (w < -kClampTol) {
          throw InvalidArgument("occupation weight " + std::to_string(w) + " is negative");
        }
        w = 0.0;
      }
      after += w;
    }
  }
  if (std::abs(after - 1.0) > kComputedTol) {
    throw InvalidArgument("occupation measure mass " + std::to_string(after) + " is not 1");
  }
  if (std::abs(after - before) > kClampTol) {
    for (auto& row : weights)
      for (double& w : row) w /= after;
  }
  return OccupationMeasure(player, std::move(weights));
}

double OccupationMeasure::mass() const {
  double acc = 0.0;
  for (double m : marginal_) acc += m;
  return acc;
}

OccupationMeasure occupation_from_strategy(const ReducedMdp& reduced,
                                           const StationaryStrategy& phi_i) {
  const int S = reduced.num_states();
  if (phi_i.num_states() != S) throw InvalidArgument("strategy/state count mismatch");
  std::vector<std::vector<double>> K(S, std::vector<double>(S, 0.0));
  for (int z = 0; z < S; ++z) {
    if (static_cast<int>(phi_i.probs[z].size()) != reduced.num_actions(z)) {
      throw InvalidArgument("strategy/action count mismatch");
    }
    for (int a = 0; a < reduced.num_actions(z); ++a) {
      const double p = phi_i.probs[z][a];
      if (p == 0.0) continue;
      for (int x = 0; x < S; ++x) K[z][x] += p * reduced.kernel[z][a][x];
    }
  }
  const auto marginal = stationary_marginal(K, reduced.alpha, reduced.eta);
  std::vector<std::vector<double>> weights(S);
  for (int x = 0; x < S; ++x) {
    weights[x].resize(reduced.num_actions(x));
    for (int a = 0; a < reduced.num_actions(x); ++a) {
      weights[x][a] = marginal[x] * phi_i.probs[x][a];
    }
  }
  return OccupationMeasure::from_weights(reduced.player, std::move(weights));
}

double flow_residual(const OccupationMeasure& mu, const ReducedMdp& reduced) {
  const int S = reduced.num_states();
  if (mu.num_states() != S) throw InvalidArgument("occupation/state count mismatch");
  std::vector<double> inflow(S, 0.0);
  for (int z = 0; z < S; ++z) {
    for (int a = 0; a < reduced.num_actions(z); ++a) {
      const double w = mu.weight(z, a);
      if (w == 0.0) continue;
      for (int x = 0; x < S; ++x) inflow[x] += w * reduced.kernel[z][a][x];
    }
  }
  double worst = 0.0;
  for (int x = 0; x < S; ++x) {
    const double r = mu.marginal()[x] - (1.0 - reduced.alpha) * reduced.eta[x] -
                     reduced.alpha * inflow[x];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double pair_cost(const OccupationMeasure& mu,
                 const std::vector<std::vector<double>>& cost) {
  double acc = 0.0;
  for (int x = 0; x < mu.num_states(); ++x)
    for (size_t a = 0; a < mu.weights()[x].size(); ++a) acc += cost[x][a] * mu.weight(x, a);
  return acc;
}

Disaggregation disaggregate(const OccupationMeasure& mu) {
  Disaggregation out;
  out.marginal = mu.marginal();
  out.strategy.probs.resize(mu.num_states());
  for (int x = 0; x < mu.num_states(); ++x) {
    const auto& row = mu.weights()[x];
    auto& probs = out.strategy.probs[x];
    const double m = out.marginal[x];
    const int na = static_cast<int>(row.size());
    if (m <= kZeroMarginal) {
      probs.assign(na, 1.0 / na);
      continue;
    }
    probs.resize(na);
    double sum = 0.0;
    for (int a = 0; a < na; ++a) {
      probs[a] = row[a] / m;
      sum += probs[a];
    }
    for (double& p : probs) p /= sum;
  }
  return out;
}

OccupationMeasure mix(const OccupationMeasure& mu1, const OccupationMeasure& mu2,
                      double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("mix weight outside [0,1]");
  if (mu1.player() != mu2.player() || mu1.num_states() != mu2.num_states()) {
    throw InvalidArgument("mixing measures of different players or shapes");
  }
  if (lambda == 1.0) return mu1;
  if (lambda == 0.0) return mu2;
  std::vector<std::vector<double>> w = mu1.weights();
  for (int x = 0; x < mu1.num_states(); ++x) {
    if (w[x].size() != mu2.weights()[x].size()) {
      throw InvalidArgument("mixing measures with different action sets");
    }
    for (size_t a = 0; a < w[x].size(); ++a) {
      w[x][a] = lambda * w[x][a] + (1.0 - lambda) * mu2.weight(x, static_cast<int>(a));
    }
  }
  return OccupationMeasure::from_weights(mu1.player(), std::move(w));
}

OccupationMeasure project(const GameSpec& spec, const CorrelatedOccupation& rho,
                          int player) {
  if (player < 0 || player >= spec.n_players) throw InvalidPlayer("player out of range");
  const int S = spec.num_states();
  if (static_cast<int>(rho.weights.size()) != S) {
    throw InvalidArgument("correlated occupation/state count mismatch");
  }
  std::vector<std::vector<double>> w(S);
  for (int x = 0; x < S; ++x) {
    w[x].assign(spec.num_actions(player, x), 0.0);
    if (static_cast<int>(rho.weights[x].size()) != spec.num_profiles(x)) {
      throw InvalidArgument("correlated occupation/profile count mismatch");
    }
    for (int j = 0; j < spec.num_profiles(x); ++j) {
      w[x][spec.action_in_profile(x, j, player)] += rho.weights[x][j];
    }
  }
  return OccupationMeasure::from_weights(player, std::move(w));
}

CorrelatedOccupation correlated_from_profile(const GameSpec& spec,
                                             const MultiStrategy& phi) {
  validate_profile(spec, phi);
  const auto chain = average_chain(spec, phi);
  const auto marginal = stationary_marginal(chain.kernel, spec.alpha, spec.eta);
  CorrelatedOccupation rho;
  rho.weights.resize(spec.num_states());
  for (int x = 0; x < spec.num_states(); ++x) {
    auto w = profile_weights(spec, phi, x);
    for (double& v : w) v *= marginal[x];
    rho.weights[x] = std::move(w);
  }
  return rho;
}

}  // namespace csg
