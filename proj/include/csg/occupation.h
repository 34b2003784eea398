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

#ifndef CSG_OCCUPATION_H_
#define CSG_OCCUPATION_H_

#include <vector>

#include "csg/model.h"

namespace csg {

// Normalized discounted occupation measure of one player on its
// state-action pairs, with the state marginal cached.
class OccupationMeasure {
 public:
  OccupationMeasure() = default;

  // Entries in [-1e-12, 0) are clamped to zero and the mass renormalized if
  // clamping moved it by more than 1e-12. Throws InvalidArgument on larger
  // negative entries or when the total mass is not 1 within 1e-9.
  static OccupationMeasure from_weights(int player,
                                        std::vector<std::vector<double>> weights);

  int player() const { return player_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<double>& marginal() const { return marginal_; }
  double weight(int x, int a) const { return weights_[x][a]; }
  int num_states() const { return static_cast<int>(weights_.size()); }
  double mass() const;

 private:
  OccupationMeasure(int player, std::vector<std::vector<double>> weights);

  int player_ = 0;
  std::vector<std::vector<double>> weights_;
  std::vector<double> marginal_;
};

// Weights over full joint profiles, rho[x][j].
struct CorrelatedOccupation {
  std::vector<std::vector<double>> weights;
};

OccupationMeasure occupation_from_strategy(const ReducedMdp& reduced,
                                           const StationaryStrategy& phi_i);

// max_x |mu_hat(x) - (1-alpha) eta(x) - alpha sum_{z,a} p(x|z,a) mu(z,a)|
double flow_residual(const OccupationMeasure& mu, const ReducedMdp& reduced);

// sum_{x,a} cost[x][a] mu(x,a)
double pair_cost(const OccupationMeasure& mu,
                 const std::vector<std::vector<double>>& cost);

struct Disaggregation {
  std::vector<double> marginal;
  StationaryStrategy strategy;
};

// Conditional action distributions mu(x,.)/mu_hat(x); uniform where the
// marginal is at most 1e-12.
Disaggregation disaggregate(const OccupationMeasure& mu);

// lambda * mu1 + (1 - lambda) * mu2
OccupationMeasure mix(const OccupationMeasure& mu1, const OccupationMeasure& mu2,
                      double lambda);

// Marginal of rho on player i's own actions.
OccupationMeasure project(const GameSpec& spec, const CorrelatedOccupation& rho,
                          int player);

// Product-form rho(x,j) = mu_hat(x) * prod_k phi_k(a_k|x) of the chain
// induced by the full profile.
CorrelatedOccupation correlated_from_profile(const GameSpec& spec,
                                             const MultiStrategy& phi);

}  // namespace csg

#endif  // CSG_OCCUPATION_H_
