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
#include <functional>
#include <limits>
#include <vector>

#include "doctest.h"

#include "csg/errors.h"
#include "csg/lp.h"
#include "support/test_games.h"

namespace csg {
namespace {

LinearProgram make(std::vector<double> c, std::vector<std::vector<double>> eq,
                   std::vector<double> beq, std::vector<std::vector<double>> le,
                   std::vector<double> ble) {
  LinearProgram lp;
  const int n = static_cast<int>(c.size());
  lp.c = Eigen::Map<Eigen::VectorXd>(c.data(), n);
  lp.A_eq.resize(static_cast<int>(eq.size()), n);
  for (int r = 0; r < lp.A_eq.rows(); ++r)
    for (int k = 0; k < n; ++k) lp.A_eq(r, k) = eq[r][k];
  lp.b_eq = Eigen::Map<Eigen::VectorXd>(beq.data(), static_cast<int>(beq.size()));
  lp.A_le.resize(static_cast<int>(le.size()), n);
  for (int r = 0; r < lp.A_le.rows(); ++r)
    for (int k = 0; k < n; ++k) lp.A_le(r, k) = le[r][k];
  lp.b_le = Eigen::Map<Eigen::VectorXd>(ble.data(), static_cast<int>(ble.size()));
  return lp;
}

// Minimum of c'x over the vertices of {A x <= b, x >= 0}, found by solving
// every square subsystem of active constraints.
double vertex_oracle(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(A.rows());
  Eigen::MatrixXd G(m + n, n);
  Eigen::VectorXd h(m + n);
  G.topRows(m) = A;
  h.head(m) = b;
  G.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
  h.tail(n).setZero();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd M(n, n);
      Eigen::VectorXd r(n);
      for (int k = 0; k < n; ++k) {
        M.row(k) = G.row(pick[k]);
        r(k) = h(pick[k]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(r);
      if (((G * x - h).array() > 1e-9).any()) return;
      best = std::min(best, c.dot(x));
      return;
    }
    for (int k = start; k < m + n; ++k) {
      pick[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

TEST_SUITE("lp") {

TEST_CASE("one-variable programs") {
  auto r = solve_lp(make({1.0}, {{1.0}}, {1.0}, {}, {}));
  CHECK(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-14));

  r = solve_lp(make({-1.0}, {}, {}, {}, {}));
  CHECK(r.status == LpStatus::kUnbounded);

  r = solve_lp(make({0.0}, {{1.0}}, {-1.0}, {}, {}));
  CHECK(r.status == LpStatus::kInfeasible);
}

TEST_CASE("degenerate program that cycles under the textbook rule") {
  // Beale's example.
  const auto lp = make({-0.75, 20.0, -0.5, 6.0}, {}, {},
                       {{0.25, -8.0, -1.0, 9.0}, {0.5, -12.0, -0.5, 3.0}, {0.0, 0.0, 1.0, 0.0}},
                       {0.0, 0.0, 1.0});
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(-1.25).epsilon(1e-12));
  CHECK(r.primal_residual <= 1e-9);
  CHECK(r.dual_residual <= 1e-9);
  CHECK(r.duality_gap <= 1e-8);
}

TEST_CASE("redundant equality rows") {
  const auto lp = make({1.0, 2.0, 0.0}, {{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}, {1.0, 0.0, 0.0}},
                       {1.0, 2.0, 0.25}, {}, {});
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.x(2) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("inconsistent dimensions are rejected") {
  LinearProgram lp = make({1.0, 1.0}, {{1.0, 1.0}}, {1.0}, {}, {});
  lp.b_eq.resize(2);
  CHECK_THROWS_AS(solve_lp(lp), InvalidArgument);
}

TEST_CASE("random programs match vertex enumeration and carry certificates") {
  testing::Rng rng(31);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = testing::unif_int(rng, 1, 4);
    const int m = testing::unif_int(rng, 1, 3);
    LinearProgram lp;
    lp.c.resize(n);
    for (int k = 0; k < n; ++k) lp.c(k) = testing::unif(rng, -1.0, 1.0);
    lp.A_le.resize(m + 1, n);
    lp.b_le.resize(m + 1);
    for (int r = 0; r < m; ++r) {
      for (int k = 0; k < n; ++k) lp.A_le(r, k) = testing::unif(rng, -1.0, 1.0);
      lp.b_le(r) = testing::unif(rng, 0.0, 1.0);
    }
    lp.A_le.row(m).setOnes();
    lp.b_le(m) = 10.0;
    lp.A_eq.resize(0, n);
    lp.b_eq.resize(0);
    const auto r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::kOptimal);
    ++optimal;
    CHECK(std::abs(r.value - vertex_oracle(lp.c, lp.A_le, lp.b_le)) <= 1e-9);
    CHECK((lp.A_le * r.x - lp.b_le).maxCoeff() <= 1e-9);
    CHECK(r.x.minCoeff() >= -1e-12);
    CHECK((r.y_le.array() <= 1e-12).all());
    // Weak duality holds with equality at the optimum.
    CHECK(std::abs(lp.b_le.dot(r.y_le) - r.value) <= 1e-8);
    const Eigen::VectorXd reduced = lp.c - lp.A_le.transpose() * r.y_le;
    CHECK(reduced.minCoeff() >= -1e-9);
  }
  CHECK(optimal == 300);
}

TEST_CASE("solutions are deterministic") {
  const auto lp = make({-1.0, -1.0, 0.0}, {{1.0, 1.0, 1.0}}, {1.0}, {{1.0, 0.0, 0.0}}, {0.5});
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  CHECK(a.x == b.x);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
}

}  // TEST_SUITE

}  // namespace
}  // namespace csg
