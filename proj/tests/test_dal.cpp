/*
 Copyright 2026 The seirctl Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "seirctl/dal.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace seirctl {
namespace {

const TimeGrid kGrid(0.0, 12.0, 240);

TEST(Hamiltonian, ZeroCostateIsRunningCost) {
  const Scenario scn = preset("test2");
  const SeirProblem problem(scn);
  const State x{0.6, 0.1, 0.2};
  const ControlPoint u{0.4, 0.3};
  EXPECT_EQ(hamiltonian(problem, x, u, Vec3::Zero(), 6.0),
            running_cost(scn, x, u, 6.0));
}

TEST(Hamiltonian, DiseaseFreeState) {
  const SeirProblem problem(preset("test1"));
  EXPECT_NEAR(hamiltonian(problem, {1.0, 0.0, 0.0}, {0.0, 0.0}, {1, 1, 1}, 0.0),
              1.75, 1e-15);
}

TEST(Hamiltonian, MatchesIndependentEvaluation) {
  std::mt19937_64 rng(21);
  for (Variant v : testing::all_variants()) {
    const Scenario scn = testing::scenario_for(v);
    const SeirProblem problem(scn);
    for (int k = 0; k < 50; ++k) {
      const State x = testing::random_state(rng);
      const ControlPoint u = testing::random_control(rng);
      const Vec3 p{testing::uniform(rng, -3, 3), testing::uniform(rng, -3, 3),
                   testing::uniform(rng, -3, 3)};
      const double t = testing::uniform(rng, 0, 12);
      const Vec3 f = dynamics(scn, x, u, t);
      const double expect = running_cost(scn, x, u, t) + p[0] * f[0] +
                            p[1] * f[1] + p[2] * f[2];
      EXPECT_LT(testing::rel_err(hamiltonian(problem, x, u, p, t), expect),
                1e-12);
    }
  }
}

TEST(Hamiltonian, ControlGradientExamples) {
  for (const char *name : {"test1", "test2"}) {
    const SeirProblem problem(preset(name));
    EXPECT_EQ(hamiltonian_control_gradient(problem, {0.7, 0.1, 0.1}, {0, 0},
                                           Vec3::Zero(), 6.0),
              Vec2::Zero())
        << name;
  }
  const SeirProblem border(preset("test3"));
  EXPECT_EQ(hamiltonian_control_gradient(border, {0.7, 0.1, 0.1}, {0.0, 1.0},
                                         Vec3::Zero(), 1.0)[1],
            0.0);
}

TEST(Projection, Examples) {
  const SeirProblem problem(preset("test1"));
  EXPECT_EQ(project(problem, {-0.3, 0.5}, 6.0), (ControlPoint{0.0, 0.5}));
  EXPECT_EQ(project(problem, {1.2, 2.0}, 6.0), (ControlPoint{0.9, 1.0}));
  EXPECT_EQ(project(problem, {0.5, 0.5}, 3.0), (ControlPoint{0.5, 0.0}));
  const SeirProblem border(preset("test3"));
  EXPECT_EQ(project(border, {0.5, 0.5}, 3.0), (ControlPoint{0.5, 0.5}));
}

TEST(Projection, Idempotent) {
  std::mt19937_64 rng(22);
  const SeirProblem problem(preset("test5"));
  for (int k = 0; k < 200; ++k) {
    const double t = testing::uniform(rng, 0, 12);
    const Vec2 raw{testing::uniform(rng, -1, 2), testing::uniform(rng, -1, 2)};
    const ControlPoint once = project(problem, raw, t);
    EXPECT_EQ(project(problem, once.vec(), t), once);
  }
}

ControlSchedule random_interior_schedule(const Scenario &scn,
                                         std::mt19937_64 &rng) {
  ControlSchedule u{kGrid, {}};
  for (int n = 0; n <= kGrid.n_max; ++n) {
    const double hi = u2_max_at(scn, kGrid.t(n));
    u.controls.push_back({testing::uniform(rng, 0.1, 0.8),
                          hi > 0 ? testing::uniform(rng, 0.1, 0.9) * hi : 0.0});
  }
  return u;
}

TEST(Gradient, DirectionalDerivativeMatchesDiscreteCost) {
  std::mt19937_64 rng(23);
  for (Variant v : testing::all_variants()) {
    const Scenario scn = testing::scenario_for(v);
    const SeirProblem problem(scn);
    for (int trial = 0; trial < 3; ++trial) {
      const ControlSchedule u = random_interior_schedule(scn, rng);
      const Trajectory traj = integrate_forward(problem, kGrid, u);
      const AdjointTrajectory adj = integrate_adjoint(problem, kGrid, traj, u);
      const std::vector<Vec2> g = schedule_gradient(problem, traj, adj, u);
      EXPECT_EQ(g.back(), Vec2::Zero());

      std::vector<Vec2> d(kGrid.n_max + 1, Vec2::Zero());
      double predicted = 0.0;
      for (int n = 0; n < kGrid.n_max; ++n) {
        const bool has_u2 = u2_max_at(scn, kGrid.t(n)) > 0;
        d[n] = {testing::uniform(rng, -1, 1),
                has_u2 ? testing::uniform(rng, -1, 1) : 0.0};
        predicted += kGrid.dt() * g[n].dot(d[n]);
      }
      auto cost_along = [&](double h) {
        ControlSchedule w = u;
        for (int n = 0; n <= kGrid.n_max; ++n)
          w.controls[n] = ControlPoint::from(u.controls[n].vec() + h * d[n]);
        return quadrature_cost(problem, integrate_forward(problem, kGrid, w), w);
      };
      const double h = 1e-5;
      const double measured = (cost_along(h) - cost_along(-h)) / (2 * h);
      EXPECT_LT(std::abs(measured - predicted),
                1e-4 * std::max(1e-3, std::abs(predicted)))
          << to_string(v) << " trial " << trial;
    }
  }
}

TEST(DalConfig, Validation) {
  DalConfig c;
  EXPECT_NO_THROW(c.validate());
  c.sigma0 = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.eps = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_halvings = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

void expect_feasible(const ControlProblem &problem, const ControlSchedule &u) {
  for (int n = 0; n <= u.grid.n_max; ++n) {
    const double t = u.grid.t(n);
    const ControlPoint lo = problem.lower_bound(t), hi = problem.upper_bound(t);
    const ControlPoint &c = u.controls[n];
    if (n == u.grid.n_max) {
      EXPECT_EQ(c, u.controls[n - 1]);
      continue;
    }
    EXPECT_GE(c.u1, lo.u1);
    EXPECT_LE(c.u1, hi.u1);
    EXPECT_GE(c.u2, lo.u2);
    EXPECT_LE(c.u2, hi.u2);
  }
}

void expect_strictly_decreasing(const std::vector<double> &h) {
  for (std::size_t k = 1; k < h.size(); ++k)
    EXPECT_LT(h[k], h[k - 1]) << "iteration " << k;
}

class ColdStart : public ::testing::TestWithParam<Variant> {};

TEST_P(ColdStart, MonotoneFeasibleConsistent) {
  const Scenario scn = testing::scenario_for(GetParam());
  const SeirProblem problem(scn);
  const DalResult r = dal_solve(
      problem, kGrid, ControlSchedule::constant(kGrid, {0.0, 0.0}));
  expect_strictly_decreasing(r.cost_history);
  expect_feasible(problem, r.controls);
  EXPECT_EQ(r.cost, quadrature_cost(problem, r.trajectory, r.controls));
  EXPECT_EQ(r.cost, r.cost_history.back());
  EXPECT_EQ(static_cast<int>(r.cost_history.size()), r.iterations + 1);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.termination, DalTermination::Tolerance);
  EXPECT_LT(r.cost, r.cost_history.front());
}

INSTANTIATE_TEST_SUITE_P(AllVariants, ColdStart,
                         ::testing::ValuesIn(testing::all_variants()),
                         [](const auto &info) {
                           std::string name(to_string(info.param));
                           std::erase(name, '_');
                           return name;
                         });

TEST(Dal, InfeasibleStartIsProjected) {
  const SeirProblem problem(preset("test1"));
  const TimeGrid grid(0.0, 12.0, 240);
  DalConfig cfg;
  cfg.max_iters = 1;
  const DalResult r =
      dal_solve(problem, grid, ControlSchedule::constant(grid, {2.0, 2.0}), cfg);
  EXPECT_EQ(r.controls.controls[0].u2, 0.0);
  expect_feasible(problem, r.controls);
}

TEST(Dal, IterationCapIsFlagged) {
  const SeirProblem problem(preset("test1"));
  DalConfig cfg;
  cfg.max_iters = 2;
  const DalResult r = dal_solve(
      problem, kGrid, ControlSchedule::constant(kGrid, {0.0, 0.0}), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.termination, DalTermination::IterationCap);
  EXPECT_EQ(r.iterations, 2);
}

TEST(Dal, RefedSolutionStopsQuickly) {
  const SeirProblem problem(preset("test1"));
  // Converged well past the default tolerance so that the re-fed schedule
  // is a fixed point of the discrete problem.
  DalConfig tight;
  tight.eps = 1e-14;
  const DalResult first = dal_solve(
      problem, kGrid, ControlSchedule::constant(kGrid, {0.0, 0.0}), tight);
  ASSERT_TRUE(first.converged);
  const DalResult again = dal_solve(problem, kGrid, first.controls);
  EXPECT_TRUE(again.converged);
  EXPECT_LE(again.iterations, 2);
  EXPECT_LT(first.cost - again.cost, DalConfig{}.eps * 2);
}

TEST(Dal, Deterministic) {
  const SeirProblem problem(preset("test3"));
  const auto start = ControlSchedule::constant(kGrid, {0.0, 1.0});
  const DalResult a = dal_solve(problem, kGrid, start);
  const DalResult b = dal_solve(problem, kGrid, start);
  EXPECT_EQ(a.cost_history, b.cost_history);
  EXPECT_EQ(a.controls.controls, b.controls.controls);
}

TEST(Dal, LqrMatchesRiccati) {
  const testing::LqrProblem lqr;
  const TimeGrid grid(0.0, 1.0, 1000);
  const DalResult r =
      dal_solve(lqr, grid, ControlSchedule::constant(grid, {0.0, 0.0}));
  ASSERT_TRUE(r.converged);
  double feedback_err = 0.0, open_loop_err = 0.0;
  for (int n = 0; n < grid.n_max; ++n) {
    const double t = grid.t(n);
    const double u = r.controls.controls[n].u1;
    feedback_err = std::max(
        feedback_err, std::abs(u + lqr.riccati(t) * r.trajectory.states[n].s));
    open_loop_err = std::max(
        open_loop_err, std::abs(u + std::sinh(1.0 - t) / std::cosh(1.0)));
  }
  EXPECT_LE(feedback_err, 1e-3);
  EXPECT_LE(open_loop_err, 1e-3);
  expect_strictly_decreasing(r.cost_history);
}

TEST(Dal, Termination) {
  EXPECT_EQ(to_string(DalTermination::Tolerance), "tolerance");
  EXPECT_EQ(to_string(DalTermination::IterationCap), "iteration-cap");
  EXPECT_EQ(to_string(DalTermination::LineSearchFailure), "line-search-failure");
}

} // namespace
} // namespace seirctl
