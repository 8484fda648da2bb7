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

#include "seirctl/ode.hpp"

#include <cmath>

namespace seirctl {

namespace {

bool finite(const State &x) {
  return std::isfinite(x.s) && std::isfinite(x.e) && std::isfinite(x.i);
}

void check_lengths(const TimeGrid &grid, const ControlSchedule &controls) {
  if (!(controls.grid == grid) ||
      controls.controls.size() != static_cast<std::size_t>(grid.n_max) + 1)
    throw std::invalid_argument("control schedule does not match time grid");
}

// Time-dependent coefficients are frozen at the left endpoint of each step,
// which matches Euler and keeps the piecewise-constant parameters exact.
State rk4_step(const ControlProblem &problem, const State &x,
               const ControlPoint &u, double t, double h) {
  const Vec3 y = x.vec();
  const Vec3 k1 = problem.dynamics(x, u, t);
  const Vec3 k2 = problem.dynamics(State::from(y + 0.5 * h * k1), u, t);
  const Vec3 k3 = problem.dynamics(State::from(y + 0.5 * h * k2), u, t);
  const Vec3 k4 = problem.dynamics(State::from(y + h * k3), u, t);
  return State::from(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

Vec3 costate_rate(const ControlProblem &problem, const State &x,
                  const ControlPoint &u, const Vec3 &p, double t) {
  return problem.dynamics_state_jacobian(x, u, t).transpose() * p +
         problem.cost_state_gradient(x, u, t);
}

} // namespace

TimeGrid::TimeGrid(double t0_, double T_, int n_max_)
    : t0(t0_), T(T_), n_max(n_max_) {
  if (!(T > t0) || n_max < 1)
    throw std::invalid_argument("time grid needs T > t0 and n_max >= 1");
}

TimeGrid TimeGrid::with_step(double t0, double T, double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("time step must be positive");
  const int n = std::max(1, static_cast<int>(std::lround((T - t0) / dt)));
  return TimeGrid(t0, T, n);
}

ControlSchedule ControlSchedule::constant(const TimeGrid &grid,
                                          ControlPoint u) {
  return {grid, std::vector<ControlPoint>(grid.n_max + 1, u)};
}

Trajectory integrate_forward(const ControlProblem &problem,
                             const TimeGrid &grid,
                             const ControlSchedule &controls,
                             Integrator method) {
  check_lengths(grid, controls);
  Trajectory traj{grid, {}};
  traj.states.resize(grid.n_max + 1);
  traj.states[0] = problem.initial_state();
  const double dt = grid.dt();
  for (int n = 0; n < grid.n_max; ++n) {
    const State &x = traj.states[n];
    const ControlPoint &u = controls.controls[n];
    const double t = grid.t(n);
    State next = method == Integrator::Euler
                     ? euler_step(x, problem.dynamics(x, u, t), dt)
                     : rk4_step(problem, x, u, t, dt);
    if (!finite(next))
      throw IntegrationError("non-finite state", n + 1);
    traj.states[n + 1] = next;
  }
  return traj;
}

AdjointTrajectory integrate_adjoint(const ControlProblem &problem,
                                    const TimeGrid &grid,
                                    const Trajectory &traj,
                                    const ControlSchedule &controls,
                                    Integrator method) {
  check_lengths(grid, controls);
  if (!(traj.grid == grid) ||
      traj.states.size() != static_cast<std::size_t>(grid.n_max) + 1)
    throw std::invalid_argument("trajectory does not match time grid");

  AdjointTrajectory adj{grid, {}};
  adj.costates.resize(grid.n_max + 1);
  adj.costates[grid.n_max] = problem.final_cost_gradient(traj.states.back());
  const double dt = grid.dt();
  for (int n = grid.n_max - 1; n >= 0; --n) {
    const State &x = traj.states[n];
    const ControlPoint &u = controls.controls[n];
    const double t = grid.t(n);
    const Vec3 &p = adj.costates[n + 1];
    Vec3 prev;
    if (method == Integrator::Euler) {
      prev = p + dt * costate_rate(problem, x, u, p, t);
    } else {
      // Reverse-time RK4 from t_{n+1} to t_n; the midpoint state comes from
      // a half step of the forward map.
      const State &x_end = traj.states[n + 1];
      const State x_mid = rk4_step(problem, x, u, t, 0.5 * dt);
      const Vec3 k1 = costate_rate(problem, x_end, u, p, t);
      const Vec3 k2 = costate_rate(problem, x_mid, u, p + 0.5 * dt * k1, t);
      const Vec3 k3 = costate_rate(problem, x_mid, u, p + 0.5 * dt * k2, t);
      const Vec3 k4 = costate_rate(problem, x, u, p + dt * k3, t);
      prev = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!prev.allFinite())
      throw IntegrationError("non-finite costate", n);
    adj.costates[n] = prev;
  }
  return adj;
}

} // namespace seirctl
