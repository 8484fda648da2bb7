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

#include <algorithm>
#include <cmath>

namespace seirctl {

double quadrature_cost(const ControlProblem &problem, const Trajectory &traj,
                       const ControlSchedule &controls) {
  const TimeGrid &grid = traj.grid;
  if (!(controls.grid == grid) ||
      traj.states.size() != static_cast<std::size_t>(grid.n_max) + 1 ||
      controls.controls.size() != traj.states.size())
    throw std::invalid_argument("trajectory and controls are on different grids");
  const double dt = grid.dt();
  double running = 0.0;
  for (int n = 0; n < grid.n_max; ++n)
    running += problem.running_cost(traj.states[n], controls.controls[n],
                                    grid.t(n));
  return dt * running + problem.final_cost(traj.states.back());
}

double hamiltonian(const ControlProblem &problem, const State &x,
                   const ControlPoint &u, const Vec3 &p, double t) {
  return problem.running_cost(x, u, t) + p.dot(problem.dynamics(x, u, t));
}

Vec2 hamiltonian_control_gradient(const ControlProblem &problem,
                                  const State &x, const ControlPoint &u,
                                  const Vec3 &p, double t) {
  return problem.cost_control_gradient(x, u, t) +
         problem.dynamics_control_jacobian(x, u, t).transpose() * p;
}

ControlPoint project(const ControlProblem &problem, const Vec2 &raw,
                     double t) {
  const ControlPoint lo = problem.lower_bound(t);
  const ControlPoint hi = problem.upper_bound(t);
  return {std::max(lo.u1, std::min(raw[0], hi.u1)),
          std::max(lo.u2, std::min(raw[1], hi.u2))};
}

std::vector<Vec2> schedule_gradient(const ControlProblem &problem,
                                    const Trajectory &traj,
                                    const AdjointTrajectory &adj,
                                    const ControlSchedule &controls) {
  const TimeGrid &grid = traj.grid;
  std::vector<Vec2> g(grid.n_max + 1, Vec2::Zero());
  for (int n = 0; n < grid.n_max; ++n)
    g[n] = hamiltonian_control_gradient(problem, traj.states[n],
                                        controls.controls[n],
                                        adj.costates[n + 1], grid.t(n));
  return g;
}

void DalConfig::validate() const {
  if (!(sigma0 > 0.0 && sigma0 < 1.0))
    throw std::invalid_argument("sigma0 must lie in (0, 1)");
  if (!(eps > 0.0))
    throw std::invalid_argument("eps must be positive");
  if (max_iters < 1 || max_halvings < 1)
    throw std::invalid_argument("iteration caps must be at least 1");
}

std::string_view to_string(DalTermination t) {
  switch (t) {
  case DalTermination::Tolerance:
    return "tolerance";
  case DalTermination::IterationCap:
    return "iteration-cap";
  case DalTermination::LineSearchFailure:
    return "line-search-failure";
  }
  return "unknown";
}

namespace {

ControlSchedule projected_step(const ControlProblem &problem,
                               const ControlSchedule &u,
                               const std::vector<Vec2> &g, double sigma) {
  const TimeGrid &grid = u.grid;
  ControlSchedule next = u;
  for (int n = 0; n < grid.n_max; ++n)
    next.controls[n] =
        project(problem, u.controls[n].vec() - sigma * g[n], grid.t(n));
  next.controls[grid.n_max] = next.controls[grid.n_max - 1];
  return next;
}

double residual(const ControlSchedule &u, const ControlSchedule &unit_step) {
  double r = 0.0;
  for (std::size_t n = 0; n + 1 < u.controls.size(); ++n) {
    r = std::max(r, std::abs(u.controls[n].u1 - unit_step.controls[n].u1));
    r = std::max(r, std::abs(u.controls[n].u2 - unit_step.controls[n].u2));
  }
  return r;
}

} // namespace

DalResult dal_solve(const ControlProblem &problem, const TimeGrid &grid,
                    const ControlSchedule &initial, const DalConfig &cfg) {
  cfg.validate();
  if (!(initial.grid == grid) ||
      initial.controls.size() != static_cast<std::size_t>(grid.n_max) + 1)
    throw std::invalid_argument("initial schedule does not match time grid");

  DalResult res;
  res.controls = projected_step(problem, initial,
                                std::vector<Vec2>(grid.n_max + 1, Vec2::Zero()),
                                0.0);
  res.trajectory =
      integrate_forward(problem, grid, res.controls, cfg.integrator);
  res.cost = quadrature_cost(problem, res.trajectory, res.controls);
  res.cost_history.push_back(res.cost);

  std::vector<Vec2> g;
  auto refresh = [&] {
    res.adjoint = integrate_adjoint(problem, grid, res.trajectory,
                                    res.controls, cfg.integrator);
    g = schedule_gradient(problem, res.trajectory, res.adjoint, res.controls);
  };
  refresh();

  res.termination = DalTermination::IterationCap;
  for (int k = 0; k < cfg.max_iters; ++k) {
    double sigma = cfg.sigma0;
    bool accepted = false;
    bool stationary = false;
    ControlSchedule candidate;
    Trajectory candidate_traj;
    double candidate_cost = 0.0;
    for (int h = 0; h <= cfg.max_halvings; ++h, sigma *= 0.5) {
      candidate = projected_step(problem, res.controls, g, sigma);
      if (h == 0 && residual(res.controls, candidate) == 0.0) {
        stationary = true;
        break;
      }
      candidate_traj =
          integrate_forward(problem, grid, candidate, cfg.integrator);
      candidate_cost = quadrature_cost(problem, candidate_traj, candidate);
      if (candidate_cost < res.cost) {
        accepted = true;
        break;
      }
    }
    if (stationary) {
      res.converged = true;
      res.termination = DalTermination::Tolerance;
      break;
    }
    if (!accepted) {
      res.termination = DalTermination::LineSearchFailure;
      break;
    }
    const double decrease = res.cost - candidate_cost;
    res.controls = std::move(candidate);
    res.trajectory = std::move(candidate_traj);
    res.cost = candidate_cost;
    res.cost_history.push_back(res.cost);
    res.iterations = k + 1;
    refresh();
    if (decrease < cfg.eps) {
      res.converged = true;
      res.termination = DalTermination::Tolerance;
      break;
    }
  }
  res.gradient_residual =
      residual(res.controls, projected_step(problem, res.controls, g, 1.0));
  return res;
}

} // namespace seirctl
