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

#include "seirctl/pipeline.hpp"

#include <cmath>

namespace seirctl {

std::string_view to_string(Method m) {
  switch (m) {
  case Method::Uncontrolled:
    return "uncontrolled";
  case Method::SL:
    return "sl";
  case Method::DAL:
    return "dal";
  case Method::SLDAL:
    return "sl-dal";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::Uncontrolled, Method::SL, Method::DAL, Method::SLDAL})
    if (to_string(m) == name)
      return m;
  return std::nullopt;
}

double evaluate_cost(const Scenario &scn, const Trajectory &traj,
                     const ControlSchedule &controls) {
  return quadrature_cost(SeirProblem(scn), traj, controls);
}

std::vector<double> recovered_fraction(const Scenario &scn,
                                       const Trajectory &traj,
                                       const ControlSchedule &controls) {
  const auto size = traj.states.size();
  std::vector<double> r(size);
  auto rest = [](const State &x) { return 1.0 - x.s - x.e - x.i; };
  if (is_conservative(scn.variant)) {
    for (std::size_t n = 0; n < size; ++n)
      r[n] = rest(traj.states[n]);
    return r;
  }
  if (controls.controls.size() != size)
    throw std::invalid_argument("trajectory and controls differ in length");
  const double dt = traj.grid.dt();
  r[0] = rest(traj.states[0]);
  for (std::size_t n = 0; n + 1 < size; ++n) {
    const Coefficients c = coefficients_at(scn, traj.grid.t(static_cast<int>(n)));
    r[n + 1] = r[n] + dt * (c.gamma * traj.states[n].i +
                            controls.controls[n].u2 * c.inflow[3]);
  }
  return r;
}

Solution solve_uncontrolled(const Scenario &scn, const TimeGrid &grid) {
  validate(scn);
  const SeirProblem problem(scn);
  Solution sol;
  sol.method = Method::Uncontrolled;
  sol.controls = ControlSchedule::constant(grid, no_intervention(scn));
  sol.trajectory = integrate_forward(problem, grid, sol.controls);
  sol.cost = evaluate_cost(scn, sol.trajectory, sol.controls);
  return sol;
}

Solution solve_sl(const Scenario &scn, const TimeGrid &grid,
                  const GridSpec &spec, int workers, HjbSolution *keep) {
  HjbSolution hjb = solve_hjb(scn, spec, grid, workers);
  SlTrajectory rec = reconstruct_trajectory(scn, hjb.values);
  Solution sol;
  sol.method = Method::SL;
  sol.controls = std::move(rec.controls);
  sol.trajectory = std::move(rec.trajectory);
  sol.cost = evaluate_cost(scn, sol.trajectory, sol.controls);
  sol.diagnostics.grid_spec = spec;
  if (keep)
    *keep = std::move(hjb);
  return sol;
}

Solution solve_dal(const Scenario &scn, const TimeGrid &grid,
                   const ControlSchedule &initial, const DalConfig &cfg) {
  validate(scn);
  DalResult res = dal_solve(SeirProblem(scn), grid, initial, cfg);
  Solution sol;
  sol.method = Method::DAL;
  sol.controls = std::move(res.controls);
  sol.trajectory = std::move(res.trajectory);
  sol.cost = evaluate_cost(scn, sol.trajectory, sol.controls);
  sol.diagnostics.iterations = res.iterations;
  sol.diagnostics.converged = res.converged;
  sol.diagnostics.termination = res.termination;
  sol.diagnostics.gradient_residual = res.gradient_residual;
  sol.diagnostics.cost_history = std::move(res.cost_history);
  return sol;
}

Solution refine_with_dal(const Scenario &scn, const Solution &sl,
                         const DalConfig &cfg) {
  Solution sol = solve_dal(scn, sl.controls.grid, sl.controls, cfg);
  sol.method = Method::SLDAL;
  sol.diagnostics.grid_spec = sl.diagnostics.grid_spec;
  sol.diagnostics.sl_cost = sl.cost;
  return sol;
}

Solution solve_combined(const Scenario &scn, const TimeGrid &grid,
                        const GridSpec &spec, const DalConfig &cfg,
                        int workers, HjbSolution *keep) {
  return refine_with_dal(scn, solve_sl(scn, grid, spec, workers, keep), cfg);
}

Vec3 trajectory_deviation(const Trajectory &a, const Trajectory &b) {
  if (!(a.grid == b.grid) || a.states.size() != b.states.size())
    throw std::invalid_argument("trajectories are on different grids");
  Vec3 d = Vec3::Zero();
  for (std::size_t n = 0; n < a.states.size(); ++n)
    d = d.cwiseMax((a.states[n].vec() - b.states[n].vec()).cwiseAbs());
  return d;
}

} // namespace seirctl
