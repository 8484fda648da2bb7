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

#ifndef SEIRCTL_DAL_HPP
#define SEIRCTL_DAL_HPP

#include "seirctl/ode.hpp"

#include <string_view>
#include <vector>

namespace seirctl {

/// Rectangle-rule cost  dt * sum_{n < n_max} l(y_n, u_n, t_n) + g(y_{n_max}).
double quadrature_cost(const ControlProblem &problem, const Trajectory &traj,
                       const ControlSchedule &controls);

double hamiltonian(const ControlProblem &problem, const State &x,
                   const ControlPoint &u, const Vec3 &p, double t);

/// dH/du = l_u + f_u^T p.
Vec2 hamiltonian_control_gradient(const ControlProblem &problem,
                                  const State &x, const ControlPoint &u,
                                  const Vec3 &p, double t);

/// Component-wise clamp onto the control box at time t.
ControlPoint project(const ControlProblem &problem, const Vec2 &raw, double t);

/// Gradient of the discrete cost with respect to u_n, divided by dt:
/// g_n = dH/du(y_n, u_n, p_{n+1}, t_n). The terminal entry is zero.
std::vector<Vec2> schedule_gradient(const ControlProblem &problem,
                                    const Trajectory &traj,
                                    const AdjointTrajectory &adj,
                                    const ControlSchedule &controls);

struct DalConfig {
  double sigma0 = 0.5;
  double eps = 1e-8;
  int max_iters = 50000;
  int max_halvings = 40;
  Integrator integrator = Integrator::Euler;

  void validate() const;
};

enum class DalTermination { Tolerance, IterationCap, LineSearchFailure };
std::string_view to_string(DalTermination t);

struct DalResult {
  ControlSchedule controls;
  Trajectory trajectory;
  AdjointTrajectory adjoint;
  double cost = 0.0;
  int iterations = 0;
  std::vector<double> cost_history; ///< initial cost, then one per accepted step
  bool converged = false;
  DalTermination termination = DalTermination::IterationCap;
  /// max_n |u_n - P(u_n - g_n)|, zero exactly at a discrete KKT point.
  double gradient_residual = 0.0;
};

/// Projected gradient descent on the control schedule, driven by forward
/// state and backward costate sweeps. The step is halved until the cost
/// strictly decreases and reset to sigma0 at every outer iteration.
DalResult dal_solve(const ControlProblem &problem, const TimeGrid &grid,
                    const ControlSchedule &initial, const DalConfig &cfg = {});

} // namespace seirctl

#endif // SEIRCTL_DAL_HPP
