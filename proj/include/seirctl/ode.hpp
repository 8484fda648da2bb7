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

#ifndef SEIRCTL_ODE_HPP
#define SEIRCTL_ODE_HPP

#include "seirctl/problem.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace seirctl {

/// Uniform grid t_n = t0 + n * dt on [t0, T] with t_{n_max} == T.
struct TimeGrid {
  double t0 = 0.0;
  double T = 12.0;
  int n_max = 240;

  TimeGrid() = default;
  TimeGrid(double t0_, double T_, int n_max_);
  /// Grid whose step is the closest divisor of (T - t0) to `dt`.
  static TimeGrid with_step(double t0, double T, double dt);

  double dt() const { return (T - t0) / n_max; }
  /// Evaluated as t0 + (T - t0) * n / n_max so that nodes that should land on
  /// integers (trimester boundaries) do so exactly.
  double t(int n) const {
    return n == n_max ? T : t0 + (T - t0) * n / n_max;
  }
  bool operator==(const TimeGrid &) const = default;
};

struct ControlSchedule {
  TimeGrid grid;
  std::vector<ControlPoint> controls; ///< n_max + 1 entries

  static ControlSchedule constant(const TimeGrid &grid, ControlPoint u);
};

struct Trajectory {
  TimeGrid grid;
  std::vector<State> states; ///< n_max + 1 entries
};

struct AdjointTrajectory {
  TimeGrid grid;
  std::vector<Vec3> costates; ///< n_max + 1 entries
};

enum class Integrator { Euler, RK4 };

/// Non-finite value produced at time step `step`.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string &what, int step)
      : std::runtime_error(what + " at step " + std::to_string(step)),
        step_(step) {}
  int step() const { return step_; }

private:
  int step_;
};

inline State euler_step(const State &x, const Vec3 &f, double dt) {
  return {x.s + dt * f[0], x.e + dt * f[1], x.i + dt * f[2]};
}

/// Forward sweep from the problem's initial state. Controls are sampled at
/// t_n and held constant on [t_n, t_{n+1}).
Trajectory integrate_forward(const ControlProblem &problem,
                             const TimeGrid &grid,
                             const ControlSchedule &controls,
                             Integrator method = Integrator::Euler);

/// Backward costate sweep with p_{n_max} = grad g(y_{n_max}). The Euler
/// variant is the exact discrete adjoint of the Euler forward map:
///   p_n = p_{n+1} + dt (f_y(y_n, u_n, t_n)^T p_{n+1} + l_y(y_n, u_n, t_n)).
AdjointTrajectory integrate_adjoint(const ControlProblem &problem,
                                    const TimeGrid &grid,
                                    const Trajectory &traj,
                                    const ControlSchedule &controls,
                                    Integrator method = Integrator::Euler);

} // namespace seirctl

#endif // SEIRCTL_ODE_HPP
