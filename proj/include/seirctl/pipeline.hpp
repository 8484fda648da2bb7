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

#ifndef SEIRCTL_PIPELINE_HPP
#define SEIRCTL_PIPELINE_HPP

#include "seirctl/dal.hpp"
#include "seirctl/hjb.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace seirctl {

enum class Method { Uncontrolled, SL, DAL, SLDAL };
std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct Diagnostics {
  int iterations = 0;
  bool converged = false;
  std::optional<DalTermination> termination;
  double gradient_residual = 0.0;
  std::vector<double> cost_history;
  std::optional<GridSpec> grid_spec;
  std::optional<double> sl_cost; ///< set by the combined method
};

struct Solution {
  Method method = Method::Uncontrolled;
  ControlSchedule controls;
  Trajectory trajectory;
  double cost = 0.0;
  Diagnostics diagnostics;
};

/// dt * sum_{n < n_max} l(y_n, u_n, t_n) + g(y_{n_max}).
double evaluate_cost(const Scenario &scn, const Trajectory &traj,
                     const ControlSchedule &controls);

/// Recovered fraction per time node: 1 - s - e - i when the population is
/// conserved, otherwise integrated alongside the state with the same Euler
/// steps, starting from 1 - s0 - e0 - i0.
std::vector<double> recovered_fraction(const Scenario &scn,
                                       const Trajectory &traj,
                                       const ControlSchedule &controls);

Solution solve_uncontrolled(const Scenario &scn, const TimeGrid &grid);

/// Semi-Lagrangian solve followed by feedback reconstruction. When `keep`
/// is non-null it receives the value function and policy.
Solution solve_sl(const Scenario &scn, const TimeGrid &grid,
                  const GridSpec &spec, int workers = default_workers(),
                  HjbSolution *keep = nullptr);

Solution solve_dal(const Scenario &scn, const TimeGrid &grid,
                   const ControlSchedule &initial, const DalConfig &cfg = {});

/// DAL warm-started from an SL solution's open-loop schedule.
Solution refine_with_dal(const Scenario &scn, const Solution &sl,
                         const DalConfig &cfg = {});

Solution solve_combined(const Scenario &scn, const TimeGrid &grid,
                        const GridSpec &spec, const DalConfig &cfg = {},
                        int workers = default_workers(),
                        HjbSolution *keep = nullptr);

/// Component-wise max-over-time |a - b| for (s, e, i).
Vec3 trajectory_deviation(const Trajectory &a, const Trajectory &b);

} // namespace seirctl

#endif // SEIRCTL_PIPELINE_HPP
