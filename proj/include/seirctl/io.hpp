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

#ifndef SEIRCTL_IO_HPP
#define SEIRCTL_IO_HPP

#include "seirctl/pipeline.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace seirctl {

/// Reads a YAML scenario. Fields not present take the built-in defaults,
/// except the variant-specific ones (delta for border_control, mu for the
/// immunity variants), which are required. Errors carry "path:line:".
Scenario parse_scenario(const std::string &text,
                        const std::string &origin = "<string>");
Scenario parse_scenario_file(const std::string &path);

/// YAML rendering that parse_scenario reads back to an identical Scenario.
std::string format_scenario(const Scenario &scn);

/// Columns t,s,e,i,r,u1,u2 at 17 significant digits.
void write_trajectory_csv(std::ostream &out, const Scenario &scn,
                          const Trajectory &traj,
                          const ControlSchedule &controls);

struct TrajectoryTable {
  TimeGrid grid;
  Trajectory trajectory;
  ControlSchedule controls;
};

/// Inverse of write_trajectory_csv. The time grid is rebuilt from the
/// first and last t entries and the row count.
TrajectoryTable read_trajectory_csv(std::istream &in,
                                    const std::string &origin = "<stream>");

/// Control schedule from any CSV with u1 and u2 columns and one row per
/// time node of `grid`.
ControlSchedule read_control_csv(std::istream &in, const TimeGrid &grid,
                                 const std::string &origin = "<stream>");

} // namespace seirctl

#endif // SEIRCTL_IO_HPP
