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

#ifndef SEIRCTL_CLI_HPP
#define SEIRCTL_CLI_HPP

#include "seirctl/pipeline.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace seirctl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolver = 1;
inline constexpr int kExitConfig = 2;

enum class InitSource { Constants, File, SL };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string scenario = "test1"; ///< preset name or YAML path
  Method method = Method::SLDAL;
  GridSpec grid;
  double dt = 0.05;
  DalConfig dal;
  InitSource init = InitSource::Constants;
  ControlPoint init_constants{0.0, 0.0};
  std::string init_file;
  bool init_given = false;
  std::string output_dir = ".";
  OutputFormat format = OutputFormat::Csv;
  bool check_optimality = false;
  bool summary = false;
  bool dump_value = false;
  int workers = 1;
};

/// Fills `cfg` from argv. Returns an exit code when the process should stop
/// (help requested or a usage error), otherwise nullopt.
std::optional<int> parse_command_line(int argc, const char *const *argv,
                                      RunConfig &cfg, std::ostream &out,
                                      std::ostream &err);

/// Preset name or scenario file.
Scenario load_scenario(const std::string &source);

/// Runs the configured pipeline and writes its outputs. Returns 0 on
/// success, 1 on a solver failure, 2 on a configuration error.
int run(const RunConfig &cfg, std::ostream &out, std::ostream &err);

} // namespace seirctl

#endif // SEIRCTL_CLI_HPP
