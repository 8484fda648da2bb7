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

#include "seirctl/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
  seirctl::RunConfig cfg;
  if (auto code = seirctl::parse_command_line(argc, argv, cfg, std::cout,
                                              std::cerr))
    return *code;
  return seirctl::run(cfg, std::cout, std::cerr);
}
