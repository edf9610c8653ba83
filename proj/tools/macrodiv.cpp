// SPDX-License-Identifier: Apache-2.0
//
// macrodiv: closed-form SINR analysis for dual-user macrodiversity MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli_config.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  using namespace macrodiv::cli;
  ArgParser parser;
  auto parsed = parser.parse(argc, argv, std::cout, std::cerr);
  if (const int* code = std::get_if<int>(&parsed)) return *code;
  const auto& args = std::get<ParsedArgs>(parsed);

  if (args.output.empty()) return run_command(args.config, std::cout, std::cerr);
  std::ofstream out(args.output);
  if (!out) {
    std::cerr << "error: cannot write '" << args.output << "'\n";
    return kConfigError;
  }
  return run_command(args.config, out, std::cerr);
}
