// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dmasim::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_acceptance = 1,
  exit_input = 2,
  exit_numerical = 3,
};

struct Options {
  std::string command;
  std::filesystem::path scenario; // empty selects the bundled validation scenario
  std::filesystem::path out = ".";
  std::uint64_t seed = 1;
  int quadrature = 64;
  bool bilateral = false;
  bool farfield_los = false;
  bool no_timestamp = false;
  bool full_precision = false;
  std::string model = "los"; // los | rayleigh
  int samples = -1;          // command-specific default when negative
  double re_yss = 1.0;
  std::filesystem::path yrs_file;
  std::size_t guide = 0;
  std::string reference = "supplied"; // supplied | transmitted | radiated
  double polarization_loss = 1.0;
};

std::filesystem::path bundled_scenario();

/// Runs one command. Messages go to `out`, diagnostics to `err`.
int run(const Options& opts, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and runs.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dmasim::cli
