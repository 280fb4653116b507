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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmasim/radiation.hpp"

namespace dmasim::csv {

/// Significant digits for matrix and scalar dumps. 17 round-trips a double.
inline constexpr int standard_digits = 9;
inline constexpr int full_digits = 17;

struct Header {
  std::string command;
  std::string scenario_hash; // hex FNV-1a 64 of the scenario file bytes
  std::uint64_t seed = 0;
  bool timestamp = true;
};

std::string fnv1a64_hex(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

/// Comment lines beginning with '#'; the timestamp, when present, is last.
void write_header(std::ostream& os, const Header& header);

std::string format_real(double value, int digits = standard_digits);

/// "row,col,re,im", one row per entry, row-major.
void write_matrix(std::ostream& os, const CMatrix& m, int digits = standard_digits);
/// Named block: a "# block NAME" comment followed by write_matrix.
void write_block(std::ostream& os, const std::string& name, const CMatrix& m,
                 int digits = standard_digits);

/// Parses the matrix dump format. Comment lines and blank lines are skipped;
/// every (row, col) in the bounding box must appear exactly once.
CMatrix read_matrix(std::istream& is);
CMatrix read_matrix_file(const std::filesystem::path& path);

/// "name,value_watts".
void write_powers(std::ostream& os, const std::vector<std::pair<std::string, double>>& rows,
                  int digits = standard_digits);

/// "theta_rad,phi_rad,gain_linear,gain_dbi".
void write_grid(std::ostream& os, const GainGrid& grid, int digits = standard_digits);

/// "angle_rad,gain_linear,gain_dbi".
void write_cut(std::ostream& os, const std::vector<std::pair<double, double>>& cut,
               int digits = standard_digits);

/// "x_m,y_m,z_m,re_Hz,im_Hz,abs_Hz,arg_Hz_rad".
void write_probe(std::ostream& os, const FieldProbe& probe, int digits = standard_digits);

/// "c,phase_rad,magnitude,re,im".
void write_lorentzian(std::ostream& os, const std::vector<LorentzianResponse>& sweep,
                      int digits = standard_digits);

double to_dbi(double linear);

} // namespace dmasim::csv
