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

#include "dmasim/csv.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>

#include "dmasim/error.hpp"

#ifndef DMASIM_VERSION
#define DMASIM_VERSION "unknown"
#endif

namespace dmasim::csv {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

long parse_index(const std::string& s, int line_no) {
  std::size_t used = 0;
  long v = -1;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 0) {
    throw InvalidInput("matrix CSV line " + std::to_string(line_no) + ": bad index '" + s + "'");
  }
  return v;
}

double parse_value(const std::string& s, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v)) {
    throw InvalidInput("matrix CSV line " + std::to_string(line_no) + ": bad value '" + s + "'");
  }
  return v;
}

} // namespace

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64_hex(bytes);
}

void write_header(std::ostream& os, const Header& header) {
  os << "# dmasim " << DMASIM_VERSION << '\n';
  if (!header.command.empty()) os << "# command " << header.command << '\n';
  os << "# scenario_hash " << (header.scenario_hash.empty() ? "none" : header.scenario_hash)
     << '\n';
  os << "# seed " << header.seed << '\n';
  if (header.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    os << "# timestamp " << buf << '\n';
  }
}

std::string format_real(double value, int digits) {
  if (digits < 1 || digits > 17) throw InvalidInput("digits must lie in [1, 17]");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, value);
  return buf;
}

void write_matrix(std::ostream& os, const CMatrix& m, int digits) {
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << r << ',' << c << ',' << format_real(m(r, c).real(), digits) << ','
         << format_real(m(r, c).imag(), digits) << '\n';
    }
  }
}

void write_block(std::ostream& os, const std::string& name, const CMatrix& m, int digits) {
  os << "# block " << name << ' ' << m.rows() << 'x' << m.cols() << '\n';
  write_matrix(os, m, digits);
}

CMatrix read_matrix(std::istream& is) {
  std::map<std::pair<long, long>, cplx> entries;
  std::string line;
  bool seen_header = false;
  int line_no = 0;
  long rows = 0, cols = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!seen_header) {
      if (t != "row,col,re,im") {
        throw InvalidInput("matrix CSV: expected header 'row,col,re,im', got '" + t + "'");
      }
      seen_header = true;
      continue;
    }
    const auto cells = split(t);
    if (cells.size() != 4) {
      throw InvalidInput("matrix CSV line " + std::to_string(line_no) + ": expected 4 fields");
    }
    const long r = parse_index(cells[0], line_no);
    const long c = parse_index(cells[1], line_no);
    const cplx v(parse_value(cells[2], line_no), parse_value(cells[3], line_no));
    if (!entries.emplace(std::make_pair(r, c), v).second) {
      throw InvalidInput("matrix CSV line " + std::to_string(line_no) + ": duplicate entry");
    }
    rows = std::max(rows, r + 1);
    cols = std::max(cols, c + 1);
  }
  if (!seen_header) throw InvalidInput("matrix CSV: missing header");
  if (static_cast<long>(entries.size()) != rows * cols) {
    throw InvalidInput("matrix CSV: " + std::to_string(entries.size()) + " entries do not fill a " +
                       std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
  CMatrix m(rows, cols);
  for (const auto& [rc, v] : entries) m(rc.first, rc.second) = v;
  return m;
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_matrix(in);
}

void write_powers(std::ostream& os, const std::vector<std::pair<std::string, double>>& rows,
                  int digits) {
  os << "name,value_watts\n";
  for (const auto& [name, value] : rows) os << name << ',' << format_real(value, digits) << '\n';
}

double to_dbi(double linear) {
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

namespace {
std::string dbi_cell(double linear, int digits) {
  return linear > 0.0 ? format_real(to_dbi(linear), digits) : std::string("-inf");
}
} // namespace

void write_grid(std::ostream& os, const GainGrid& grid, int digits) {
  os << "theta_rad,phi_rad,gain_linear,gain_dbi\n";
  for (Eigen::Index i = 0; i < grid.theta.size(); ++i) {
    for (Eigen::Index j = 0; j < grid.phi.size(); ++j) {
      const double g = grid.gain(i, j);
      os << format_real(grid.theta[i], digits) << ',' << format_real(grid.phi[j], digits) << ','
         << format_real(g, digits) << ',' << dbi_cell(g, digits) << '\n';
    }
  }
}

void write_cut(std::ostream& os, const std::vector<std::pair<double, double>>& cut, int digits) {
  os << "angle_rad,gain_linear,gain_dbi\n";
  for (const auto& [a, g] : cut) {
    os << format_real(a, digits) << ',' << format_real(g, digits) << ',' << dbi_cell(g, digits)
       << '\n';
  }
}

void write_probe(std::ostream& os, const FieldProbe& probe, int digits) {
  os << "x_m,y_m,z_m,re_Hz,im_Hz,abs_Hz,arg_Hz_rad\n";
  for (std::size_t i = 0; i < probe.positions.size(); ++i) {
    const Vec3& p = probe.positions[i];
    const cplx h = probe.Hz[static_cast<Eigen::Index>(i)];
    os << format_real(p.x(), digits) << ',' << format_real(p.y(), digits) << ','
       << format_real(p.z(), digits) << ',' << format_real(h.real(), digits) << ','
       << format_real(h.imag(), digits) << ',' << format_real(std::abs(h), digits) << ','
       << format_real(std::arg(h), digits) << '\n';
  }
}

void write_lorentzian(std::ostream& os, const std::vector<LorentzianResponse>& sweep, int digits) {
  os << "c,phase_rad,magnitude,re,im\n";
  for (const auto& s : sweep) {
    os << format_real(s.c, digits) << ',' << format_real(s.phase, digits) << ','
       << format_real(s.magnitude, digits) << ',' << format_real(s.response.real(), digits) << ','
       << format_real(s.response.imag(), digits) << '\n';
  }
}

} // namespace dmasim::csv
