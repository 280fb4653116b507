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

#include <cmath>
#include <complex>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "dmasim/scenario.hpp"

namespace testing {

using nlohmann::json;

inline constexpr double f_table2 = 10e9;

inline json lam(double x) { return json{{"lambda", x}}; }

// Two guides, five elements each, as shipped in scenarios/table2.json.
inline json table2_config() {
  return json{
      {"medium", {{"frequency_hz", f_table2}}},
      {"waveguide", {{"a", lam(0.7318)}, {"b", lam(0.1668)}, {"S", 0.110}}},
      {"layout",
       {{"n_waveguides", 2},
        {"waveguide_spacing", lam(1.0)},
        {"elements_per_guide", 5},
        {"element_spacing", lam(0.6)},
        {"element_placement", "centered"}}},
      {"terminations", {{"Y_s", json::array({2.0, -15.7934})}}},
      {"connector", {{"Y_0", 35.3387}}},
  };
}

inline dmasim::Scenario table2() { return dmasim::build_scenario(table2_config()); }

// One guide of the same cross-section with explicit element offsets (metres).
inline json single_guide_config(const json& offsets) {
  json c = table2_config();
  c["layout"] = {{"n_waveguides", 1}, {"element_placement", offsets}};
  return c;
}

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::abs(b);
}

inline std::filesystem::path tmp_dir(const std::string& name) {
  const auto p = std::filesystem::path(DMASIM_TEST_TMP) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

} // namespace testing
