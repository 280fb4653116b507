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

#include "dmasim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dmasim/admittance.hpp"
#include "dmasim/error.hpp"

namespace dmasim {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidInput(where + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

double as_real(const json& v, const std::string& what) {
  if (!v.is_number()) throw InvalidInput(what + ": expected a number");
  return v.get<double>();
}

double as_length(const json& v, double lambda, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_object() && v.contains("lambda") && v.at("lambda").is_number()) {
    return v.at("lambda").get<double>() * lambda;
  }
  throw InvalidInput(what + ": expected metres or {\"lambda\": x}");
}

Vec3 as_point(const json& v, double lambda, const std::string& what) {
  if (!v.is_array() || v.size() != 3) throw InvalidInput(what + ": expected [x, y, z]");
  return {as_length(v[0], lambda, what), as_length(v[1], lambda, what),
          as_length(v[2], lambda, what)};
}

CVector broadcast(const json& v, std::size_t count, const std::string& what) {
  CVector out(static_cast<Eigen::Index>(count));
  // A list of two numbers is a single complex value, not two real entries.
  const bool scalar =
      v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number());
  if (scalar) {
    out.setConstant(parse_complex(v, what));
    return out;
  }
  if (!v.is_array() || v.size() != count) {
    throw InvalidInput(what + ": expected a scalar or a list of " + std::to_string(count) +
                       " values");
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[static_cast<Eigen::Index>(i)] = parse_complex(v[i], what + "[" + std::to_string(i) + "]");
  }
  return out;
}

} // namespace

cplx parse_complex(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw InvalidInput(what + ": expected a real number or [re, im]");
}

Scenario build_scenario(const json& cfg) {
  Scenario sc;

  const json& med = require(cfg, "medium", "scenario");
  sc.medium.frequency_hz = as_real(require(med, "frequency_hz", "medium"), "medium.frequency_hz");
  sc.medium.permittivity = vacuum_permittivity * med.value("relative_permittivity", 1.0);
  sc.medium.permeability = vacuum_permeability * med.value("relative_permeability", 1.0);
  if (!(sc.medium.frequency_hz > 0.0) || !(sc.medium.permittivity > 0.0) ||
      !(sc.medium.permeability > 0.0)) {
    throw InvalidInput("medium: frequency and relative constants must be positive");
  }
  const double lambda = sc.medium.wavelength();

  const json& wg = require(cfg, "waveguide", "scenario");
  WaveguideSpec base;
  base.width_a = as_length(require(wg, "a", "waveguide"), lambda, "waveguide.a");
  base.height_b = as_length(require(wg, "b", "waveguide"), lambda, "waveguide.b");
  base.length_S = as_length(require(wg, "S", "waveguide"), lambda, "waveguide.S");
  base.feed_z = wg.contains("feed_z") ? as_length(wg.at("feed_z"), lambda, "waveguide.feed_z")
                                      : base.width_a / 2.0;
  if (wg.contains("origin")) base.origin = as_point(wg.at("origin"), lambda, "waveguide.origin");

  const json& lay = require(cfg, "layout", "scenario");
  const int n_guides = lay.value("n_waveguides", 1);
  if (n_guides < 1) throw InvalidInput("layout.n_waveguides must be >= 1");
  const double guide_spacing =
      lay.contains("waveguide_spacing")
          ? as_length(lay.at("waveguide_spacing"), lambda, "layout.waveguide_spacing")
          : 0.0;
  if (n_guides > 1 && !(guide_spacing >= base.width_a)) {
    throw InvalidInput("layout.waveguide_spacing must be at least the guide width a");
  }
  for (int n = 0; n < n_guides; ++n) {
    WaveguideSpec g = base;
    g.origin = base.origin + Vec3(0.0, 0.0, n * guide_spacing);
    sc.waveguides.push_back(g);
  }

  const json placement = lay.value("element_placement", json("centered"));
  auto add_element = [&](std::size_t guide, double x, double z) {
    const WaveguideSpec& g = sc.waveguides[guide];
    sc.elements.push_back({guide, g.origin + Vec3(x, g.height_b, z)});
  };
  if (placement.is_string()) {
    if (placement.get<std::string>() != "centered") {
      throw InvalidInput("layout.element_placement: unknown mode '" + placement.get<std::string>() +
                         "'");
    }
    const int per_guide = require(lay, "elements_per_guide", "layout").get<int>();
    if (per_guide < 0) throw InvalidInput("layout.elements_per_guide must be >= 0");
    const double spacing =
        per_guide > 1 ? as_length(require(lay, "element_spacing", "layout"), lambda,
                                  "layout.element_spacing")
                      : 0.0;
    const double first = (base.length_S - (per_guide - 1) * spacing) / 2.0;
    for (std::size_t n = 0; n < sc.waveguides.size(); ++n) {
      for (int l = 0; l < per_guide; ++l) {
        add_element(n, first + l * spacing, sc.waveguides[n].width_a / 2.0);
      }
    }
  } else if (placement.is_array()) {
    const bool offsets = !placement.empty() && !placement[0].is_object();
    if (offsets) {
      if (lay.contains("elements_per_guide") &&
          lay.at("elements_per_guide").get<std::size_t>() != placement.size()) {
        throw InvalidInput("layout: elements_per_guide does not match the explicit offset list");
      }
      for (std::size_t n = 0; n < sc.waveguides.size(); ++n) {
        for (const json& x : placement) {
          add_element(n, as_length(x, lambda, "layout.element_placement"),
                      sc.waveguides[n].width_a / 2.0);
        }
      }
    } else {
      for (const json& e : placement) {
        const std::size_t guide = e.value("waveguide", std::size_t{0});
        if (guide >= sc.waveguides.size()) {
          throw InvalidInput("layout.element_placement: waveguide index out of range");
        }
        const double x = as_length(require(e, "x", "layout.element_placement"), lambda,
                                   "layout.element_placement.x");
        const double z = e.contains("z") ? as_length(e.at("z"), lambda, "layout.element_placement.z")
                                         : sc.waveguides[guide].width_a / 2.0;
        add_element(guide, x, z);
      }
    }
  } else {
    throw InvalidInput("layout.element_placement: expected \"centered\" or a list");
  }

  if (cfg.contains("users")) {
    const json& users = cfg.at("users");
    if (users.contains("positions")) {
      for (const json& p : users.at("positions")) {
        sc.users.push_back(as_point(p, lambda, "users.positions"));
      }
    }
    sc.user_loads = users.contains("Y_r")
                        ? broadcast(users.at("Y_r"), sc.users.size(), "users.Y_r")
                        : CVector::Zero(static_cast<Eigen::Index>(sc.users.size()));
  }
  if (sc.user_loads.size() != static_cast<Eigen::Index>(sc.users.size())) {
    sc.user_loads = CVector::Zero(static_cast<Eigen::Index>(sc.users.size()));
  }

  const json& term = require(cfg, "terminations", "scenario");
  sc.element_terminations =
      broadcast(require(term, "Y_s", "terminations"), sc.elements.size(), "terminations.Y_s");

  const json& conn = require(cfg, "connector", "scenario");
  const json& y0 = require(conn, "Y_0", "connector");
  if (y0.is_string()) {
    if (y0.get<std::string>() != "auto") {
      throw InvalidInput("connector.Y_0: expected a number or \"auto\"");
    }
    sc.connector_admittance = connector_admittance_auto(sc);
  } else {
    sc.connector_admittance = as_real(y0, "connector.Y_0");
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file " + path.string());
  json cfg;
  try {
    cfg = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw InvalidInput("scenario " + path.string() + ": " + e.what());
  }
  try {
    return build_scenario(cfg);
  } catch (const json::exception& e) {
    throw InvalidInput("scenario " + path.string() + ": " + e.what());
  }
}

} // namespace dmasim
