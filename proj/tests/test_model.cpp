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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>

#include "dmasim/error.hpp"
#include "dmasim/model.hpp"
#include "dmasim/scenario.hpp"
#include "support.hpp"

using namespace dmasim;
using testing::json;
using testing::lam;

namespace {

WaveguideSpec guide_in_lambda(const Medium& m, double a, double b, double S) {
  const double l = m.wavelength();
  return {a * l, b * l, S, a * l / 2.0, Vec3::Zero()};
}

} // namespace

TEST_CASE("medium constants") {
  const Medium m = Medium::vacuum(testing::f_table2);
  CHECK(m.impedance() == doctest::Approx(376.730313).epsilon(1e-8));
  CHECK(m.wavelength() == doctest::Approx(299792458.0 / 10e9).epsilon(1e-9));
  CHECK(m.wavenumber() == doctest::Approx(209.584502).epsilon(1e-8));
}

TEST_CASE("axial wavenumber of the validation guide") {
  const Medium m = Medium::vacuum(testing::f_table2);
  const Wavenumbers kn = derive_wavenumbers(m, guide_in_lambda(m, 0.7318, 0.1668, 0.11));
  const double expected = std::sqrt(1.0 - std::pow(1.0 / (2.0 * 0.7318), 2));
  CHECK(kn.kx.imag() == 0.0);
  CHECK(kn.kx.real() / kn.k == doctest::Approx(expected).epsilon(1e-13));
  CHECK(kn.kx.real() / kn.k == doctest::Approx(0.7301).epsilon(1e-4));
  CHECK(kn.single_mode);
}

TEST_CASE("cutoff and evanescent branches") {
  const Medium m = Medium::vacuum(testing::f_table2);
  const double k = m.wavenumber();

  const Wavenumbers cut = derive_wavenumbers(m, guide_in_lambda(m, 0.5, 0.1668, 0.11));
  CHECK(std::abs(cut.kx) < 1e-6 * k);

  const WaveguideSpec narrow = guide_in_lambda(m, 0.4, 0.1668, 0.11);
  const Wavenumbers ev = derive_wavenumbers(m, narrow);
  const double decay = std::sqrt(std::pow(pi / narrow.width_a, 2) - k * k);
  CHECK(ev.kx.real() == 0.0);
  CHECK(ev.kx.imag() < 0.0);
  CHECK(-ev.kx.imag() == doctest::Approx(decay).epsilon(1e-13));
  CHECK_FALSE(ev.single_mode);

  CHECK(axial_wavenumber(3.0, 5.0) == cplx(0.0, -4.0));
  CHECK(axial_wavenumber(5.0, 3.0) == cplx(4.0, 0.0));
}

TEST_CASE("single-mode flag") {
  const Medium m = Medium::vacuum(testing::f_table2);
  CHECK_FALSE(derive_wavenumbers(m, guide_in_lambda(m, 1.2, 0.1668, 0.11)).single_mode);
  CHECK_FALSE(derive_wavenumbers(m, guide_in_lambda(m, 0.7318, 0.6, 0.11)).single_mode);
}

TEST_CASE("non-positive inputs are rejected") {
  Medium m = Medium::vacuum(testing::f_table2);
  const WaveguideSpec g = guide_in_lambda(m, 0.7318, 0.1668, 0.11);
  WaveguideSpec bad = g;
  bad.width_a = 0.0;
  CHECK_THROWS_AS(derive_wavenumbers(m, bad), InvalidInput);
  bad = g;
  bad.height_b = -1.0;
  CHECK_THROWS_AS(derive_wavenumbers(m, bad), InvalidInput);
  bad = g;
  bad.length_S = 0.0;
  CHECK_THROWS_AS(derive_wavenumbers(m, bad), InvalidInput);
  m.frequency_hz = 0.0;
  CHECK_THROWS_AS(derive_wavenumbers(m, g), InvalidInput);
}

TEST_CASE("validation layout builds with centered elements") {
  const Scenario sc = testing::table2();
  const double l = sc.medium.wavelength();
  const double a = 0.7318 * l, b = 0.1668 * l, d = 0.6 * l;
  REQUIRE(sc.n_waveguides() == 2);
  REQUIRE(sc.n_elements() == 10);
  CHECK(sc.n_users() == 0);
  const double x1 = (0.110 - 4.0 * d) / 2.0;
  for (std::size_t l_ = 0; l_ < 10; ++l_) {
    const std::size_t n = l_ / 5;
    CHECK(sc.elements[l_].waveguide == n);
    const Vec3& p = sc.elements[l_].position;
    CHECK(p.x() == doctest::Approx(x1 + static_cast<double>(l_ % 5) * d).epsilon(1e-14));
    CHECK(p.y() == doctest::Approx(b).epsilon(1e-14));
    CHECK(p.z() == doctest::Approx(static_cast<double>(n) * l + a / 2.0).epsilon(1e-14));
  }
  CHECK((sc.feed_position(1) - Vec3(0.0, b / 2.0, l + a / 2.0)).norm() < 1e-15);
  CHECK((sc.local_position(7) - Vec3(x1 + 2.0 * d, b, a / 2.0)).norm() < 1e-15);
  CHECK(sc.element_terminations.size() == 10);
  CHECK(sc.element_terminations[3] == cplx(2.0, -15.7934));
  CHECK(sc.connector_admittance == 35.3387);
}

TEST_CASE("feed closer than one wavelength is a warning, not an error") {
  const Scenario sc = testing::table2();
  REQUIRE(sc.warnings.size() == 2);
  CHECK(sc.warnings[0].find("0.6346") != std::string::npos);
}

TEST_CASE("users are optional") {
  json c = testing::table2_config();
  c["users"] = {{"positions", json::array()}};
  const Scenario sc = build_scenario(c);
  CHECK(sc.n_users() == 0);
  CHECK(sc.user_loads.size() == 0);
}

TEST_CASE("users and loads") {
  json c = testing::table2_config();
  c["users"] = {{"positions", json::array({json::array({0.05, lam(10.0), 0.0}),
                                           json::array({0.0, 1.0, lam(2.0)})})},
                {"Y_r", json::array({1.5, json::array({2.0, 0.5})})}};
  const Scenario sc = build_scenario(c);
  REQUIRE(sc.n_users() == 2);
  CHECK(sc.users[0].y() == doctest::Approx(10.0 * sc.medium.wavelength()));
  CHECK(sc.user_loads[1] == cplx(2.0, 0.5));
}

TEST_CASE("scenario validation errors") {
  SUBCASE("element beyond the short") {
    json c = testing::single_guide_config(json::array({0.02, 0.110 + 1e-3}));
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
  SUBCASE("element outside the broad wall") {
    json c = testing::single_guide_config(
        json::array({json{{"waveguide", 0}, {"x", 0.05}, {"z", lam(0.8)}}}));
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
  SUBCASE("user behind the surface") {
    json c = testing::table2_config();
    c["users"] = {{"positions", json::array({json::array({0.0, 0.0, 0.0})})}};
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
  SUBCASE("termination count mismatch") {
    json c = testing::table2_config();
    c["terminations"]["Y_s"] = json::array({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
  SUBCASE("feed on the side wall") {
    json c = testing::table2_config();
    c["waveguide"]["feed_z"] = 0.0;
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
  SUBCASE("non-positive connector") {
    json c = testing::table2_config();
    c["connector"]["Y_0"] = 0.0;
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
  SUBCASE("overlapping guides") {
    json c = testing::table2_config();
    c["layout"]["waveguide_spacing"] = lam(0.5);
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
  SUBCASE("missing section") {
    json c = testing::table2_config();
    c.erase("connector");
    CHECK_THROWS_AS(build_scenario(c), InvalidInput);
  }
}

TEST_CASE("explicit element list") {
  json c = testing::table2_config();
  c["layout"]["element_placement"] =
      json::array({json{{"waveguide", 1}, {"x", 0.03}}, json{{"waveguide", 0}, {"x", 0.07}, {"z", 0.005}}});
  c["terminations"]["Y_s"] = json::array({json::array({1.0, 0.0}), 3.0});
  const Scenario sc = build_scenario(c);
  REQUIRE(sc.n_elements() == 2);
  CHECK(sc.elements[0].waveguide == 1);
  CHECK(sc.local_position(1).z() == doctest::Approx(0.005));
  CHECK(sc.element_terminations[1] == cplx(3.0, 0.0));
}

TEST_CASE("complex literals") {
  CHECK(parse_complex(json(2.5), "v") == cplx(2.5, 0.0));
  CHECK(parse_complex(json::array({1.0, -2.0}), "v") == cplx(1.0, -2.0));
  CHECK_THROWS_AS(parse_complex(json("x"), "v"), InvalidInput);
  CHECK_THROWS_AS(parse_complex(json::array({1.0, 2.0, 3.0}), "v"), InvalidInput);
}

TEST_CASE("bundled scenario file loads with comments") {
  const Scenario sc = load_scenario(std::filesystem::path(DMASIM_SCENARIO_DIR) / "table2.json");
  const Scenario ref = testing::table2();
  REQUIRE(sc.n_elements() == ref.n_elements());
  for (std::size_t l = 0; l < sc.n_elements(); ++l) {
    CHECK((sc.elements[l].position - ref.elements[l].position).norm() == 0.0);
  }
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), InvalidInput);

  const auto dir = testing::tmp_dir("model");
  std::ofstream(dir / "broken.json") << "{ \"medium\": ";
  CHECK_THROWS_AS(load_scenario(dir / "broken.json"), InvalidInput);
}
