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
#include <map>
#include <sstream>

#include "commands.hpp"
#include "dmasim/csv.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace dmasim;
using testing::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::vector<std::string> out;
  std::istringstream is(slurp(p));
  std::string l;
  while (std::getline(is, l)) {
    if (!l.empty() && l[0] != '#') out.push_back(l);
  }
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string c;
  while (std::getline(ss, c, ',')) out.push_back(c);
  return out;
}

fs::path write_scenario(const fs::path& dir, const std::string& name, const json& cfg) {
  const fs::path p = dir / name;
  std::ofstream(p) << cfg.dump(2);
  return p;
}

// Validation layout with two users in front of the surface.
json users_config() {
  json c = testing::table2_config();
  c["users"] = {{"positions", json::array({json::array({0.055, testing::lam(30.0), 0.02}),
                                           json::array({0.0, testing::lam(25.0), 0.3})})},
                {"Y_r", 6.185668}};
  return c;
}

std::string bundled(const std::string& name) {
  return (fs::path(DMASIM_SCENARIO_DIR) / name).string();
}

} // namespace

TEST_CASE("validate passes on the bundled scenario") {
  const auto dir = testing::tmp_dir("validate");
  const Run r = invoke({"validate", "--out", dir.string(), "--no-timestamp"});
  CHECK(r.code == cli::exit_ok);
  const auto rows = data_lines(dir / "report.csv");
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == "quantity,computed_re,computed_im,expected_re,expected_im,rel_error,tolerance,status");
  std::map<std::string, std::vector<std::string>> by_name;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    REQUIRE(cells.size() == 8);
    CHECK(cells[7] == "pass");
    by_name[cells[0]] = cells;
  }
  CHECK(std::stod(by_name.at("P_t")[1]) == doctest::Approx(0.6077).epsilon(0.02));
  CHECK(std::stod(by_name.at("Y_0_auto")[1]) == doctest::Approx(35.3387).epsilon(1e-3));
  CHECK(by_name.count("abs_j_s_9") == 1);
}

TEST_CASE("validate with automatic connector") {
  const auto dir = testing::tmp_dir("validate_auto");
  const Run r = invoke({"validate", "--scenario", bundled("table2_auto.json"), "--out", dir.string()});
  CHECK(r.code == cli::exit_ok);
}

TEST_CASE("validate reports deviations with exit code 1") {
  const auto dir = testing::tmp_dir("validate_fail");
  json c = testing::table2_config();
  c["terminations"]["Y_s"] = json::array({5.0, -10.0});
  const Run r = invoke({"validate", "--scenario", write_scenario(dir, "off.json", c).string(), "--out",
                     dir.string()});
  CHECK(r.code == cli::exit_acceptance);
  CHECK(r.err.find("FAIL P_t") != std::string::npos);
  CHECK(slurp(dir / "report.csv").find(",fail") != std::string::npos);
}

TEST_CASE("every output starts with the provenance header") {
  const auto dir = testing::tmp_dir("headers");
  const fs::path sc = write_scenario(dir, "users.json", users_config());
  const std::string hash = csv::file_hash(sc);
  for (const std::string cmd : {"solve", "admittance", "field", "pattern", "channel"}) {
    const fs::path out = dir / cmd;
    const Run r = invoke({cmd, "--scenario", sc.string(), "--out", out.string(), "--seed", "5",
                       "--samples", "12"});
    REQUIRE(r.code == cli::exit_ok);
    for (const auto& f : fs::directory_iterator(out)) {
      const std::string text = slurp(f.path());
      CAPTURE(f.path());
      CHECK(text.rfind(std::string("# dmasim ") + DMASIM_VERSION + "\n", 0) == 0);
      CHECK(text.find("# scenario_hash " + hash + "\n") != std::string::npos);
      CHECK(text.find("# seed 5\n") != std::string::npos);
      CHECK(text.find("# timestamp ") != std::string::npos);
    }
  }
}

TEST_CASE("field command along the guide centre") {
  const auto dir = testing::tmp_dir("field");
  const Run r = invoke({"field", "--out", dir.string()});
  REQUIRE(r.code == cli::exit_ok);
  const auto rows = data_lines(dir / "probe.csv");
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == "x_m,y_m,z_m,re_Hz,im_Hz,abs_Hz,arg_Hz_rad");
  const auto first = split(rows[1]), last = split(rows[200]);
  CHECK(std::stod(first[0]) == 0.0);
  CHECK(std::stod(last[0]) == doctest::Approx(0.110));
  // Envelope: the field near the feed is well above the field near the short.
  CHECK(std::stod(first[5]) > 5.0 * std::stod(last[5]));
}

TEST_CASE("Rayleigh channel is reproducible for a seed") {
  const auto dir = testing::tmp_dir("channel");
  const fs::path sc = write_scenario(dir, "users.json", users_config());
  auto run = [&](const std::string& sub, const std::string& seed) {
    return invoke({"channel", "--scenario", sc.string(), "--model", "rayleigh", "--samples", "1000",
                "--seed", seed, "--out", (dir / sub).string(), "--no-timestamp"});
  };
  REQUIRE(run("a", "7").code == cli::exit_ok);
  REQUIRE(run("b", "7").code == cli::exit_ok);
  REQUIRE(run("c", "8").code == cli::exit_ok);
  const std::string a = slurp(dir / "a" / "channel.csv");
  CHECK(a == slurp(dir / "b" / "channel.csv"));
  CHECK(a != slurp(dir / "c" / "channel.csv"));
  CHECK(a.find("# block H_eq_999 2x2") != std::string::npos);
}

TEST_CASE("repeated runs differ only in the timestamp") {
  const auto dir = testing::tmp_dir("repeat");
  const fs::path sc = write_scenario(dir, "users.json", users_config());
  for (const std::string cmd : {"solve", "pattern"}) {
    auto run = [&](const std::string& sub, bool stamp) {
      std::vector<std::string> args{cmd, "--scenario", sc.string(), "--samples", "10", "--out",
                                    (dir / sub).string()};
      if (!stamp) args.push_back("--no-timestamp");
      REQUIRE(invoke(args).code == cli::exit_ok);
    };
    run(cmd + "1", false);
    run(cmd + "2", false);
    run(cmd + "3", true);
    for (const auto& f : fs::directory_iterator(dir / (cmd + "1"))) {
      const std::string name = f.path().filename().string();
      const std::string a = slurp(f.path());
      CHECK(a == slurp(dir / (cmd + "2") / name));
      std::string stamped = slurp(dir / (cmd + "3") / name);
      const auto pos = stamped.find("# timestamp ");
      REQUIRE(pos != std::string::npos);
      stamped.erase(pos, stamped.find('\n', pos) - pos + 1);
      CHECK(a == stamped);
    }
  }
}

TEST_CASE("admittance output re-ingested as Y_rs reproduces the solve") {
  const auto dir = testing::tmp_dir("roundtrip");
  const fs::path sc = write_scenario(dir, "users.json", users_config());
  auto run = [&](std::vector<std::string> extra, const std::string& sub) {
    std::vector<std::string> args{"--scenario", sc.string(), "--out", (dir / sub).string(),
                                  "--no-timestamp", "--full-precision"};
    args.insert(args.end(), extra.begin(), extra.end());
    REQUIRE(invoke(args).code == cli::exit_ok);
  };
  run({"admittance"}, "adm");
  run({"solve"}, "direct");
  run({"solve", "--yrs", (dir / "adm" / "yrs.csv").string()}, "ingested");
  CHECK(slurp(dir / "direct" / "solution.csv") == slurp(dir / "ingested" / "solution.csv"));
  CHECK(slurp(dir / "direct" / "powers.csv") == slurp(dir / "ingested" / "powers.csv"));

  run({"solve", "--bilateral"}, "direct_b");
  run({"solve", "--bilateral", "--yrs", (dir / "adm" / "yrs.csv").string()}, "ingested_b");
  CHECK(slurp(dir / "direct_b" / "solution.csv") == slurp(dir / "ingested_b" / "solution.csv"));
}

TEST_CASE("Lorentzian sweep") {
  const auto dir = testing::tmp_dir("lorentzian");
  REQUIRE(invoke({"lorentzian", "--re-yss", "1", "--out", dir.string()}).code == cli::exit_ok);
  const auto rows = data_lines(dir / "lorentzian.csv");
  REQUIRE(rows.size() == 1001);
  CHECK(rows[0] == "c,phase_rad,magnitude,re,im");
  double prev_phase = -10.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = split(rows[i]);
    const double phase = std::stod(c[1]), mag = std::stod(c[2]);
    const cplx v(std::stod(c[3]), std::stod(c[4]));
    CHECK(std::abs(phase) < pi / 2);
    CHECK(phase > prev_phase);
    // Circle through the origin, to the printed precision.
    CHECK(std::abs(std::abs(v - 0.5) - 0.5) < 1e-8);
    CHECK(mag == doctest::Approx(std::cos(phase)).epsilon(1e-7));
    prev_phase = phase;
  }
  CHECK(invoke({"lorentzian", "--re-yss", "0", "--out", dir.string()}).code == cli::exit_input);
}

TEST_CASE("exit codes") {
  const auto dir = testing::tmp_dir("exit");
  CHECK(invoke({}).code == cli::exit_input);
  CHECK(invoke({"bogus"}).code == cli::exit_input);
  CHECK(invoke({"solve", "--model", "other"}).code == cli::exit_input);
  CHECK(invoke({"solve", "--scenario", (dir / "missing.json").string()}).code == cli::exit_input);
  CHECK(invoke({"channel", "--out", dir.string()}).code == cli::exit_input);
  CHECK(invoke({"--help"}).code == cli::exit_ok);

  std::ofstream(dir / "broken.json") << "{";
  CHECK(invoke({"solve", "--scenario", (dir / "broken.json").string(), "--out", dir.string()}).code ==
        cli::exit_input);

  // Y_rs of the wrong shape.
  {
    std::ofstream f(dir / "yrs.csv");
    csv::write_matrix(f, CMatrix::Zero(1, 3));
  }
  const fs::path users = write_scenario(dir, "users.json", users_config());
  const Run bad = invoke({"solve", "--scenario", users.string(), "--yrs", (dir / "yrs.csv").string(),
                       "--out", dir.string()});
  CHECK(bad.code == cli::exit_input);
  CHECK(bad.err.find("Y_rs") != std::string::npos);

  // Resonant guide: sin(kx S) = 0.
  json c = testing::single_guide_config(json::array({0.01, 0.02}));
  const Scenario probe = build_scenario(c);
  const double kx = derive_wavenumbers(probe.medium, probe.waveguides[0]).kx.real();
  c["waveguide"]["S"] = 5.0 * pi / kx;
  const Run res = invoke({"solve", "--scenario", write_scenario(dir, "res.json", c).string(), "--out",
                       dir.string()});
  CHECK(res.code == cli::exit_numerical);
  CHECK(res.err.find("resonan") != std::string::npos);
}
