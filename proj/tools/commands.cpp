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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmasim/admittance.hpp"
#include "dmasim/channel.hpp"
#include "dmasim/csv.hpp"
#include "dmasim/error.hpp"
#include "dmasim/network.hpp"
#include "dmasim/radiation.hpp"
#include "dmasim/scenario.hpp"

#ifndef DMASIM_SCENARIO_DIR
#define DMASIM_SCENARIO_DIR "scenarios"
#endif

namespace dmasim::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  const Options& opts;
  std::ostream& out;
  std::ostream& err;
  fs::path scenario_path;
  json raw;
  Scenario sc;
  int digits = csv::standard_digits;

  csv::Header header(const std::string& command) const {
    csv::Header h;
    h.command = command;
    h.scenario_hash = csv::file_hash(scenario_path);
    h.seed = opts.seed;
    h.timestamp = !opts.no_timestamp;
    return h;
  }

  std::ofstream open(const std::string& name) const {
    const fs::path p = opts.out / name;
    std::ofstream f(p);
    if (!f) throw InvalidInput("cannot write " + p.string());
    f.exceptions(std::ios::badbit);
    out << "wrote " << p.string() << '\n';
    return f;
  }

  Coupling coupling() const { return opts.bilateral ? Coupling::Bilateral : Coupling::Unilateral; }
};

json read_raw(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file " + path.string());
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw InvalidInput("scenario " + path.string() + ": " + e.what());
  }
}

CVector complex_list(const json& v, Eigen::Index n, const std::string& what) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n) {
    throw InvalidInput(what + ": expected a list of " + std::to_string(n) + " values");
  }
  CVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = parse_complex(v[static_cast<std::size_t>(i)], what);
  }
  return out;
}

// Defaults to 1 W split equally with zero phases.
Excitation scenario_excitation(const Context& ctx) {
  const auto N = static_cast<Eigen::Index>(ctx.sc.n_waveguides());
  if (!ctx.raw.contains("excitation")) return Excitation::supplied(1.0, CVector::Ones(N));
  const json& e = ctx.raw.at("excitation");
  if (e.contains("transmit_currents")) {
    return Excitation::transmit_currents(
        complex_list(e.at("transmit_currents"), N, "excitation.transmit_currents"));
  }
  if (e.contains("feed_currents")) {
    return Excitation::feed_currents(complex_list(e.at("feed_currents"), N, "excitation.feed_currents"));
  }
  const double p = e.value("supplied_power_w", 1.0);
  const CVector w = e.contains("weights") ? complex_list(e.at("weights"), N, "excitation.weights")
                                          : CVector::Ones(N);
  return Excitation::supplied(p, w);
}

CovarianceStack channel_covariance(const Context& ctx) {
  const std::vector<double> d = user_distances(ctx.sc);
  return rayleigh_covariance(ctx.sc, d, ctx.opts.polarization_loss);
}

AdmittanceSet admittances(const Context& ctx, std::mt19937_64* rng = nullptr) {
  AdmittanceSet adm = build_admittances(ctx.sc, {ctx.opts.farfield_los});
  if (!ctx.opts.yrs_file.empty()) {
    const CMatrix y = csv::read_matrix_file(ctx.opts.yrs_file);
    if (y.rows() != adm.Yrs.rows() || y.cols() != adm.Yrs.cols()) {
      throw InvalidInput("Y_rs file is " + std::to_string(y.rows()) + "x" +
                         std::to_string(y.cols()) + ", scenario needs " +
                         std::to_string(adm.Yrs.rows()) + "x" + std::to_string(adm.Yrs.cols()));
    }
    adm.Yrs = y;
  } else if (ctx.opts.model == "rayleigh" && ctx.sc.n_users() > 0) {
    std::mt19937_64 local(ctx.opts.seed);
    adm.Yrs = sample_rayleigh(channel_covariance(ctx), rng ? *rng : local);
  }
  return adm;
}

void report_warnings(const Context& ctx, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) ctx.err << "warning: " << w << '\n';
}

NetworkSolution solve_scenario(const Context& ctx, const AdmittanceSet& adm) {
  NetworkSolution sol = solve(adm, scenario_excitation(ctx), ctx.sc.connector_admittance,
                              ctx.coupling());
  report_warnings(ctx, sol.warnings);
  return sol;
}

CMatrix column(const CVector& v) { return v; }

int samples_or(const Options& o, int fallback) { return o.samples > 0 ? o.samples : fallback; }

GainReference parse_reference(const std::string& s) {
  if (s == "supplied") return GainReference::Supplied;
  if (s == "transmitted") return GainReference::Transmitted;
  if (s == "radiated") return GainReference::Radiated;
  throw InvalidInput("unknown gain reference '" + s + "'");
}

// ---------------------------------------------------------------- commands

struct Check {
  std::string name;
  cplx computed;
  cplx expected;
  double tolerance;
  double rel_error() const { return std::abs(computed - expected) / std::abs(expected); }
  bool pass() const { return rel_error() <= tolerance; }
};

int cmd_validate(Context& ctx) {
  const AdmittanceSet adm = admittances(ctx);
  const NetworkSolution sol = solve_scenario(ctx, adm);
  if (sol.jt.size() != 2 || sol.js.size() != 10) {
    throw InvalidInput("validate expects the two-guide, ten-element validation layout");
  }
  std::vector<Check> checks;
  checks.push_back({"P_t", sol.Pt, 0.6077, 0.02});
  for (int n = 0; n < 2; ++n) {
    checks.push_back({"j_" + std::to_string(n), sol.j[n], 0.1682, 0.02});
  }
  for (int n = 0; n < 2; ++n) {
    checks.push_back({"j_t_" + std::to_string(n), sol.jt[n], cplx(0.2266, 0.0877), 0.02});
  }
  const double js_ref[5] = {0.1546, 0.0838, 0.0418, 0.0276, 0.0285};
  for (int l = 0; l < 10; ++l) {
    checks.push_back({"abs_j_s_" + std::to_string(l), std::abs(sol.js[l]), js_ref[l % 5], 0.02});
  }
  checks.push_back({"Y_0_auto", connector_admittance_auto(ctx.sc), 35.3387, 1e-3});

  std::ofstream f = ctx.open("report.csv");
  csv::write_header(f, ctx.header("validate"));
  f << "quantity,computed_re,computed_im,expected_re,expected_im,rel_error,tolerance,status\n";
  bool all = true;
  for (const auto& c : checks) {
    const int d = ctx.digits;
    f << c.name << ',' << csv::format_real(c.computed.real(), d) << ','
      << csv::format_real(c.computed.imag(), d) << ',' << csv::format_real(c.expected.real(), d)
      << ',' << csv::format_real(c.expected.imag(), d) << ','
      << csv::format_real(c.rel_error(), d) << ',' << csv::format_real(c.tolerance, d) << ','
      << (c.pass() ? "pass" : "fail") << '\n';
    if (!c.pass()) {
      all = false;
      ctx.err << "FAIL " << c.name << ": relative deviation " << c.rel_error() << " exceeds "
              << c.tolerance << '\n';
    }
  }
  ctx.out << (all ? "validation passed" : "validation failed") << " (" << checks.size()
          << " quantities)\n";
  return all ? exit_ok : exit_acceptance;
}

int cmd_solve(Context& ctx) {
  const AdmittanceSet adm = admittances(ctx);
  const NetworkSolution sol = solve_scenario(ctx, adm);
  {
    std::ofstream f = ctx.open("solution.csv");
    csv::write_header(f, ctx.header("solve"));
    csv::write_block(f, "j", column(sol.j), ctx.digits);
    csv::write_block(f, "j_t", column(sol.jt), ctx.digits);
    csv::write_block(f, "v_t", column(sol.vt), ctx.digits);
    csv::write_block(f, "j_s", column(sol.js), ctx.digits);
    csv::write_block(f, "v_s", column(sol.vs), ctx.digits);
    csv::write_block(f, "j_r", column(sol.jr), ctx.digits);
    csv::write_block(f, "v_r", column(sol.vr), ctx.digits);
    csv::write_block(f, "Y_p", sol.Yp, ctx.digits);
    csv::write_block(f, "Y_in", column(sol.Yin), ctx.digits);
    csv::write_block(f, "Gamma", column(sol.gamma), ctx.digits);
    csv::write_block(f, "T", column(sol.transmission), ctx.digits);
  }
  std::vector<std::pair<std::string, double>> rows{{"P_s", sol.Ps}, {"P_t", sol.Pt}};
  for (Eigen::Index m = 0; m < sol.Pr.size(); ++m) rows.emplace_back("P_r_" + std::to_string(m), sol.Pr[m]);
  for (Eigen::Index l = 0; l < sol.Pd.size(); ++l) rows.emplace_back("P_d_" + std::to_string(l), sol.Pd[l]);
  rows.emplace_back("P_d_total", sol.Pd.sum());
  rows.emplace_back("P_rad", radiated_power(sol, ctx.sc, ctx.opts.quadrature));
  std::ofstream f = ctx.open("powers.csv");
  csv::write_header(f, ctx.header("solve"));
  csv::write_powers(f, rows, ctx.digits);
  return exit_ok;
}

int cmd_admittance(Context& ctx) {
  const AdmittanceSet adm = admittances(ctx);
  {
    std::ofstream f = ctx.open("admittance.csv");
    csv::write_header(f, ctx.header("admittance"));
    csv::write_block(f, "Y_tt", adm.Ytt, ctx.digits);
    csv::write_block(f, "Y_st", adm.Yst, ctx.digits);
    csv::write_block(f, "Y_ss", adm.Yss, ctx.digits);
    csv::write_block(f, "Y_rr", adm.Yrr, ctx.digits);
    csv::write_block(f, "Y_rs", adm.Yrs, ctx.digits);
    csv::write_block(f, "Y_s", column(adm.ys), ctx.digits);
    csv::write_block(f, "Y_r", column(adm.yr), ctx.digits);
  }
  std::ofstream f = ctx.open("yrs.csv");
  csv::write_header(f, ctx.header("admittance"));
  csv::write_matrix(f, adm.Yrs, ctx.digits);
  return exit_ok;
}

int cmd_field(Context& ctx) {
  const AdmittanceSet adm = admittances(ctx);
  const NetworkSolution sol = solve_scenario(ctx, adm);
  const auto line = guide_center_line(ctx.sc, ctx.opts.guide, samples_or(ctx.opts, 200));
  const FieldProbe probe = field_in_guide(sol, ctx.sc, ctx.opts.guide, line);
  std::ofstream f = ctx.open("probe.csv");
  csv::write_header(f, ctx.header("field"));
  csv::write_probe(f, probe, ctx.digits);
  return exit_ok;
}

int cmd_pattern(Context& ctx) {
  const AdmittanceSet adm = admittances(ctx);
  const NetworkSolution sol = solve_scenario(ctx, adm);
  FarFieldOptions ff;
  ff.reference = parse_reference(ctx.opts.reference);
  ff.radiated_power_order = ctx.opts.quadrature;
  ff.reference_power = reference_power(sol, ctx.sc, ff);
  const int n = samples_or(ctx.opts, 90);
  {
    std::ofstream f = ctx.open("gain_grid.csv");
    csv::write_header(f, ctx.header("pattern"));
    const GainGrid grid = gain_grid(sol, ctx.sc, n, n, ff);
    report_warnings(ctx, grid.warnings);
    csv::write_grid(f, grid, ctx.digits);
  }
  const struct {
    const char* file;
    double theta;
  } cuts[] = {{"cut_theta_90.csv", pi / 2.0}, {"cut_theta_45.csv", pi / 4.0}};
  for (const auto& c : cuts) {
    std::ofstream f = ctx.open(c.file);
    csv::write_header(f, ctx.header("pattern"));
    csv::write_cut(f, gain_cut(sol, ctx.sc, CutKind::FixedTheta, c.theta, 361, ff), ctx.digits);
  }
  return exit_ok;
}

int cmd_channel(Context& ctx) {
  if (ctx.sc.n_users() == 0) throw InvalidInput("channel: scenario defines no users");
  if (ctx.opts.model != "los" && ctx.opts.model != "rayleigh") {
    throw InvalidInput("unknown channel model '" + ctx.opts.model + "'");
  }
  std::ofstream f = ctx.open("channel.csv");
  csv::write_header(f, ctx.header("channel"));
  const int K = ctx.opts.model == "rayleigh" ? samples_or(ctx.opts, 1) : 1;
  std::mt19937_64 rng(ctx.opts.seed);
  for (int k = 0; k < K; ++k) {
    const AdmittanceSet adm = admittances(ctx, &rng);
    const std::string tag = K > 1 ? "_" + std::to_string(k) : "";
    csv::write_block(f, "Y_rs" + tag, adm.Yrs, ctx.digits);
    csv::write_block(f, "H_eq" + tag, equivalent_channel(adm, ctx.coupling()), ctx.digits);
  }
  return exit_ok;
}

int cmd_lorentzian(Context& ctx) {
  const int n = samples_or(ctx.opts, 1000);
  // Uniform in phase over (-pi/2, pi/2), mapped back to the tuning susceptance.
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double phase = -pi / 2.0 + pi * (i + 0.5) / n;
    c[static_cast<std::size_t>(i)] = -ctx.opts.re_yss * std::tan(phase);
  }
  std::ofstream f = ctx.open("lorentzian.csv");
  csv::write_header(f, ctx.header("lorentzian"));
  csv::write_lorentzian(f, lorentzian_sweep(ctx.opts.re_yss, c), ctx.digits);
  return exit_ok;
}

int dispatch(Context& ctx) {
  const std::string& c = ctx.opts.command;
  if (c == "validate") return cmd_validate(ctx);
  if (c == "solve") return cmd_solve(ctx);
  if (c == "admittance") return cmd_admittance(ctx);
  if (c == "field") return cmd_field(ctx);
  if (c == "pattern") return cmd_pattern(ctx);
  if (c == "channel") return cmd_channel(ctx);
  if (c == "lorentzian") return cmd_lorentzian(ctx);
  throw InvalidInput("unknown command '" + c + "'");
}

} // namespace

fs::path bundled_scenario() { return fs::path(DMASIM_SCENARIO_DIR) / "table2.json"; }

int run(const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.quadrature < 2) throw InvalidInput("--quadrature must be >= 2");
    Context ctx{opts, out, err, opts.scenario.empty() ? bundled_scenario() : opts.scenario,
                json{}, Scenario{}, opts.full_precision ? csv::full_digits : csv::standard_digits};
    if (opts.command != "lorentzian") {
      ctx.raw = read_raw(ctx.scenario_path);
      ctx.sc = build_scenario(ctx.raw);
      report_warnings(ctx, ctx.sc.warnings);
    } else if (!opts.scenario.empty()) {
      // The scenario only feeds the header hash here.
      ctx.raw = read_raw(ctx.scenario_path);
    }
    std::error_code ec;
    fs::create_directories(opts.out, ec);
    if (ec) throw InvalidInput("cannot create " + opts.out.string() + ": " + ec.message());
    return dispatch(ctx);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  std::string scenario, outdir = ".", yrs;
  CLI::App app{"Circuit-level simulator for waveguide-fed dynamic metasurface antennas", "dmasim"};
  app.add_option("command", o.command, "validate | solve | admittance | field | pattern | channel | lorentzian")
      ->required()
      ->check(CLI::IsMember({"validate", "solve", "admittance", "field", "pattern", "channel", "lorentzian"}));
  app.add_option("--scenario", scenario, "scenario JSON (default: bundled validation layout)");
  app.add_option("--out", outdir, "output directory");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--quadrature", o.quadrature, "quadrature order per axis");
  app.add_flag("--bilateral", o.bilateral, "keep the users' back-coupling");
  app.add_flag("--farfield-los", o.farfield_los, "far-field form for the line-of-sight channel");
  app.add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp header line");
  app.add_flag("--full-precision", o.full_precision, "17 significant digits instead of 9");
  app.add_option("--model", o.model, "channel model")->check(CLI::IsMember({"los", "rayleigh"}));
  app.add_option("--samples", o.samples, "realizations, probe points, grid size or sweep length");
  app.add_option("--re-yss", o.re_yss, "Re{Y_ss} for the Lorentzian sweep");
  app.add_option("--yrs", yrs, "user-supplied Y_rs matrix CSV");
  app.add_option("--guide", o.guide, "waveguide probed by 'field'");
  app.add_option("--reference", o.reference, "gain reference power")
      ->check(CLI::IsMember({"supplied", "transmitted", "radiated"}));
  app.add_option("--polarization-loss", o.polarization_loss, "L_p for the Rayleigh model");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  }
  o.scenario = scenario;
  o.out = outdir;
  o.yrs_file = yrs;
  return run(o, out, err);
}

} // namespace dmasim::cli
