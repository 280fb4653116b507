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

#include "dmasim/network.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dmasim/error.hpp"

namespace dmasim {
namespace {

constexpr double kSingularRcond = 1e-15;
constexpr double kWarnCondition = 1e12;

// LU factorization of a named block; singular blocks throw, ill-conditioned
// ones leave a warning behind.
class Factor {
public:
  Factor(const CMatrix& A, std::string name, std::vector<std::string>* warnings)
      : name_(std::move(name)) {
    if (A.rows() != A.cols()) throw InvalidInput(name_ + ": matrix is not square");
    if (A.rows() == 0) return;
    lu_.compute(A);
    const double rc = lu_.rcond();
    if (!(rc > kSingularRcond) || !A.allFinite()) {
      std::ostringstream os;
      os << "singular block " << name_ << " (reciprocal condition estimate " << rc << ")";
      throw NumericalError(os.str());
    }
    if (1.0 / rc > kWarnCondition && warnings != nullptr) {
      std::ostringstream os;
      os << name_ << " is ill-conditioned (condition estimate " << 1.0 / rc << ")";
      warnings->push_back(os.str());
    }
  }

  template <class Rhs>
  CMatrix solve(const Rhs& b) const {
    if (b.rows() == 0 || lu_.rows() == 0) return CMatrix::Zero(b.rows(), b.cols());
    return lu_.solve(b);
  }

private:
  std::string name_;
  Eigen::PartialPivLU<CMatrix> lu_;
};

void check_jt(const AdmittanceSet& adm, const CVector& jt) {
  adm.check_dimensions();
  if (jt.size() != adm.n_feeds()) {
    throw InvalidInput("excitation has " + std::to_string(jt.size()) + " entries for " +
                       std::to_string(adm.n_feeds()) + " RF chains");
  }
}

void fill_voltages(NetworkSolution& sol, const AdmittanceSet& adm) {
  sol.vs = -(adm.ys.asDiagonal() * sol.js);
  sol.vr = -(adm.yr.asDiagonal() * sol.jr);
}

} // namespace

Excitation Excitation::transmit_currents(CVector jt) {
  return {ExcitationMode::TransmitCurrents, std::move(jt), 0.0};
}

Excitation Excitation::feed_currents(CVector j) {
  return {ExcitationMode::FeedCurrents, std::move(j), 0.0};
}

Excitation Excitation::supplied(double watts, CVector weights) {
  return {ExcitationMode::SuppliedPower, std::move(weights), watts};
}

CMatrix rf_chain_admittance(const AdmittanceSet& adm) {
  adm.check_dimensions();
  const Factor A(adm.Ys() + adm.Yss, "Y_s + Y_ss", nullptr);
  return adm.Ytt - adm.Yst.transpose() * A.solve(adm.Yst);
}

CMatrix rf_chain_admittance_bilateral(const AdmittanceSet& adm) {
  adm.check_dimensions();
  const Factor U(adm.Yr() + adm.Yrr, "Y_r + Y_rr", nullptr);
  const CMatrix loaded = adm.Ys() + adm.Yss - adm.Yrs.transpose() * U.solve(adm.Yrs);
  const Factor A(loaded, "Y_s + Y_ss - Y_rs^T (Y_r + Y_rr)^{-1} Y_rs", nullptr);
  return adm.Ytt - adm.Yst.transpose() * A.solve(adm.Yst);
}

NetworkSolution solve_bilateral(const AdmittanceSet& adm, const CVector& jt) {
  check_jt(adm, jt);
  NetworkSolution sol;
  sol.coupling = Coupling::Bilateral;
  sol.jt = jt;
  const Factor A(adm.Ys() + adm.Yss, "Y_s + Y_ss", &sol.warnings);
  const CVector drive = A.solve(adm.Yst * jt);    // (Y_s + Y_ss)^{-1} Y_st j_t
  const CMatrix back = A.solve(adm.Yrs.transpose()); // (Y_s + Y_ss)^{-1} Y_rs^T
  const Factor outer(adm.Yr() + adm.Yrr - adm.Yrs * back,
                     "Y_r + Y_rr - Y_rs (Y_s + Y_ss)^{-1} Y_rs^T", &sol.warnings);
  sol.jr = outer.solve(adm.Yrs * drive);
  sol.js = -(drive + back * sol.jr);
  sol.vt = adm.Ytt * jt + adm.Yst.transpose() * sol.js;
  sol.Yp = rf_chain_admittance_bilateral(adm);
  fill_voltages(sol, adm);
  return sol;
}

NetworkSolution solve_unilateral(const AdmittanceSet& adm, const CVector& jt) {
  check_jt(adm, jt);
  NetworkSolution sol;
  sol.coupling = Coupling::Unilateral;
  sol.jt = jt;
  const Factor A(adm.Ys() + adm.Yss, "Y_s + Y_ss", &sol.warnings);
  const CVector drive = A.solve(adm.Yst * jt);
  const Factor users(adm.Yr() + adm.Yrr, "Y_r + Y_rr", &sol.warnings);
  sol.jr = users.solve(adm.Yrs * drive);
  sol.js = -drive;
  sol.Yp = adm.Ytt - adm.Yst.transpose() * A.solve(adm.Yst);
  sol.vt = sol.Yp * jt;
  fill_voltages(sol, adm);
  return sol;
}

PortResponse reflection_transmission(const CMatrix& Yp, const CVector& jt, double Y0) {
  if (Yp.rows() != jt.size() || Yp.cols() != jt.size()) {
    throw InvalidInput("reflection_transmission: Y_p and j_t dimensions disagree");
  }
  if (!(Y0 > 0.0)) throw InvalidInput("reflection_transmission: Y_0 must be positive");
  PortResponse out;
  const CVector vt = Yp * jt;
  out.Yin.resize(jt.size());
  out.gamma.resize(jt.size());
  for (Eigen::Index n = 0; n < jt.size(); ++n) {
    if (jt[n] == cplx(0.0, 0.0)) {
      throw InvalidInput("input admittance of port " + std::to_string(n) +
                         " is undefined: (j_t)_n = 0");
    }
    out.Yin[n] = vt[n] / jt[n];
    const cplx den = out.Yin[n] + Y0;
    if (std::abs(den) <= 1e-14 * Y0) {
      throw NumericalError("port " + std::to_string(n) + ": Y_in = -Y_0, reflection is infinite");
    }
    out.gamma[n] = -(out.Yin[n] - Y0) / den;
    if (std::abs(out.gamma[n]) >= 1.0) {
      std::ostringstream os;
      os << "port " << n << ": |Gamma| = " << std::abs(out.gamma[n])
         << " >= 1 (active or ill-posed configuration)";
      out.warnings.push_back(os.str());
    }
  }
  out.transmission = CVector::Ones(jt.size()) + out.gamma;
  return out;
}

void attach_ports(NetworkSolution& sol, double Y0) {
  PortResponse p = reflection_transmission(sol.Yp, sol.jt, Y0);
  sol.Yin = std::move(p.Yin);
  sol.gamma = std::move(p.gamma);
  sol.transmission = std::move(p.transmission);
  sol.j = sol.jt.cwiseQuotient(sol.transmission);
  sol.warnings.insert(sol.warnings.end(), p.warnings.begin(), p.warnings.end());
}

Powers powers(const NetworkSolution& sol, const AdmittanceSet& adm) {
  if (sol.gamma.size() != sol.jt.size()) {
    throw InvalidInput("powers: ports are not attached (no reflection coefficients)");
  }
  Powers p;
  p.Pt = 0.5 * sol.jt.dot(sol.vt).real(); // dot() conjugates the left operand
  for (Eigen::Index n = 0; n < sol.jt.size(); ++n) {
    const double port = 0.5 * (std::conj(sol.jt[n]) * sol.vt[n]).real();
    p.Ps += port / (1.0 - std::norm(sol.gamma[n]));
  }
  p.Pr = 0.5 * sol.jr.cwiseAbs2().cwiseProduct(adm.yr.real());
  p.Pd = 0.5 * sol.js.cwiseAbs2().cwiseProduct(adm.ys.real());
  return p;
}

NetworkSolution solve(const AdmittanceSet& adm, const Excitation& exc, double Y0,
                      Coupling coupling) {
  adm.check_dimensions();
  const Eigen::Index N = adm.n_feeds();
  if (exc.values.size() != N) {
    throw InvalidInput("excitation has " + std::to_string(exc.values.size()) + " entries for " +
                       std::to_string(N) + " RF chains");
  }
  auto run = [&](const CVector& jt) {
    NetworkSolution s =
        coupling == Coupling::Bilateral ? solve_bilateral(adm, jt) : solve_unilateral(adm, jt);
    attach_ports(s, Y0);
    const Powers p = powers(s, adm);
    s.Pt = p.Pt;
    s.Ps = p.Ps;
    s.Pr = p.Pr;
    s.Pd = p.Pd;
    return s;
  };
  // j_t = T j with T_nn = 2 Y_0 / (Y_in,n + Y_0) is the same as (Y_p + Y_0 I) j_t = 2 Y_0 j.
  auto feed_to_transmit = [&](const CVector& j) {
    if (!(Y0 > 0.0)) throw InvalidInput("connector Y_0 must be positive");
    const CMatrix Yp = coupling == Coupling::Bilateral ? rf_chain_admittance_bilateral(adm)
                                                       : rf_chain_admittance(adm);
    const Factor F(Yp + Y0 * CMatrix::Identity(N, N), "Y_p + Y_0 I", nullptr);
    return CVector(F.solve(2.0 * Y0 * j));
  };

  switch (exc.mode) {
  case ExcitationMode::TransmitCurrents:
    return run(exc.values);
  case ExcitationMode::FeedCurrents:
    return run(feed_to_transmit(exc.values));
  case ExcitationMode::SuppliedPower: {
    if (!(exc.supplied_power > 0.0)) throw InvalidInput("supplied power target must be positive");
    const double norm = exc.values.norm();
    if (!(norm > 0.0)) throw InvalidInput("excitation weights must not all be zero");
    const CVector w = exc.values / norm;
    const NetworkSolution unit = run(feed_to_transmit(w));
    if (!(unit.Ps > 0.0)) {
      throw NumericalError("supplied power of the unit excitation is not positive");
    }
    const double rho = std::sqrt(exc.supplied_power / unit.Ps);
    return run(feed_to_transmit(rho * w));
  }
  }
  throw InvalidInput("unknown excitation mode");
}

std::vector<LorentzianResponse> lorentzian_sweep(double re_yss, std::span<const double> c_values) {
  if (!(re_yss > 0.0)) {
    throw InvalidInput("Lorentzian response needs Re{Y_ss} > 0 (passivity)");
  }
  std::vector<LorentzianResponse> out;
  out.reserve(c_values.size());
  for (double c : c_values) {
    LorentzianResponse r;
    r.c = c;
    r.response = 1.0 / cplx(re_yss, c);
    r.phase = -std::atan(c / re_yss);
    r.magnitude = 1.0 / std::hypot(c, re_yss);
    out.push_back(r);
  }
  return out;
}

CMatrix equivalent_channel(const AdmittanceSet& adm, Coupling coupling) {
  adm.check_dimensions();
  const Factor A(adm.Ys() + adm.Yss, "Y_s + Y_ss", nullptr);
  const CMatrix forward = adm.Yrs * A.solve(adm.Yst);
  if (coupling == Coupling::Unilateral) {
    const Factor U(adm.Yr() + adm.Yrr, "Y_r + Y_rr", nullptr);
    return U.solve(forward);
  }
  const Factor U(adm.Yr() + adm.Yrr - adm.Yrs * A.solve(adm.Yrs.transpose()),
                 "Y_r + Y_rr - Y_rs (Y_s + Y_ss)^{-1} Y_rs^T", nullptr);
  return U.solve(forward);
}

CVector transmit_signal(const CMatrix& H, const CMatrix& B, const CVector& x,
                        double noise_variance, std::uint64_t seed) {
  if (H.cols() != B.rows() || B.cols() != x.size()) {
    throw InvalidInput("transmit_signal: dimensions of H_eq, B and x do not chain");
  }
  if (noise_variance < 0.0) throw InvalidInput("transmit_signal: noise variance must be >= 0");
  CVector y = H * (B * x);
  if (noise_variance > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_variance / 2.0));
    for (Eigen::Index m = 0; m < y.size(); ++m) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      y[m] += cplx(re, im);
    }
  }
  return y;
}

} // namespace dmasim
