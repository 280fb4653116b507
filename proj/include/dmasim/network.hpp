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
#include <span>
#include <string>
#include <vector>

#include "dmasim/admittance.hpp"

namespace dmasim {

enum class Coupling {
  Unilateral, // users' back-coupling Y_rs (Y_s + Y_ss)^{-1} Y_rs^T dropped
  Bilateral,
};

enum class ExcitationMode {
  TransmitCurrents, // j_t entering the guides is prescribed
  FeedCurrents,     // j supplied by the RF chains; j_t = T j
  SuppliedPower,    // total P_s and relative complex weights of j
};

struct Excitation {
  ExcitationMode mode = ExcitationMode::TransmitCurrents;
  CVector values;              // j_t, j, or weights (normalized internally)
  double supplied_power = 0.0; // W, SuppliedPower mode only

  static Excitation transmit_currents(CVector jt);
  static Excitation feed_currents(CVector j);
  static Excitation supplied(double watts, CVector weights);
};

struct NetworkSolution {
  Coupling coupling = Coupling::Unilateral;
  CVector jt, vt; // N
  CVector js, vs; // L
  CVector jr, vr; // M
  CVector j;      // RF-chain currents, j_t = T j (empty before ports are attached)
  CMatrix Yp;     // port admittance, v_t = Y_p j_t
  CVector Yin;    // active input admittance per port
  CVector gamma;  // diagonal of Gamma
  CVector transmission; // diagonal of T = I + Gamma
  double Pt = 0.0;
  double Ps = 0.0;
  RVector Pr; // per user
  RVector Pd; // per element
  std::vector<std::string> warnings;
};

/// Y_p = Y_tt - Y_st^T (Y_s + Y_ss)^{-1} Y_st.
CMatrix rf_chain_admittance(const AdmittanceSet& adm);

/// Port admittance including the users' back-coupling:
/// Y_tt - Y_st^T (Y_s + Y_ss - Y_rs^T (Y_r + Y_rr)^{-1} Y_rs)^{-1} Y_st.
CMatrix rf_chain_admittance_bilateral(const AdmittanceSet& adm);

/// Currents and voltages for a given j_t with the full user back-coupling.
NetworkSolution solve_bilateral(const AdmittanceSet& adm, const CVector& jt);

/// Same under the far-field (unilateral) assumption.
NetworkSolution solve_unilateral(const AdmittanceSet& adm, const CVector& jt);

struct PortResponse {
  CVector Yin;
  CVector gamma;
  CVector transmission;
  std::vector<std::string> warnings;
};

/// Active reflection at each RF chain, Gamma_nn = -(Y_in,n - Y_0)/(Y_in,n + Y_0).
/// Gamma depends on the whole excitation, not on the DMA alone.
PortResponse reflection_transmission(const CMatrix& Yp, const CVector& jt, double Y0);

/// Attaches Y_in, Gamma, T and j = T^{-1} j_t to a solved network.
void attach_ports(NetworkSolution& sol, double Y0);

struct Powers {
  double Pt = 0.0; // Re{j_t^H v_t}/2
  double Ps = 0.0; // sum_n p_t,n / (1 - |Gamma_nn|^2)
  RVector Pr;
  RVector Pd;
};

/// Requires attached ports (Gamma).
Powers powers(const NetworkSolution& sol, const AdmittanceSet& adm);

/// Full pipeline: resolve the excitation to j_t, solve, attach ports, fill powers.
NetworkSolution solve(const AdmittanceSet& adm, const Excitation& exc, double Y0,
                      Coupling coupling = Coupling::Unilateral);

/// Scattering response of a single lossless-terminated element,
/// theta = (Re{Y_ss} + i c)^{-1}.
struct LorentzianResponse {
  double c = 0.0;
  double phase = 0.0;     // rad, in (-pi/2, pi/2)
  double magnitude = 0.0;
  cplx response;
};

std::vector<LorentzianResponse> lorentzian_sweep(double re_yss, std::span<const double> c_values);

/// H_eq = (Y_r + Y_rr)^{-1} Y_rs (Y_s + Y_ss)^{-1} Y_st, or the bilateral
/// counterpart (Y_r + Y_rr - Y_rs (Y_s + Y_ss)^{-1} Y_rs^T)^{-1} Y_rs (Y_s + Y_ss)^{-1} Y_st.
CMatrix equivalent_channel(const AdmittanceSet& adm, Coupling coupling = Coupling::Unilateral);

/// y = H_eq B x + n with n ~ CN(0, noise_variance I).
CVector transmit_signal(const CMatrix& H, const CMatrix& B, const CVector& x,
                        double noise_variance, std::uint64_t seed);

} // namespace dmasim
