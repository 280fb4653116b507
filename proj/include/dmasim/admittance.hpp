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

#include <functional>

#include "dmasim/model.hpp"

namespace dmasim {

/// Blocks of the multiport admittance matrix
///
///   [v_t]   [Y_tt   Y_st^T  0     ] [j_t]
///   [v_s] = [Y_st   Y_ss    Y_rs^T] [j_s]
///   [v_r]   [0      Y_rs    Y_rr  ] [j_r]
///
/// plus the diagonal terminations Y_s (elements) and Y_r (users), stored as
/// vectors. The RF-chain/user block is zero for canonical minimum-scattering
/// elements.
struct AdmittanceSet {
  CMatrix Ytt; // N x N, diagonal
  CMatrix Yst; // L x N
  CMatrix Yss; // L x L
  CMatrix Yrr; // M x M
  CMatrix Yrs; // M x L
  CVector ys;  // L
  CVector yr;  // M

  Eigen::Index n_feeds() const { return Ytt.rows(); }
  Eigen::Index n_elements() const { return Yss.rows(); }
  Eigen::Index n_users() const { return Yrr.rows(); }

  CMatrix Ys() const { return ys.asDiagonal(); }
  CMatrix Yr() const { return yr.asDiagonal(); }

  /// Throws InvalidInput if any block disagrees with (N, L, M).
  void check_dimensions() const;
};

struct AdmittanceOptions {
  /// Use the e^{-ikR} sin^2(theta)/(4 pi R) form for the LoS channel.
  bool farfield_los = false;
};

/// Feed-to-element coupling through the guide; zero across different guides.
CMatrix build_Yst(const Scenario& sc);

/// Feed self-admittances (isolated RF chains, off-diagonal zero).
CMatrix build_Ytt(const Scenario& sc);

/// Element coupling: i w eps (2 G_air + G_guide) on the same guide, i w eps 2 G_air
/// across guides. The diagonal keeps only k w eps / (3 pi) of the air self term;
/// the divergent imaginary air part is left to the termination (Y_s^eq).
CMatrix build_Yss(const Scenario& sc);

/// User coupling in free space; diagonal k w eps / (6 pi) (real part only, as for Y_ss).
CMatrix build_Yrr(const Scenario& sc);

/// LoS channel (Y_rs)_{m,l} = -i w eps 2 G_air(r_m, r_l).
CMatrix build_Yrs_los(const Scenario& sc, bool farfield);

AdmittanceSet build_admittances(const Scenario& sc, const AdmittanceOptions& opts = {});

/// Y_0 matched to the feed self-admittance of a semi-infinite guide,
/// 2 kx sin^2(pi feed_z / a) / (a b w mu). Requires a propagating TE10 mode.
double connector_admittance_auto(const Scenario& sc, std::size_t guide = 0);

/// Element gain pattern (theta, phi) -> linear gain.
using GainPattern = std::function<double(double theta, double phi)>;

/// 3 sin^2(theta) in the front half-space (0 <= phi <= pi), zero behind the plane.
double dipole_on_plane_gain(double theta, double phi);

struct OracleOptions {
  double tolerance = 1e-11; // absolute, on the normalized admittance
  int initial_order = 32;
  int max_order = 1024;
};

/// Normalized mutual admittance Re{Y_nm / Y_nn} of minimum-scattering
/// elements from the pattern integral
///   int_0^{2pi} int_0^{pi} G/(4 pi) e^{-i k rhat . (r_n - r_m)} sin(theta) dtheta dphi.
/// The order is doubled until two successive estimates agree; NumericalError
/// (with the last estimate) otherwise.
double quadrature_admittance_oracle(const GainPattern& gain, const Vec3& r_n, const Vec3& r_m,
                                    double k, const OracleOptions& opts = {});

} // namespace dmasim
