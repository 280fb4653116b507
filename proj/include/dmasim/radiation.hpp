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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dmasim/network.hpp"

namespace dmasim {

/// H_z samples inside one guide.
struct FieldProbe {
  std::vector<Vec3> positions; // global frame
  CVector Hz;
};

/// Fundamental-mode H_z at `positions` (global frame, inside guide
/// `guide_index`), superposing the guide's feed (j_t) and its elements (j_s).
FieldProbe field_in_guide(const NetworkSolution& sol, const Scenario& sc, std::size_t guide_index,
                          std::span<const Vec3> positions);

/// `samples` points along z = a/2, y = b/2 from x = 0 to x = S.
std::vector<Vec3> guide_center_line(const Scenario& sc, std::size_t guide_index, int samples);

enum class GainReference {
  Supplied,    // realized gain, referenced to P_s
  Transmitted, // referenced to P_t
  Radiated,    // directivity, referenced to P_rad
};

struct FarFieldOptions {
  double distance = 0.0; // m; <= 0 selects 1e4 wavelengths
  double eta = eta_120pi;
  GainReference reference = GainReference::Supplied;
  double reference_power = 0.0; // W; > 0 overrides `reference`
  int radiated_power_order = 64; // used when reference == Radiated
};

/// Diagonal of the box spanned by the element positions.
double aperture_diagonal(const Scenario& sc);

/// A warning when R is below ten aperture diagonals (near-field terms no
/// longer negligible), otherwise nothing.
std::optional<std::string> farfield_distance_warning(const Scenario& sc, double R);

/// Radiated magnetic field at distance R from the array centroid in direction
/// (theta, phi): h = -i w eps sum_l 2 G_air(r, r_l) z (j_s)_l.
Eigen::Vector3cd farfield_H(const NetworkSolution& sol, const Scenario& sc, double theta,
                            double phi, double R);

/// G = 4 pi R^2 eta h^H h / (2 P_ref).
double gain(const NetworkSolution& sol, const Scenario& sc, double theta, double phi,
            const FarFieldOptions& opts = {});

enum class CutKind { FixedTheta, FixedPhi };

/// FixedTheta sweeps phi over [0, pi]; FixedPhi sweeps theta over [0, pi].
/// The fixed angle must keep the cut in the front half-space.
std::vector<std::pair<double, double>> gain_cut(const NetworkSolution& sol, const Scenario& sc,
                                                CutKind kind, double angle, int samples,
                                                const FarFieldOptions& opts = {});

struct GainGrid {
  RVector theta; // interior points of (0, pi)
  RVector phi;   // interior points of (0, pi)
  Eigen::MatrixXd gain; // theta x phi, linear
  double distance = 0.0;
  double reference_power = 0.0;
  double eta = eta_120pi;
  std::vector<std::string> warnings;
};

GainGrid gain_grid(const NetworkSolution& sol, const Scenario& sc, int n_theta, int n_phi,
                   const FarFieldOptions& opts = {});

/// Poynting flux through the front hemisphere, order x order Gauss-Legendre.
/// Throws NumericalError when the estimate moves by more than 0.5 % on
/// doubling the order.
double radiated_power(const NetworkSolution& sol, const Scenario& sc, int order,
                      double eta = eta_120pi, double distance = 0.0);

/// Hemisphere integral of G/(4 pi), i.e. P_rad / P_ref.
double hemisphere_gain_integral(const NetworkSolution& sol, const Scenario& sc, int order,
                                const FarFieldOptions& opts = {});

/// P_ref resolved from the options (and the solution).
double reference_power(const NetworkSolution& sol, const Scenario& sc, const FarFieldOptions& opts);

} // namespace dmasim
