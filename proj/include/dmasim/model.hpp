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

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmasim/constants.hpp"

namespace dmasim {

using Vec3 = Eigen::Vector3d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Homogeneous lossless medium at a single frequency.
struct Medium {
  double frequency_hz = 0.0;
  double permittivity = vacuum_permittivity; // F/m
  double permeability = vacuum_permeability; // H/m

  double omega() const { return 2.0 * pi * frequency_hz; }
  double wavenumber() const;
  double wavelength() const { return 2.0 * pi / wavenumber(); }
  /// Intrinsic impedance sqrt(mu/eps).
  double impedance() const;

  static Medium vacuum(double frequency_hz);
};

/// Rectangular guide embedded in the ground plane. Local frame: x runs along
/// the guide (feed at x = 0, short at x = S), y is the height, z the width.
/// `origin` is the global position of the local (0, 0, 0) corner.
struct WaveguideSpec {
  double width_a = 0.0;
  double height_b = 0.0;
  double length_S = 0.0;
  double feed_z = 0.0;
  Vec3 origin = Vec3::Zero();
};

struct Wavenumbers {
  double k = 0.0;
  cplx kx{0.0, 0.0};
  /// False when the guide violates lambda/2 < a < lambda or b < lambda/2.
  bool single_mode = true;
};

/// Axial propagation constant for a mode with transverse cutoff `kc`, using
/// the branch Re{sqrt(k^2 - kc^2)} - i Im{sqrt(k^2 - kc^2)}: real above
/// cutoff, negative imaginary (decaying) below it.
cplx axial_wavenumber(double k, double kc);

Wavenumbers derive_wavenumbers(const Medium& medium, const WaveguideSpec& guide);

struct Element {
  std::size_t waveguide = 0;
  Vec3 position = Vec3::Zero(); // global frame, on the guide's upper wall
};

struct Scenario {
  Medium medium;
  std::vector<WaveguideSpec> waveguides;
  std::vector<Element> elements;
  std::vector<Vec3> users;
  CVector element_terminations; // Y_s, one per element
  CVector user_loads;           // Y_r, one per user
  double connector_admittance = 0.0;
  /// Non-fatal findings from construction (single-mode violation, feed too
  /// close to the first element, ...).
  std::vector<std::string> warnings;

  std::size_t n_waveguides() const { return waveguides.size(); }
  std::size_t n_elements() const { return elements.size(); }
  std::size_t n_users() const { return users.size(); }

  const WaveguideSpec& guide_of(std::size_t element) const {
    return waveguides.at(elements.at(element).waveguide);
  }
  /// Element position in its guide's local frame.
  Vec3 local_position(std::size_t element) const;
  /// RF feed position of guide n in the global frame (x = 0, y = b/2, z = feed_z).
  Vec3 feed_position(std::size_t guide) const;
  /// Centroid of all element positions.
  Vec3 array_center() const;
};

/// Checks the scenario invariants; throws InvalidInput on hard violations and
/// appends soft findings to `scenario.warnings`.
void validate_scenario(Scenario& scenario);

} // namespace dmasim
