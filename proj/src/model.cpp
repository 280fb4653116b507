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

#include "dmasim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dmasim/error.hpp"

namespace dmasim {

double Medium::wavenumber() const {
  return omega() * std::sqrt(permittivity * permeability);
}

double Medium::impedance() const { return std::sqrt(permeability / permittivity); }

Medium Medium::vacuum(double frequency_hz) {
  Medium m;
  m.frequency_hz = frequency_hz;
  return m;
}

cplx axial_wavenumber(double k, double kc) {
  const cplx root = std::sqrt(cplx(k * k - kc * kc, 0.0));
  return {root.real(), -root.imag()};
}

Wavenumbers derive_wavenumbers(const Medium& medium, const WaveguideSpec& guide) {
  if (!(medium.frequency_hz > 0.0) || !(medium.permittivity > 0.0) ||
      !(medium.permeability > 0.0)) {
    throw InvalidInput("medium: frequency, permittivity and permeability must be positive");
  }
  if (!(guide.width_a > 0.0) || !(guide.height_b > 0.0) || !(guide.length_S > 0.0)) {
    throw InvalidInput("waveguide: a, b and S must be positive");
  }
  Wavenumbers kn;
  kn.k = medium.wavenumber();
  kn.kx = axial_wavenumber(kn.k, pi / guide.width_a);
  const double lambda = medium.wavelength();
  kn.single_mode = guide.width_a > lambda / 2.0 && guide.width_a < lambda &&
                   guide.height_b < lambda / 2.0;
  return kn;
}

Vec3 Scenario::local_position(std::size_t element) const {
  return elements.at(element).position - guide_of(element).origin;
}

Vec3 Scenario::feed_position(std::size_t guide) const {
  const WaveguideSpec& g = waveguides.at(guide);
  return g.origin + Vec3(0.0, g.height_b / 2.0, g.feed_z);
}

Vec3 Scenario::array_center() const {
  Vec3 c = Vec3::Zero();
  if (elements.empty()) return c;
  for (const Element& e : elements) c += e.position;
  return c / static_cast<double>(elements.size());
}

void validate_scenario(Scenario& sc) {
  if (sc.waveguides.empty()) throw InvalidInput("scenario: at least one waveguide is required");
  const double lambda = sc.medium.wavelength();
  const double tol = 1e-9 * lambda;

  for (std::size_t n = 0; n < sc.waveguides.size(); ++n) {
    const WaveguideSpec& g = sc.waveguides[n];
    const Wavenumbers kn = derive_wavenumbers(sc.medium, g);
    if (!(g.feed_z > 0.0 && g.feed_z < g.width_a)) {
      std::ostringstream os;
      os << "waveguide " << n << ": feed_z = " << g.feed_z << " m must lie in (0, a = "
         << g.width_a << ")";
      throw InvalidInput(os.str());
    }
    if (!kn.single_mode) {
      std::ostringstream os;
      os << "waveguide " << n << ": single-mode condition lambda/2 < a < lambda, b < lambda/2 "
         << "violated (a = " << g.width_a / lambda << " lambda, b = " << g.height_b / lambda
         << " lambda)";
      sc.warnings.push_back(os.str());
    }
  }

  std::vector<double> nearest(sc.waveguides.size(), std::numeric_limits<double>::infinity());
  for (std::size_t l = 0; l < sc.elements.size(); ++l) {
    const Element& e = sc.elements[l];
    if (e.waveguide >= sc.waveguides.size()) {
      throw InvalidInput("element " + std::to_string(l) + ": waveguide index out of range");
    }
    const WaveguideSpec& g = sc.waveguides[e.waveguide];
    const Vec3 p = sc.local_position(l);
    std::ostringstream os;
    os << "element " << l << " (waveguide " << e.waveguide << ") at local (" << p.x() << ", "
       << p.y() << ", " << p.z() << ") m ";
    if (std::abs(p.y() - g.height_b) > tol) {
      throw InvalidInput(os.str() + "is not on the upper wall y = b");
    }
    if (!(p.x() > 0.0 && p.x() < g.length_S)) {
      throw InvalidInput(os.str() + "lies outside 0 < x < S");
    }
    if (!(p.z() > 0.0 && p.z() < g.width_a)) {
      throw InvalidInput(os.str() + "lies outside 0 < z < a");
    }
    nearest[e.waveguide] = std::min(nearest[e.waveguide], p.x());
  }
  for (std::size_t n = 0; n < nearest.size(); ++n) {
    if (std::isfinite(nearest[n]) && nearest[n] < lambda) {
      std::ostringstream os;
      os << "waveguide " << n << ": nearest element is " << nearest[n] / lambda
         << " lambda from the feed (< 1 lambda); feed near-field is not modelled";
      sc.warnings.push_back(os.str());
    }
  }

  for (std::size_t m = 0; m < sc.users.size(); ++m) {
    if (!(sc.users[m].y() > 0.0)) {
      throw InvalidInput("user " + std::to_string(m) + ": must be in front of the surface (y > 0)");
    }
  }
  if (static_cast<std::size_t>(sc.element_terminations.size()) != sc.elements.size()) {
    throw InvalidInput("terminations: Y_s has " + std::to_string(sc.element_terminations.size()) +
                       " entries for " + std::to_string(sc.elements.size()) + " elements");
  }
  if (static_cast<std::size_t>(sc.user_loads.size()) != sc.users.size()) {
    throw InvalidInput("users: Y_r has " + std::to_string(sc.user_loads.size()) +
                       " entries for " + std::to_string(sc.users.size()) + " users");
  }
  if (!(sc.connector_admittance > 0.0)) {
    throw InvalidInput("connector: Y_0 must be positive");
  }
}

} // namespace dmasim
