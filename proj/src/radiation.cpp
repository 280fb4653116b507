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

#include "dmasim/radiation.hpp"

#include <cmath>
#include <sstream>

#include "dmasim/error.hpp"
#include "dmasim/greens.hpp"
#include "dmasim/quadrature.hpp"

namespace dmasim {
namespace {

double resolve_distance(const Scenario& sc, double requested) {
  return requested > 0.0 ? requested : 1e4 * sc.medium.wavelength();
}

Vec3 direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double flux_density(const Eigen::Vector3cd& h) { return h.squaredNorm(); }

double hemisphere_flux(const NetworkSolution& sol, const Scenario& sc, int order, double R) {
  auto f = [&](double theta, double phi) {
    return flux_density(farfield_H(sol, sc, theta, phi, R));
  };
  return quad::integrate_sphere_patch(f, order, 0.0, pi);
}

} // namespace

std::vector<Vec3> guide_center_line(const Scenario& sc, std::size_t guide_index, int samples) {
  if (samples < 2) throw InvalidInput("field probe needs at least 2 samples");
  const WaveguideSpec& g = sc.waveguides.at(guide_index);
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double x = g.length_S * i / (samples - 1);
    out.push_back(g.origin + Vec3(x, g.height_b / 2.0, g.width_a / 2.0));
  }
  return out;
}

FieldProbe field_in_guide(const NetworkSolution& sol, const Scenario& sc, std::size_t guide_index,
                          std::span<const Vec3> positions) {
  if (guide_index >= sc.n_waveguides()) throw InvalidInput("field probe: no such waveguide");
  const WaveguideSpec& g = sc.waveguides[guide_index];
  const Wavenumbers kn = derive_wavenumbers(sc.medium, g);
  const double omega_eps = sc.medium.omega() * sc.medium.permittivity;
  const double tol = 1e-12 * sc.medium.wavelength();
  if (sol.jt.size() != static_cast<Eigen::Index>(sc.n_waveguides()) ||
      sol.js.size() != static_cast<Eigen::Index>(sc.n_elements())) {
    throw InvalidInput("field probe: solution does not match the scenario");
  }

  const auto feed = greens::GuidePoint::from(sc.feed_position(guide_index) - g.origin);
  FieldProbe probe;
  probe.positions.assign(positions.begin(), positions.end());
  probe.Hz = CVector::Zero(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Vec3 p = positions[i] - g.origin;
    if (p.x() < -tol || p.x() > g.length_S + tol || p.y() < -tol || p.y() > g.height_b + tol ||
        p.z() < -tol || p.z() > g.width_a + tol) {
      std::ostringstream os;
      os << "field probe: point " << i << " lies outside waveguide " << guide_index;
      throw InvalidInput(os.str());
    }
    const auto r = greens::GuidePoint::from(p);
    cplx h = greens::waveguide_zz(r, feed, g, kn) * sol.jt[static_cast<Eigen::Index>(guide_index)];
    for (std::size_t l = 0; l < sc.n_elements(); ++l) {
      if (sc.elements[l].waveguide != guide_index) continue;
      h += greens::waveguide_zz(r, greens::GuidePoint::from(sc.local_position(l)), g, kn) *
           sol.js[static_cast<Eigen::Index>(l)];
    }
    probe.Hz[static_cast<Eigen::Index>(i)] = -I * omega_eps * h;
  }
  return probe;
}

double aperture_diagonal(const Scenario& sc) {
  if (sc.elements.empty()) return 0.0;
  Vec3 lo = sc.elements.front().position, hi = lo;
  for (const Element& e : sc.elements) {
    lo = lo.cwiseMin(e.position);
    hi = hi.cwiseMax(e.position);
  }
  return (hi - lo).norm();
}

std::optional<std::string> farfield_distance_warning(const Scenario& sc, double R) {
  const double D = aperture_diagonal(sc);
  if (R >= 10.0 * D) return std::nullopt;
  std::ostringstream os;
  os << "far-field distance " << R << " m is below ten aperture diagonals (" << 10.0 * D
     << " m); near-field terms are included but the pattern is not a far-field pattern";
  return os.str();
}

Eigen::Vector3cd farfield_H(const NetworkSolution& sol, const Scenario& sc, double theta,
                            double phi, double R) {
  if (!(R > 0.0)) throw InvalidInput("far field: distance must be positive");
  if (sol.js.size() != static_cast<Eigen::Index>(sc.n_elements())) {
    throw InvalidInput("far field: solution does not match the scenario");
  }
  const double k = sc.medium.wavenumber();
  const double omega_eps = sc.medium.omega() * sc.medium.permittivity;
  const Vec3 r = sc.array_center() + R * direction(theta, phi);
  Eigen::Vector3cd h = Eigen::Vector3cd::Zero();
  for (std::size_t l = 0; l < sc.n_elements(); ++l) {
    const Eigen::Matrix3cd G = greens::freespace_dyadic(r, sc.elements[l].position, k);
    h += 2.0 * G.col(2) * sol.js[static_cast<Eigen::Index>(l)];
  }
  return -I * omega_eps * h;
}

double radiated_power(const NetworkSolution& sol, const Scenario& sc, int order, double eta,
                      double distance) {
  if (order < 2) throw InvalidInput("radiated power: quadrature order must be >= 2");
  const double R = resolve_distance(sc, distance);
  const double scale = 0.5 * eta * R * R;
  const double p = scale * hemisphere_flux(sol, sc, order, R);
  const double check = scale * hemisphere_flux(sol, sc, 2 * order, R);
  if (std::abs(p - check) > 5e-3 * std::abs(check)) {
    std::ostringstream os;
    os << "radiated power not converged at order " << order << ": " << p << " W vs " << check
       << " W at order " << 2 * order;
    throw NumericalError(os.str());
  }
  return p;
}

double reference_power(const NetworkSolution& sol, const Scenario& sc, const FarFieldOptions& opts) {
  double p = opts.reference_power;
  if (!(p > 0.0)) {
    switch (opts.reference) {
    case GainReference::Supplied: p = sol.Ps; break;
    case GainReference::Transmitted: p = sol.Pt; break;
    case GainReference::Radiated:
      p = radiated_power(sol, sc, opts.radiated_power_order, opts.eta, opts.distance);
      break;
    }
  }
  if (!(p > 0.0)) throw InvalidInput("gain: reference power must be positive");
  return p;
}

double gain(const NetworkSolution& sol, const Scenario& sc, double theta, double phi,
            const FarFieldOptions& opts) {
  const double R = resolve_distance(sc, opts.distance);
  const double P = reference_power(sol, sc, opts);
  return 4.0 * pi * R * R * opts.eta * flux_density(farfield_H(sol, sc, theta, phi, R)) / (2.0 * P);
}

std::vector<std::pair<double, double>> gain_cut(const NetworkSolution& sol, const Scenario& sc,
                                                CutKind kind, double angle, int samples,
                                                const FarFieldOptions& opts) {
  if (samples < 2) throw InvalidInput("gain cut needs at least 2 samples");
  if (kind == CutKind::FixedTheta && !(angle >= 0.0 && angle <= pi)) {
    throw InvalidInput("gain cut: theta must lie in [0, pi]");
  }
  if (kind == CutKind::FixedPhi && !(angle >= 0.0 && angle <= pi)) {
    throw InvalidInput("gain cut: phi must lie in [0, pi] (front half-space)");
  }
  FarFieldOptions fixed = opts;
  fixed.reference_power = reference_power(sol, sc, opts);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = pi * i / (samples - 1);
    const double g = kind == CutKind::FixedTheta ? gain(sol, sc, angle, t, fixed)
                                                 : gain(sol, sc, t, angle, fixed);
    out.emplace_back(t, g);
  }
  return out;
}

GainGrid gain_grid(const NetworkSolution& sol, const Scenario& sc, int n_theta, int n_phi,
                   const FarFieldOptions& opts) {
  if (n_theta < 1 || n_phi < 1) throw InvalidInput("gain grid needs positive sizes");
  GainGrid grid;
  grid.distance = resolve_distance(sc, opts.distance);
  if (auto w = farfield_distance_warning(sc, grid.distance)) grid.warnings.push_back(*w);
  grid.eta = opts.eta;
  grid.reference_power = reference_power(sol, sc, opts);
  FarFieldOptions fixed = opts;
  fixed.reference_power = grid.reference_power;
  // Cell centres, so the grid never touches the plane itself.
  grid.theta = RVector::LinSpaced(n_theta, 0.5, n_theta - 0.5) * (pi / n_theta);
  grid.phi = RVector::LinSpaced(n_phi, 0.5, n_phi - 0.5) * (pi / n_phi);
  grid.gain.resize(n_theta, n_phi);
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      grid.gain(i, j) = gain(sol, sc, grid.theta[i], grid.phi[j], fixed);
    }
  }
  return grid;
}

double hemisphere_gain_integral(const NetworkSolution& sol, const Scenario& sc, int order,
                                const FarFieldOptions& opts) {
  FarFieldOptions fixed = opts;
  fixed.reference_power = reference_power(sol, sc, opts);
  auto f = [&](double theta, double phi) { return gain(sol, sc, theta, phi, fixed) / (4.0 * pi); };
  return quad::integrate_sphere_patch(f, order, 0.0, pi);
}

} // namespace dmasim
