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

#include "dmasim/admittance.hpp"

#include <cmath>
#include <sstream>

#include "dmasim/error.hpp"
#include "dmasim/greens.hpp"
#include "dmasim/quadrature.hpp"

namespace dmasim {
namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<Wavenumbers> guide_wavenumbers(const Scenario& sc) {
  std::vector<Wavenumbers> out;
  out.reserve(sc.waveguides.size());
  for (const WaveguideSpec& g : sc.waveguides) out.push_back(derive_wavenumbers(sc.medium, g));
  return out;
}

greens::GuidePoint feed_point(const Scenario& sc, std::size_t n) {
  return greens::GuidePoint::from(sc.feed_position(n) - sc.waveguides[n].origin);
}

void check_distinct(const Vec3& p, const Vec3& q, double scale, const char* what, std::size_t i,
                    std::size_t j) {
  if ((p - q).norm() <= 1e-12 * scale) {
    std::ostringstream os;
    os << what << " " << i << " and " << j << " share the same position";
    throw InvalidInput(os.str());
  }
}

} // namespace

void AdmittanceSet::check_dimensions() const {
  const Eigen::Index N = Ytt.rows();
  const Eigen::Index L = Yss.rows();
  const Eigen::Index M = Yrr.rows();
  auto expect = [](bool ok, const char* what) {
    if (!ok) throw InvalidInput(std::string("admittance set: inconsistent dimensions of ") + what);
  };
  expect(Ytt.cols() == N, "Y_tt");
  expect(Yss.cols() == L, "Y_ss");
  expect(Yrr.cols() == M, "Y_rr");
  expect(Yst.rows() == L && Yst.cols() == N, "Y_st");
  expect(Yrs.rows() == M && Yrs.cols() == L, "Y_rs");
  expect(ys.size() == L, "Y_s");
  expect(yr.size() == M, "Y_r");
}

CMatrix build_Yst(const Scenario& sc) {
  const auto kns = guide_wavenumbers(sc);
  const double omega_eps = sc.medium.omega() * sc.medium.permittivity;
  CMatrix Y = CMatrix::Zero(idx(sc.n_elements()), idx(sc.n_waveguides()));
  for (std::size_t l = 0; l < sc.n_elements(); ++l) {
    const std::size_t n = sc.elements[l].waveguide;
    const auto r = greens::GuidePoint::from(sc.local_position(l));
    Y(idx(l), idx(n)) =
        I * omega_eps * greens::waveguide_zz(r, feed_point(sc, n), sc.waveguides[n], kns[n]);
  }
  return Y;
}

CMatrix build_Ytt(const Scenario& sc) {
  const auto kns = guide_wavenumbers(sc);
  const double omega_mu = sc.medium.omega() * sc.medium.permeability;
  CMatrix Y = CMatrix::Zero(idx(sc.n_waveguides()), idx(sc.n_waveguides()));
  for (std::size_t n = 0; n < sc.n_waveguides(); ++n) {
    const WaveguideSpec& g = sc.waveguides[n];
    const cplx kx = kns[n].kx;
    const double s = std::sin(pi * g.feed_z / g.width_a);
    const cplx sin_kS = std::sin(kx * g.length_S);
    if (std::abs(sin_kS) < 1e-12 * std::max(1.0, std::abs(std::cos(kx * g.length_S)))) {
      std::ostringstream os;
      os << "Y_tt: waveguide " << n << " is resonant (kx S / pi = " << (kx * g.length_S / pi).real()
         << ")";
      throw NumericalError(os.str());
    }
    Y(idx(n), idx(n)) = -2.0 * I * kx * s * s * std::cos(kx * g.length_S) /
                        (g.width_a * g.height_b * omega_mu * sin_kS);
  }
  return Y;
}

CMatrix build_Yss(const Scenario& sc) {
  const auto kns = guide_wavenumbers(sc);
  const double k = sc.medium.wavenumber();
  const double omega_eps = sc.medium.omega() * sc.medium.permittivity;
  const double lambda = sc.medium.wavelength();
  const Eigen::Index L = idx(sc.n_elements());
  CMatrix Y(L, L);
  for (std::size_t l = 0; l < sc.n_elements(); ++l) {
    const std::size_t n = sc.elements[l].waveguide;
    const auto rl = greens::GuidePoint::from(sc.local_position(l));
    // Self term: real air part k w eps/(3 pi) plus the guide term at x -> x'.
    Y(idx(l), idx(l)) = k * omega_eps / (3.0 * pi) +
                        I * omega_eps * greens::waveguide_zz(rl, rl, sc.waveguides[n], kns[n]);
    for (std::size_t q = l + 1; q < sc.n_elements(); ++q) {
      const Vec3& pl = sc.elements[l].position;
      const Vec3& pq = sc.elements[q].position;
      check_distinct(pl, pq, lambda, "elements", l, q);
      cplx g = 2.0 * greens::freespace_zz(pl, pq, k);
      if (sc.elements[q].waveguide == n) {
        g += greens::waveguide_zz(rl, greens::GuidePoint::from(sc.local_position(q)),
                                  sc.waveguides[n], kns[n]);
      }
      Y(idx(l), idx(q)) = I * omega_eps * g;
      Y(idx(q), idx(l)) = Y(idx(l), idx(q));
    }
  }
  return Y;
}

CMatrix build_Yrr(const Scenario& sc) {
  const double k = sc.medium.wavenumber();
  const double omega_eps = sc.medium.omega() * sc.medium.permittivity;
  const Eigen::Index M = idx(sc.n_users());
  CMatrix Y(M, M);
  for (std::size_t m = 0; m < sc.n_users(); ++m) {
    Y(idx(m), idx(m)) = k * omega_eps / (6.0 * pi);
    for (std::size_t q = m + 1; q < sc.n_users(); ++q) {
      check_distinct(sc.users[m], sc.users[q], sc.medium.wavelength(), "users", m, q);
      Y(idx(m), idx(q)) = I * omega_eps * greens::freespace_zz(sc.users[m], sc.users[q], k);
      Y(idx(q), idx(m)) = Y(idx(m), idx(q));
    }
  }
  return Y;
}

CMatrix build_Yrs_los(const Scenario& sc, bool farfield) {
  const double k = sc.medium.wavenumber();
  const double omega_eps = sc.medium.omega() * sc.medium.permittivity;
  CMatrix Y(idx(sc.n_users()), idx(sc.n_elements()));
  for (std::size_t m = 0; m < sc.n_users(); ++m) {
    for (std::size_t l = 0; l < sc.n_elements(); ++l) {
      const Vec3& ru = sc.users[m];
      const Vec3& re = sc.elements[l].position;
      const cplx g = farfield ? greens::freespace_zz_farfield(ru, re, k)
                              : greens::freespace_zz(ru, re, k);
      Y(idx(m), idx(l)) = -I * omega_eps * 2.0 * g;
    }
  }
  return Y;
}

AdmittanceSet build_admittances(const Scenario& sc, const AdmittanceOptions& opts) {
  AdmittanceSet adm;
  adm.Ytt = build_Ytt(sc);
  adm.Yst = build_Yst(sc);
  adm.Yss = build_Yss(sc);
  adm.Yrr = build_Yrr(sc);
  adm.Yrs = build_Yrs_los(sc, opts.farfield_los);
  adm.ys = sc.element_terminations;
  adm.yr = sc.user_loads;
  adm.check_dimensions();
  return adm;
}

double connector_admittance_auto(const Scenario& sc, std::size_t guide) {
  const WaveguideSpec& g = sc.waveguides.at(guide);
  const Wavenumbers kn = derive_wavenumbers(sc.medium, g);
  if (kn.kx.imag() != 0.0 || !(kn.kx.real() > 0.0)) {
    throw InvalidInput("connector Y_0 = auto needs a propagating TE10 mode (guide at or below cutoff)");
  }
  const double s = std::sin(pi * g.feed_z / g.width_a);
  return 2.0 * kn.kx.real() * s * s /
         (g.width_a * g.height_b * sc.medium.omega() * sc.medium.permeability);
}

double dipole_on_plane_gain(double theta, double phi) {
  if (phi < 0.0 || phi > pi) return 0.0;
  const double s = std::sin(theta);
  return 3.0 * s * s;
}

double quadrature_admittance_oracle(const GainPattern& gain, const Vec3& r_n, const Vec3& r_m,
                                    double k, const OracleOptions& opts) {
  const Vec3 d = r_n - r_m;
  auto integrand = [&](double theta, double phi) {
    const Vec3 rhat(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                    std::cos(theta));
    return gain(theta, phi) / (4.0 * pi) * std::exp(-I * k * rhat.dot(d));
  };
  auto evaluate = [&](int order) {
    // Two phi panels so a pattern that switches off at phi = pi is integrated
    // piecewise-smoothly.
    return quad::integrate_sphere_patch(integrand, order, 0.0, pi) +
           quad::integrate_sphere_patch(integrand, order, pi, 2.0 * pi);
  };
  cplx prev = evaluate(opts.initial_order);
  for (int order = 2 * opts.initial_order; order <= opts.max_order; order *= 2) {
    const cplx next = evaluate(order);
    if (std::abs(next - prev) <= opts.tolerance) return next.real();
    prev = next;
  }
  std::ostringstream os;
  os << "admittance quadrature oracle did not reach tolerance " << opts.tolerance
     << " by order " << opts.max_order << " (last estimate " << prev.real() << ")";
  throw NumericalError(os.str());
}

} // namespace dmasim
