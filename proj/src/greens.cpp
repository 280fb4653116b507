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

#include "dmasim/greens.hpp"

#include <cmath>
#include <sstream>

#include "dmasim/error.hpp"

namespace dmasim::greens {
namespace {

// Relative threshold on |sin(kx S)| below which the shorted guide is treated
// as a resonant cavity.
constexpr double kResonanceTol = 1e-12;

cplx checked_sin(cplx kx, double S) {
  const cplx s = std::sin(kx * S);
  const double scale = std::max(1.0, std::abs(std::cos(kx * S)));
  if (std::abs(s) < kResonanceTol * scale) {
    std::ostringstream os;
    os << "waveguide cavity resonance: sin(kx S) = 0 at kx S / pi = " << (kx * S / pi).real();
    throw NumericalError(os.str());
  }
  return s;
}

double separation(const Vec3& r, const Vec3& src, const char* what) {
  const double R = (r - src).norm();
  if (!(R > 0.0)) {
    throw NumericalError(std::string(what) + ": observation and source points coincide (R = 0)");
  }
  return R;
}

// Longitudinal standing-wave factor shared by every mode.
cplx standing_wave(cplx kx, double x, double xs, double S) {
  return std::cos(kx * (xs + x - S)) + std::cos(kx * (S - std::abs(x - xs)));
}

} // namespace

cplx waveguide_zz(const GuidePoint& r, const GuidePoint& src, const WaveguideSpec& guide,
                  const Wavenumbers& kn) {
  const double a = guide.width_a;
  const double b = guide.height_b;
  const double S = guide.length_S;
  const cplx kx = kn.kx;
  const double transverse = std::sin(pi * r.z / a) * std::sin(pi * src.z / a);
  return -kx * transverse / (a * b * kn.k * kn.k) * standing_wave(kx, r.x, src.x, S) /
         checked_sin(kx, S);
}

cplx waveguide_zz_mode(const GuidePoint& r, const GuidePoint& src, const WaveguideSpec& guide,
                       double k, int m, int n) {
  const double a = guide.width_a;
  const double b = guide.height_b;
  const double S = guide.length_S;
  const double kc = std::hypot(m * pi / a, n * pi / b);
  const cplx kx = axial_wavenumber(k, kc);
  const double delta0 = (m == 1 || n == 1) ? 1.0 : 0.0;

  const double transverse = std::sin(m * pi * r.z / a) * std::cos(n * pi * r.y / b) *
                            std::sin(m * pi * src.z / a) * std::cos(n * pi * src.y / b);
  const double mm = static_cast<double>(m) * m;
  const double nn = static_cast<double>(n) * n;
  // (a^2 k^2 n^2 + b^2 kx^2 m^2) / (kx (a^2 n^2 + b^2 m^2)); for n = 0 this is b^2 kx m^2 / (b^2 m^2)
  // and stays finite at kx -> 0.
  const cplx weight =
      n == 0 ? kx : (a * a * k * k * nn + b * b * kx * kx * mm) / (kx * (a * a * nn + b * b * mm));
  return -(2.0 - delta0) * transverse * weight / (a * b * k * k) *
         standing_wave(kx, r.x, src.x, S) / checked_sin(kx, S);
}

cplx waveguide_zz_modal(const GuidePoint& r, const GuidePoint& src, const WaveguideSpec& guide,
                        const Wavenumbers& kn, ModalTruncation trunc) {
  if (trunc.max_m < 1 || trunc.max_n < 0) {
    throw InvalidInput("modal truncation requires max_m >= 1 and max_n >= 0");
  }
  cplx sum{0.0, 0.0};
  for (int m = 1; m <= trunc.max_m; ++m) {
    for (int n = 0; n <= trunc.max_n; ++n) {
      sum += waveguide_zz_mode(r, src, guide, kn.k, m, n);
    }
  }
  return sum;
}

cplx freespace_zz(const Vec3& r, const Vec3& src, double k) {
  const double R = separation(r, src, "free-space Green's function");
  const double dz = r.z() - src.z();
  const double R2 = R * R;
  const double near = R2 - 3.0 * dz * dz;
  const cplx bracket = (R2 - dz * dz) / R2 - I * near / (R2 * R * k) - near / (R2 * R2 * k * k);
  return bracket * std::exp(-I * k * R) / (4.0 * pi * R);
}

cplx freespace_zz_farfield(const Vec3& r, const Vec3& src, double k) {
  const double R = separation(r, src, "far-field Green's function");
  const double cos_theta = (r.z() - src.z()) / R;
  return std::exp(-I * k * R) * (1.0 - cos_theta * cos_theta) / (4.0 * pi * R);
}

Eigen::Matrix3cd freespace_dyadic(const Vec3& r, const Vec3& src, double k) {
  const double R = separation(r, src, "free-space dyadic Green's function");
  const Vec3 u = (r - src) / R;
  const double kr = k * R;
  const cplx g = std::exp(-I * k * R) / (4.0 * pi * R);
  const cplx diag = 1.0 - I / kr - 1.0 / (kr * kr);
  const cplx radial = 1.0 - 3.0 * I / kr - 3.0 / (kr * kr);
  Eigen::Matrix3cd G = diag * Eigen::Matrix3cd::Identity();
  G -= radial * (u * u.transpose()).cast<cplx>();
  return g * G;
}

} // namespace dmasim::greens
