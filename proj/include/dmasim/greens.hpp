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

#include <Eigen/Dense>

#include "dmasim/model.hpp"

namespace dmasim::greens {

/// Point in a waveguide's local frame (0 <= x <= S, 0 <= y <= b, 0 <= z <= a).
struct GuidePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static GuidePoint from(const Vec3& local) { return {local.x(), local.y(), local.z()}; }
};

/// Mode window of the modal sum: m = 1..max_m, n = 0..max_n.
struct ModalTruncation {
  int max_m = 1;
  int max_n = 0;
};

// None of these regularize r == r_src; self terms are handled where the
// admittances are assembled.

/// zz component of the TE10-only Green's function of a guide shorted at x = S.
cplx waveguide_zz(const GuidePoint& r, const GuidePoint& src, const WaveguideSpec& guide,
                  const Wavenumbers& kn);

/// Partial modal sum of the full waveguide Green's function. Each (m, n) term
/// uses its own axial wavenumber with the same branch rule as TE10; the
/// weighting (2 - delta0) takes delta0 = 1 when m == 1 or n == 1.
cplx waveguide_zz_modal(const GuidePoint& r, const GuidePoint& src, const WaveguideSpec& guide,
                        const Wavenumbers& kn, ModalTruncation trunc);

/// Single (m, n) term of the modal sum.
cplx waveguide_zz_mode(const GuidePoint& r, const GuidePoint& src, const WaveguideSpec& guide,
                       double k, int m, int n);

/// zz component of the free-space Green's function (exact, all near-field terms).
cplx freespace_zz(const Vec3& r, const Vec3& src, double k);

/// Far-field form e^{-ikR} sin^2(theta) / (4 pi R), theta the polar angle of r - src.
cplx freespace_zz_farfield(const Vec3& r, const Vec3& src, double k);

/// Full free-space dyad g [(1 - i/kR - 1/(kR)^2) I - (1 - 3i/kR - 3/(kR)^2) u u^T],
/// g = e^{-ikR}/(4 pi R), u = (r - src)/R.
Eigen::Matrix3cd freespace_dyadic(const Vec3& r, const Vec3& src, double k);

} // namespace dmasim::greens
