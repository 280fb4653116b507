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

#include <complex>
#include <numbers>

namespace dmasim {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double vacuum_permeability = 4.0 * pi * 1e-7;   // H/m

// Free-space wave impedance used in gain evaluation (approximation of
// sqrt(mu0/eps0) customary in antenna texts).
inline constexpr double eta_120pi = 120.0 * pi;

} // namespace dmasim
