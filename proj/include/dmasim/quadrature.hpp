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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace dmasim::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [lo, hi] (Newton iteration on P_n).
Rule gauss_legendre(int n, double lo, double hi);

/// Integrates f(theta, phi) sin(theta) over theta in [0, pi], phi in [phi_lo, phi_hi]
/// with an order x order Gauss-Legendre product rule.
template <class F>
auto integrate_sphere_patch(F&& f, int order, double phi_lo, double phi_hi) {
  const Rule th = gauss_legendre(order, 0.0, std::numbers::pi);
  const Rule ph = gauss_legendre(order, phi_lo, phi_hi);
  decltype(f(0.0, 0.0)) sum{};
  for (std::size_t i = 0; i < th.nodes.size(); ++i) {
    const double s = std::sin(th.nodes[i]);
    decltype(f(0.0, 0.0)) row{};
    for (std::size_t j = 0; j < ph.nodes.size(); ++j) {
      row += ph.weights[j] * f(th.nodes[i], ph.nodes[j]);
    }
    sum += th.weights[i] * s * row;
  }
  return sum;
}

} // namespace dmasim::quad
