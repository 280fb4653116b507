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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dmasim/model.hpp"

namespace dmasim {

/// Per-user covariance of the spatially correlated Rayleigh channel.
struct CovarianceStack {
  std::vector<CMatrix> sigma;       // one L x L matrix per user
  std::vector<double> path_variance; // sigma_alpha^2 per user
  double polarization_loss = 1.0;    // L_p in (0, 1]
};

/// sigma_alpha^2 = (2 w eps / (4 pi R))^2 L_p for a user at distance R.
double path_gain_variance(const Medium& medium, double distance, double polarization_loss);

/// Closed-form correlation between two surface elements separated by `d`
/// (d in the surface plane), per unit path variance:
///   (4 pi / 3) [(1 + 3 dz^2/(R^4 k^2) - (1 + dz^2 k^2)/(R^2 k^2)) sin(kR)/(kR)
///               + (1/(kR) - 3 dz^2/(k R^3)) cos(kR)/(kR)],
/// with the R -> 0 limit 8 pi / 9.
double surface_correlation(const Vec3& d, double k);

/// Sigma_m for every user. `distances` holds one distance per user (or a
/// single value broadcast to all users). A scenario without users gets one
/// matrix per entry of `distances`. Elements must be coplanar on the surface.
CovarianceStack rayleigh_covariance(const Scenario& sc, std::span<const double> distances,
                                    double polarization_loss = 1.0);

/// One Rayleigh realization of Y_rs (M x L): row m = Sigma_m^{1/2} w with
/// w ~ CN(0, I). Sigma^{1/2} comes from a Hermitian eigendecomposition;
/// eigenvalues within -1e-9 lambda_max of zero are clipped, more negative ones
/// raise NumericalError.
CMatrix sample_rayleigh(const CovarianceStack& cov, std::uint64_t seed);

/// Same, drawing from a caller-owned engine (for multi-sample runs).
CMatrix sample_rayleigh(const CovarianceStack& cov, std::mt19937_64& rng);

/// Hermitian square root with the clipping policy above.
CMatrix covariance_sqrt(const CMatrix& sigma);

/// One propagation path of the finite-ray model.
struct Ray {
  cplx alpha;      // complex path gain
  double theta;    // polar departure angle
  double phi;      // azimuth departure angle, [0, pi] (front half-space)
  double vartheta; // polar arrival angle
};

/// Draws N_p paths: theta ~ sin(theta)/2, phi ~ U[0, pi], vartheta ~ sin/2 and
/// alpha ~ CN(0, 2 pi sigma_alpha^2). The 2 pi factor makes the large-N_p
/// covariance equal the closed form whose angular integral runs over
/// d(theta) d(phi) without the 1/(2 pi) density normalization.
std::vector<Ray> draw_rays(int n_paths, double path_variance, std::mt19937_64& rng);

/// y = sum_n alpha_n / sqrt(N_p) sin(theta_n) sin(vartheta_n) a(theta_n, phi_n),
/// a_l = e^{i k(theta, phi) . r_l}.
CVector ray_sum(std::span<const Vec3> positions, double k, std::span<const Ray> rays);

/// Finite-ray realization of Y_rs for every user (distances as in
/// rayleigh_covariance).
CMatrix ray_sum_channel(const Scenario& sc, std::span<const double> distances,
                        double polarization_loss, int n_paths, std::uint64_t seed);

/// Distances of each scenario user from the array centroid.
std::vector<double> user_distances(const Scenario& sc);

} // namespace dmasim
