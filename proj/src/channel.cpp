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

#include "dmasim/channel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dmasim/error.hpp"

namespace dmasim {
namespace {

std::vector<double> expand_distances(std::span<const double> distances, std::size_t users) {
  if (distances.size() == 1) return std::vector<double>(users, distances[0]);
  if (distances.size() != users) {
    throw InvalidInput("channel: expected one user distance or one per user (" +
                       std::to_string(users) + ")");
  }
  return {distances.begin(), distances.end()};
}

std::vector<Vec3> element_positions(const Scenario& sc) {
  std::vector<Vec3> out;
  out.reserve(sc.n_elements());
  for (const Element& e : sc.elements) out.push_back(e.position);
  return out;
}

CVector standard_complex_normal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    w[i] = {re, im};
  }
  return w;
}

} // namespace

double path_gain_variance(const Medium& medium, double distance, double polarization_loss) {
  if (!(distance > 0.0)) throw InvalidInput("channel: user distance must be positive");
  if (!(polarization_loss > 0.0 && polarization_loss <= 1.0)) {
    throw InvalidInput("channel: polarization loss L_p must lie in (0, 1]");
  }
  const double amp = 2.0 * medium.omega() * medium.permittivity / (4.0 * pi * distance);
  return amp * amp * polarization_loss;
}

double surface_correlation(const Vec3& d, double k) {
  const double R = d.norm();
  const double kR = k * R;
  // Below kR ~ 1e-3 the closed form cancels catastrophically; use the series
  // 8 pi/9 - (4 pi k^2/45)(2 R^2 - dz^2) + O(kR^4), accurate to ~1e-13 there.
  if (kR < 1e-3) {
    return 8.0 * pi / 9.0 - 4.0 * pi * k * k / 45.0 * (2.0 * R * R - d.z() * d.z());
  }
  const double dz2 = d.z() * d.z();
  const double R2 = R * R;
  const double k2 = k * k;
  const double sinc_term =
      (1.0 + 3.0 * dz2 / (R2 * R2 * k2) - (1.0 + dz2 * k2) / (R2 * k2)) * std::sin(kR) / kR;
  const double cos_term = (1.0 / kR - 3.0 * dz2 / (k * R2 * R)) * std::cos(kR) / kR;
  return 4.0 * pi / 3.0 * (sinc_term + cos_term);
}

CovarianceStack rayleigh_covariance(const Scenario& sc, std::span<const double> distances,
                                    double polarization_loss) {
  const std::size_t users = sc.n_users() > 0 ? sc.n_users() : distances.size();
  const auto dist = expand_distances(distances, users);
  const double k = sc.medium.wavenumber();
  const auto pos = element_positions(sc);
  if (!pos.empty()) {
    const double plane = pos.front().y();
    for (std::size_t l = 1; l < pos.size(); ++l) {
      if (std::abs(pos[l].y() - plane) > 1e-9 * sc.medium.wavelength()) {
        throw InvalidInput(
            "rayleigh_covariance: elements are not coplanar; the closed-form covariance only "
            "holds for sources on the surface");
      }
    }
  }
  const auto L = static_cast<Eigen::Index>(pos.size());
  CMatrix unit(L, L);
  for (Eigen::Index s = 0; s < L; ++s) {
    for (Eigen::Index q = s; q < L; ++q) {
      const double c = surface_correlation(pos[static_cast<std::size_t>(s)] -
                                               pos[static_cast<std::size_t>(q)],
                                           k);
      unit(s, q) = c;
      unit(q, s) = c;
    }
  }

  CovarianceStack cov;
  cov.polarization_loss = polarization_loss;
  for (double R : dist) {
    const double var = path_gain_variance(sc.medium, R, polarization_loss);
    cov.path_variance.push_back(var);
    cov.sigma.push_back(var * unit);
  }
  return cov;
}

CMatrix covariance_sqrt(const CMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("covariance eigendecomposition failed");
  }
  Eigen::VectorXd ev = eig.eigenvalues();
  const double top = ev.size() > 0 ? std::max(ev.maxCoeff(), 0.0) : 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-9 * top) {
      std::ostringstream os;
      os << "covariance is not positive semidefinite: eigenvalue " << ev[i]
         << " (largest " << top << ")";
      throw NumericalError(os.str());
    }
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return eig.eigenvectors() * ev.cast<cplx>().asDiagonal() * eig.eigenvectors().adjoint();
}

CMatrix sample_rayleigh(const CovarianceStack& cov, std::mt19937_64& rng) {
  if (cov.sigma.empty()) return CMatrix(0, 0);
  const Eigen::Index L = cov.sigma.front().rows();
  CMatrix Y(static_cast<Eigen::Index>(cov.sigma.size()), L);
  for (std::size_t m = 0; m < cov.sigma.size(); ++m) {
    const CMatrix root = covariance_sqrt(cov.sigma[m]);
    Y.row(static_cast<Eigen::Index>(m)) = (root * standard_complex_normal(L, rng)).transpose();
  }
  return Y;
}

CMatrix sample_rayleigh(const CovarianceStack& cov, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_rayleigh(cov, rng);
}

std::vector<Ray> draw_rays(int n_paths, double path_variance, std::mt19937_64& rng) {
  if (n_paths < 1) throw InvalidInput("ray-sum channel: N_p must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * 2.0 * pi * path_variance));
  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>(n_paths));
  for (int n = 0; n < n_paths; ++n) {
    Ray r;
    // Inverse CDF of sin(t)/2 on [0, pi]: t = acos(1 - 2u).
    r.theta = std::acos(1.0 - 2.0 * unit(rng));
    r.phi = pi * unit(rng);
    r.vartheta = std::acos(1.0 - 2.0 * unit(rng));
    const double re = gauss(rng);
    const double im = gauss(rng);
    r.alpha = {re, im};
    rays.push_back(r);
  }
  return rays;
}

CVector ray_sum(std::span<const Vec3> positions, double k, std::span<const Ray> rays) {
  CVector y = CVector::Zero(static_cast<Eigen::Index>(positions.size()));
  const double norm = 1.0 / std::sqrt(static_cast<double>(rays.size()));
  for (const Ray& r : rays) {
    const Vec3 kvec = k * Vec3(std::sin(r.theta) * std::cos(r.phi),
                               std::sin(r.theta) * std::sin(r.phi), std::cos(r.theta));
    const cplx amp = r.alpha * norm * std::sin(r.theta) * std::sin(r.vartheta);
    for (std::size_t l = 0; l < positions.size(); ++l) {
      y[static_cast<Eigen::Index>(l)] += amp * std::exp(I * kvec.dot(positions[l]));
    }
  }
  return y;
}

CMatrix ray_sum_channel(const Scenario& sc, std::span<const double> distances,
                        double polarization_loss, int n_paths, std::uint64_t seed) {
  const std::size_t users = sc.n_users() > 0 ? sc.n_users() : distances.size();
  const auto dist = expand_distances(distances, users);
  const auto pos = element_positions(sc);
  const double k = sc.medium.wavenumber();
  std::mt19937_64 rng(seed);
  CMatrix Y(static_cast<Eigen::Index>(users), static_cast<Eigen::Index>(pos.size()));
  for (std::size_t m = 0; m < users; ++m) {
    const auto rays =
        draw_rays(n_paths, path_gain_variance(sc.medium, dist[m], polarization_loss), rng);
    Y.row(static_cast<Eigen::Index>(m)) = ray_sum(pos, k, rays).transpose();
  }
  return Y;
}

std::vector<double> user_distances(const Scenario& sc) {
  const Vec3 c = sc.array_center();
  std::vector<double> out;
  out.reserve(sc.n_users());
  for (const Vec3& u : sc.users) out.push_back((u - c).norm());
  return out;
}

} // namespace dmasim
