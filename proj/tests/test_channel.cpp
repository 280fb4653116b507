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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dmasim/channel.hpp"
#include "dmasim/error.hpp"
#include "dmasim/quadrature.hpp"
#include "support.hpp"

using namespace dmasim;
using testing::json;

namespace {

const double omega = 2 * pi * 10e9;
const double eps0 = 8.8541878128e-12;

// (2/3) * integral of sin^3(t) exp(-i k rhat.d) over t in [0, pi], p in [0, pi],
// i.e. the unit-variance correlation between two points on the surface.
double correlation_by_quadrature(const Vec3& d, double k, int order) {
  const quad::Rule t = quad::gauss_legendre(order, 0.0, pi);
  const quad::Rule p = quad::gauss_legendre(order, 0.0, pi);
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const double st = std::sin(t.nodes[i]);
    for (std::size_t j = 0; j < p.nodes.size(); ++j) {
      const Vec3 r(st * std::cos(p.nodes[j]), st * std::sin(p.nodes[j]), std::cos(t.nodes[i]));
      s += t.weights[i] * p.weights[j] * st * st * st * std::exp(-I * k * r.dot(d));
    }
  }
  return (2.0 / 3.0 * s).real();
}

Scenario line_of_elements(std::vector<double> xs) {
  json offsets = json::array();
  for (double x : xs) offsets.push_back(x);
  json c = testing::single_guide_config(offsets);
  c["terminations"]["Y_s"] = 1.0;
  return build_scenario(c);
}

CMatrix sample_covariance(const std::vector<CVector>& draws) {
  const Eigen::Index L = draws.front().size();
  CMatrix C = CMatrix::Zero(L, L);
  for (const CVector& y : draws) C += y * y.adjoint();
  return C / static_cast<double>(draws.size());
}

} // namespace

TEST_CASE("path-gain variance") {
  const Medium m = Medium::vacuum(10e9);
  const double R = 7.0;
  const double amp = 2 * omega * eps0 / (4 * pi * R);
  CHECK(path_gain_variance(m, R, 1.0) == doctest::Approx(amp * amp).epsilon(1e-13));
  CHECK(path_gain_variance(m, R, 0.5) == doctest::Approx(0.5 * amp * amp).epsilon(1e-13));
  CHECK_THROWS_AS(path_gain_variance(m, 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(path_gain_variance(m, 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(path_gain_variance(m, 1.0, 1.5), InvalidInput);
}

TEST_CASE("covariance diagonal") {
  const Scenario sc = testing::table2();
  const double R = 12.0;
  const std::vector<double> d{R};
  const CovarianceStack cov = rayleigh_covariance(sc, d, 1.0);
  REQUIRE(cov.sigma.size() == 1);
  const double var = path_gain_variance(sc.medium, R, 1.0);
  for (Eigen::Index l = 0; l < 10; ++l) {
    CHECK(std::abs(cov.sigma[0](l, l) - 8 * pi * var / 9) <= 1e-9 * 8 * pi * var / 9);
  }
  CHECK((cov.sigma[0] - cov.sigma[0].adjoint()).norm() == 0.0);
}

TEST_CASE("closed-form correlation against quadrature") {
  const double k = Medium::vacuum(10e9).wavenumber();
  const double l = 2 * pi / k;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double dx = (0.05 + (3.0 - 0.05) * i / 9.0) * l;
      const double dz = (0.05 + (3.0 - 0.05) * j / 9.0) * l;
      const Vec3 d(dx, 0.0, dz);
      const double q = correlation_by_quadrature(d, k, 160);
      worst = std::max(worst, std::abs(surface_correlation(d, k) - q) / std::abs(q));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("correlation depends on the separation axis") {
  const double k = Medium::vacuum(10e9).wavenumber();
  const double s = 0.4 * 2 * pi / k;
  const double along_x = surface_correlation(Vec3(s, 0, 0), k);
  const double along_z = surface_correlation(Vec3(0, 0, s), k);
  CHECK(std::abs(along_x - along_z) > 0.05 * std::abs(along_x));
  CHECK(std::abs(along_x - correlation_by_quadrature(Vec3(s, 0, 0), k, 80)) < 1e-9);
  CHECK(std::abs(along_z - correlation_by_quadrature(Vec3(0, 0, s), k, 80)) < 1e-9);
}

TEST_CASE("small-separation branch") {
  const double k = Medium::vacuum(10e9).wavenumber();
  for (double kR : {2e-4, 9e-4, 1.1e-3, 5e-3}) {
    const Vec3 d = kR / k * Vec3(0.6, 0.0, 0.8);
    CHECK(std::abs(surface_correlation(d, k) - correlation_by_quadrature(d, k, 40)) < 1e-10);
  }
  CHECK(surface_correlation(Vec3::Zero(), k) == doctest::Approx(8 * pi / 9).epsilon(1e-15));
}

TEST_CASE("covariance requires a planar surface") {
  Scenario sc = testing::table2();
  sc.elements[3].position.y() += 1e-3;
  const std::vector<double> d{10.0};
  CHECK_THROWS_AS(rayleigh_covariance(sc, d, 1.0), InvalidInput);
  const std::vector<double> wrong{1.0, 2.0};
  sc = testing::table2();
  sc.users = {Vec3(0, 1, 0), Vec3(0, 2, 0), Vec3(0, 3, 0)};
  CHECK_THROWS_AS(rayleigh_covariance(sc, wrong, 1.0), InvalidInput);
}

TEST_CASE("Rayleigh sampling") {
  const Scenario sc = line_of_elements({0.02, 0.035, 0.05, 0.08});
  const std::vector<double> d{5.0};
  const CovarianceStack cov = rayleigh_covariance(sc, d, 1.0);

  SUBCASE("fixed seed is reproducible") {
    CHECK((sample_rayleigh(cov, 42) - sample_rayleigh(cov, 42)).norm() == 0.0);
    CHECK((sample_rayleigh(cov, 42) - sample_rayleigh(cov, 43)).norm() > 0.0);
  }
  SUBCASE("sample covariance converges") {
    std::mt19937_64 rng(9);
    std::vector<CVector> draws;
    for (int i = 0; i < 100000; ++i) draws.push_back(sample_rayleigh(cov, rng).row(0).transpose());
    const CMatrix C = sample_covariance(draws);
    const double scale = cov.sigma[0](0, 0).real();
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(std::abs(C(i, j) - cov.sigma[0](i, j)) < 0.03 * scale);
      }
    }
  }
  SUBCASE("identity covariance gives independent entries") {
    CovarianceStack iid;
    iid.sigma.push_back(CMatrix::Identity(4, 4) * 2.5);
    std::mt19937_64 rng(1);
    std::vector<CVector> draws;
    for (int i = 0; i < 50000; ++i) draws.push_back(sample_rayleigh(iid, rng).row(0).transpose());
    const CMatrix C = sample_covariance(draws);
    for (Eigen::Index i = 0; i < 4; ++i) {
      CHECK(C(i, i).real() == doctest::Approx(2.5).epsilon(0.03));
      for (Eigen::Index j = 0; j < i; ++j) {
        CHECK(std::abs(C(i, j)) / std::sqrt(C(i, i).real() * C(j, j).real()) < 0.02);
      }
    }
  }
}

TEST_CASE("matrix square root") {
  CMatrix A(2, 2);
  A << 2.0, cplx(0.5, 0.5), cplx(0.5, -0.5), 1.0;
  const CMatrix S = covariance_sqrt(A);
  CHECK((S * S - A).norm() < 1e-14);

  CMatrix rank1 = CMatrix::Ones(3, 3);
  const CMatrix R = covariance_sqrt(rank1);
  CHECK((R * R - rank1).norm() < 1e-12);

  CMatrix indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -0.1;
  CHECK_THROWS_AS(covariance_sqrt(indefinite), NumericalError);
}

TEST_CASE("ray-sum single path") {
  std::mt19937_64 rng(4);
  const auto rays = draw_rays(1, 1.0, rng);
  const Vec3 p(0.01, 0.0, 0.02);
  const std::vector<Vec3> one{p};
  const CVector y = ray_sum(one, 200.0, rays);
  const Ray& r = rays[0];
  CHECK(std::abs(y[0]) ==
        doctest::Approx(std::abs(r.alpha) * std::sin(r.theta) * std::sin(r.vartheta)).epsilon(1e-14));
  CHECK_THROWS_AS(draw_rays(0, 1.0, rng), InvalidInput);
}

TEST_CASE("ray-sum coincident elements are fully correlated") {
  std::mt19937_64 rng(8);
  const auto rays = draw_rays(50, 1.0, rng);
  const std::vector<Vec3> pos{Vec3(0.01, 0, 0.02), Vec3(0.01, 0, 0.02)};
  const CVector y = ray_sum(pos, 200.0, rays);
  CHECK(std::abs(y[0] - y[1]) == 0.0);
}

TEST_CASE("ray-sum covariance matches the closed form") {
  const Scenario sc = line_of_elements({0.03, 0.04, 0.055});
  const std::vector<double> d{3.0};
  const CovarianceStack cov = rayleigh_covariance(sc, d, 1.0);
  std::vector<CVector> draws;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    draws.push_back(ray_sum_channel(sc, d, 1.0, 10000, 1000 + s).row(0).transpose());
  }
  const CMatrix C = sample_covariance(draws);
  const double scale = cov.sigma[0].diagonal().real().maxCoeff();
  CHECK((C - cov.sigma[0]).cwiseAbs().maxCoeff() < 0.05 * scale);
}

TEST_CASE("user distances are measured from the array centroid") {
  Scenario sc = testing::table2();
  const Vec3 c = sc.array_center();
  sc.users = {c + Vec3(0, 3.0, 0), c + Vec3(4.0, 3.0, 0)};
  const auto d = user_distances(sc);
  CHECK(d[0] == doctest::Approx(3.0));
  CHECK(d[1] == doctest::Approx(5.0));
}
