// Copyright 2026 The mpmp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "mpmp/errors.hpp"
#include "mpmp/numerics.hpp"
#include "mpmp/random.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXd random_spd(int dim, mpmp::Rng& rng) {
  Eigen::MatrixXd b(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) b(i, j) = rng.normal();
  }
  // b*b^T computed via explicit symmetric product so the result is exactly
  // symmetric bitwise.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int c = 0; c < dim; ++c) {
    m.noalias() += b.col(c) * b.col(c).transpose();
  }
  m += 0.1 * Eigen::MatrixXd::Identity(dim, dim);
  return m;
}

Eigen::VectorXd random_unit(int dim, mpmp::Rng& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return v / v.norm();
}

}  // namespace

TEST_CASE("SymMatrix accepts symmetric matrices and rejects the rest") {
  CHECK_NOTHROW(mpmp::SymMatrix(Eigen::MatrixXd::Identity(3, 3)));
  CHECK_NOTHROW(mpmp::SymMatrix::identity(1));

  Eigen::MatrixXd skew(2, 2);
  skew << 1.0, 2.0, -2.0, 1.0;
  CHECK_THROWS_AS(mpmp::SymMatrix(skew), mpmp::InvalidInputError);

  Eigen::MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(mpmp::SymMatrix(rect), mpmp::InvalidInputError);

  Eigen::MatrixXd nan2 = Eigen::MatrixXd::Identity(2, 2);
  nan2(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(mpmp::SymMatrix(nan2), mpmp::InvalidInputError);

  // Asymmetry within 1e-12 relative to the largest magnitude is accepted.
  Eigen::MatrixXd nearly = Eigen::MatrixXd::Identity(2, 2) * 1e6;
  nearly(0, 1) = 1e-8;
  nearly(1, 0) = 0.0;
  CHECK_NOTHROW(mpmp::SymMatrix(nearly));
}

TEST_CASE("UnitVector enforces unit norm within 1e-10") {
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
  e1[0] = 1.0;
  CHECK_NOTHROW(mpmp::UnitVector(e1));
  CHECK_THROWS_AS(mpmp::UnitVector(2.0 * e1), mpmp::InvalidInputError);
  CHECK_THROWS_AS(mpmp::UnitVector::normalized(Eigen::VectorXd::Zero(4)),
                  mpmp::InvalidInputError);
  const mpmp::UnitVector u = mpmp::UnitVector::normalized(3.0 * e1);
  CHECK(u.data() == e1);
}

TEST_CASE("min_eigvec matches hand-computed spectra") {
  SECTION("identity: all eigenvalues equal, convention fixes the vector") {
    const mpmp::MinEig r = mpmp::min_eigvec(mpmp::SymMatrix::identity(3));
    CHECK_THAT(r.value, WithinRel(1.0, 1e-12));
    // First significant component positive.
    int first = 0;
    while (std::abs(r.vector.data()[first]) <= 1e-9) ++first;
    CHECK(r.vector.data()[first] > 0.0);
  }
  SECTION("diag(3,1,2) -> (1, e2)") {
    Eigen::VectorXd d(3);
    d << 3.0, 1.0, 2.0;
    const mpmp::MinEig r = mpmp::min_eigvec(mpmp::SymMatrix::diagonal(d));
    CHECK_THAT(r.value, WithinRel(1.0, 1e-12));
    CHECK_THAT(r.vector.data()[1], WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::abs(r.vector.data()[0]), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(r.vector.data()[2]), WithinAbs(0.0, 1e-12));
  }
  SECTION("rank-one perturbation along e1 leaves e2 as the minimum") {
    Eigen::MatrixXd m = 0.1 * Eigen::MatrixXd::Identity(2, 2);
    m(0, 0) += 1.0;
    const mpmp::MinEig r = mpmp::min_eigvec(mpmp::SymMatrix(m));
    CHECK_THAT(r.value, WithinRel(0.1, 1e-12));
    CHECK_THAT(r.vector.data()[1], WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("min_eigvec properties on random symmetric matrices") {
  mpmp::Rng rng(mpmp::mix64(2024));
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform(0.0, 7.0));
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j <= i; ++j) {
        a(i, j) = rng.normal();
        a(j, i) = a(i, j);
      }
    }
    const mpmp::SymMatrix m(a);
    const mpmp::MinEig r = mpmp::min_eigvec(m);
    const Eigen::VectorXd v = r.vector.data();

    // Rayleigh quotient equals the eigenvalue.
    const double quad = v.dot(a * v);
    CHECK_THAT(quad, WithinAbs(r.value, 1e-8 * (1.0 + std::abs(r.value))));
    // Residual of the eigenpair.
    CHECK((a * v - r.value * v).norm() <= 1e-8 * (1.0 + a.norm()));
    // No random unit vector does better.
    for (int probe = 0; probe < 100; ++probe) {
      const Eigen::VectorXd u = random_unit(dim, rng);
      CHECK(quad <= u.dot(a * u) + 1e-10 * (1.0 + std::abs(quad)));
    }
    // Determinism: same bits in, same bits out.
    const mpmp::MinEig r2 = mpmp::min_eigvec(m);
    CHECK(r2.value == r.value);
    CHECK(r2.vector.data() == v);
  }
}

TEST_CASE("min_eigvec sign convention picks the first significant component") {
  Eigen::VectorXd d(3);
  d << 2.0, 0.5, 1.0;
  const mpmp::MinEig r = mpmp::min_eigvec(mpmp::SymMatrix::diagonal(d));
  CHECK(r.vector.data()[1] > 0.0);  // e2 reported with positive entry
}

TEST_CASE("solve_spd solves hand-checked systems") {
  SECTION("identity") {
    Eigen::VectorXd b(4);
    b << 1.0, -2.0, 3.0, 0.5;
    CHECK(mpmp::solve_spd(mpmp::SymMatrix::identity(4), b) == b);
  }
  SECTION("diag(2,4)") {
    Eigen::VectorXd d(2);
    d << 2.0, 4.0;
    Eigen::VectorXd b(2);
    b << 2.0, 4.0;
    const Eigen::VectorXd x = mpmp::solve_spd(mpmp::SymMatrix::diagonal(d), b);
    CHECK_THAT(x[0], WithinRel(1.0, 1e-12));
    CHECK_THAT(x[1], WithinRel(1.0, 1e-12));
  }
  SECTION("rank-one update, solution e1/2 by hand") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 0) += 1.0;  // I + e1 e1^T
    Eigen::VectorXd b(2);
    b << 1.0, 0.0;
    const Eigen::VectorXd x = mpmp::solve_spd(mpmp::SymMatrix(m), b);
    CHECK_THAT(x[0], WithinRel(0.5, 1e-12));
    CHECK_THAT(std::abs(x[1]), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("solve_spd round-trip residual stays below 1e-9 relative") {
  mpmp::Rng rng(mpmp::mix64(7));
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform(0.0, 16.0));
    const Eigen::MatrixXd a = random_spd(dim, rng);
    Eigen::VectorXd b(dim);
    for (int i = 0; i < dim; ++i) b[i] = rng.normal();
    const Eigen::VectorXd x = mpmp::solve_spd(mpmp::SymMatrix(a), b);
    const double rel =
        (a * x - b).norm() / (a.norm() * x.norm() + b.norm());
    CHECK(rel < 1e-9);
  }
}

TEST_CASE("solve_spd rejects singular and indefinite matrices") {
  CHECK_THROWS_AS(
      mpmp::solve_spd(mpmp::SymMatrix(Eigen::MatrixXd::Zero(3, 3)),
                      Eigen::VectorXd::Ones(3)),
      mpmp::SingularMatrixError);
  Eigen::VectorXd d(2);
  d << 1.0, -1.0;
  CHECK_THROWS_AS(mpmp::solve_spd(mpmp::SymMatrix::diagonal(d),
                                  Eigen::VectorXd::Ones(2)),
                  mpmp::SingularMatrixError);
}

TEST_CASE("bisect_root finds scalar roots") {
  SECTION("linear") {
    const double x =
        mpmp::bisect_root([](double t) { return t - 2.0; }, 0.0, 5.0, 1e-12);
    CHECK_THAT(x, WithinAbs(2.0, 1e-11));
  }
  SECTION("sqrt(2)") {
    const double x = mpmp::bisect_root([](double t) { return t * t - 2.0; },
                                       0.0, 2.0, 1e-9);
    CHECK_THAT(x, WithinAbs(std::sqrt(2.0), 1e-8));
  }
  SECTION("packet-success fixed point for M=2, root of 2x = e^x - 1") {
    const auto g = [](double x) {
      const double e = std::exp(-x);
      return 2.0 * x * e - (1.0 - e);
    };
    const double x = mpmp::bisect_root(g, 0.1, 50.0, 1e-12);
    CHECK_THAT(x, WithinAbs(1.2564, 2e-4));
    CHECK(std::abs(2.0 * x - (std::exp(x) - 1.0)) < 1e-9);
  }
  SECTION("endpoint roots are returned directly") {
    const double x =
        mpmp::bisect_root([](double t) { return t; }, 0.0, 1.0, 1e-12);
    CHECK(x == 0.0);
  }
}

TEST_CASE("bisect_root rejects bad input") {
  const auto f = [](double t) { return t + 10.0; };
  CHECK_THROWS_AS(mpmp::bisect_root(f, 0.0, 1.0, 1e-12), mpmp::BracketError);
  CHECK_THROWS_AS(mpmp::bisect_root(f, 1.0, 0.0, 1e-12),
                  mpmp::InvalidInputError);
  CHECK_THROWS_AS(mpmp::bisect_root(f, 0.0, 1.0, 0.0),
                  mpmp::InvalidInputError);
  CHECK_THROWS_AS(
      mpmp::bisect_root(f, std::numeric_limits<double>::quiet_NaN(), 1.0,
                        1e-12),
      mpmp::InvalidInputError);
}

TEST_CASE("Rng draws are deterministic and lie in documented ranges") {
  mpmp::Rng a(42);
  mpmp::Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  mpmp::Rng c(1);
  double mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) mean += c.exponential(2.0);
  mean /= n;
  CHECK_THAT(mean, WithinAbs(2.0, 0.05));
  CHECK_THROWS_AS(c.exponential(0.0), mpmp::InvalidInputError);

  // substream: distinct tags decorrelate, equal inputs agree.
  CHECK(mpmp::substream(1, 2, 3, 4) == mpmp::substream(1, 2, 3, 4));
  CHECK(mpmp::substream(1, 2, 3, 4) != mpmp::substream(1, 2, 4, 3));
}
