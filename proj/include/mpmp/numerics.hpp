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

// Small dense real symmetric linear algebra and scalar root finding.
// All arithmetic is double precision. Operations are pure functions on
// value inputs and safe to call concurrently.

#ifndef MPMP_NUMERICS_HPP_
#define MPMP_NUMERICS_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mpmp/errors.hpp"

namespace mpmp {

inline constexpr double kSymmetryRelTol = 1e-12;   // SymMatrix asymmetry bound
inline constexpr double kUnitNormTol = 1e-10;      // UnitVector norm bound
inline constexpr double kSignificantComponent = 1e-9;  // eigvec sign anchor
inline constexpr double kSpdResidualRelTol = 1e-9;     // solve_spd residual

// Square real matrix, symmetric to within 1e-12 relative to its largest
// entry. Construction validates; the wrapped data is immutable.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
      throw InvalidInputError("SymMatrix: matrix must be square, dim >= 1");
    }
    if (!m_.allFinite()) {
      throw InvalidInputError("SymMatrix: non-finite entries");
    }
    const double scale = m_.cwiseAbs().maxCoeff();
    const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryRelTol * scale) {
      throw InvalidInputError("SymMatrix: asymmetry " + std::to_string(asym) +
                              " exceeds relative tolerance");
    }
  }

  static SymMatrix identity(int dim) {
    return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
  }

  static SymMatrix diagonal(const Eigen::VectorXd& d) {
    return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& data() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// Real vector with Euclidean norm 1 within 1e-10. Construction validates.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd v) : v_(std::move(v)) {
    if (v_.size() < 1) {
      throw InvalidInputError("UnitVector: dim must be >= 1");
    }
    if (!v_.allFinite()) {
      throw InvalidInputError("UnitVector: non-finite entries");
    }
    if (std::abs(v_.norm() - 1.0) > kUnitNormTol) {
      throw InvalidInputError("UnitVector: norm " + std::to_string(v_.norm()) +
                              " is not 1 within tolerance");
    }
  }

  // Normalizes an arbitrary nonzero vector and wraps it.
  static UnitVector normalized(Eigen::VectorXd v) {
    const double n = v.norm();
    if (!(n > 0.0) || !v.allFinite()) {
      throw InvalidInputError("UnitVector::normalized: zero or invalid vector");
    }
    v /= n;
    return UnitVector(std::move(v));
  }

  int dim() const { return static_cast<int>(v_.size()); }
  const Eigen::VectorXd& data() const { return v_; }

 private:
  Eigen::VectorXd v_;
};

struct MinEig {
  double value;
  UnitVector vector;
};

// Canonical eigenvector sign: the first component with magnitude > 1e-9 is
// made positive. Unit vectors always have such a component.
inline Eigen::VectorXd canonical_sign(Eigen::VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > kSignificantComponent) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

// Smallest eigenvalue and a corresponding unit eigenvector, sign-canonical.
// Deterministic: identical input bits give identical output bits.
inline MinEig min_eigvec(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.data());
  if (es.info() != Eigen::Success) {
    throw InvalidInputError("min_eigvec: eigendecomposition failed");
  }
  // Eigen sorts eigenvalues in increasing order.
  Eigen::VectorXd v = canonical_sign(es.eigenvectors().col(0));
  return MinEig{es.eigenvalues()[0], UnitVector(std::move(v))};
}

// Solves m x = b for symmetric positive definite m via Cholesky, then checks
// the residual against the backward-stable bound; failures of either step
// report the matrix as numerically singular.
inline Eigen::VectorXd solve_spd(const SymMatrix& m, const Eigen::VectorXd& b) {
  if (b.size() != m.dim()) {
    throw InvalidInputError("solve_spd: dimension mismatch");
  }
  if (!b.allFinite()) {
    throw InvalidInputError("solve_spd: non-finite right-hand side");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m.data());
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("solve_spd: matrix is not positive definite");
  }
  Eigen::VectorXd x = llt.solve(b);
  const double denom = m.data().norm() * x.norm() + b.norm();
  if (denom > 0.0 &&
      (m.data() * x - b).norm() > kSpdResidualRelTol * denom) {
    throw SingularMatrixError("solve_spd: residual exceeds tolerance");
  }
  return x;
}

// Bisection on a bracketing interval. Requires f(lo), f(hi) of opposite sign
// (or an exact zero at an endpoint). Returns x with |f(x)| <= tol or with
// final interval width <= tol * max(1, |x|).
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
    throw InvalidInputError("bisect_root: interval must be finite with lo < hi");
  }
  if (!(tol > 0.0)) {
    throw InvalidInputError("bisect_root: tol must be positive");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("bisect_root: f(lo) and f(hi) have the same sign");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 2000; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= tol ||
        (hi - lo) <= tol * std::max(1.0, std::abs(mid))) {
      return mid;
    }
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return mid;
}

}  // namespace mpmp

#endif  // MPMP_NUMERICS_HPP_
