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

// Utilities, potential functions, and single-player best responses for the
// non-cooperative code, receiver, and power allocation games.
//
// Model quantities (all per Scenario sc, GameState st; receiver index
// r = a(k) is user k's assigned receiver):
//   interference covariance  C_k = sigma^2 I + sum_{j != k} p_j h_{j,r}^2 s_j s_j^T
//   SINR (receiver d_k)      gamma_k = p_k h_{k,r}^2 (d_k^T s_k)^2 / (d_k^T C_k d_k)
//   LMMSE receiver           d_k = sqrt(p_k) h_{k,r} (C_k + p_k h_{k,r}^2 s_k s_k^T)^-1 s_k
//   LMMSE SINR               gamma_k = p_k h_{k,r}^2 s_k^T C_k^-1 s_k
//   MSE                      eps_k^2 = 1 - 2 sqrt(p_k) h_{k,r} d_k^T s_k
//                                      + d_k^T (C_k + p_k h_{k,r}^2 s_k s_k^T) d_k
//   local TMSE cost          L_k = eps_k^2 + p_k sum_{l != k} h_{k,a(l)}^2 (d_l^T s_k)^2
//
// Exact-potential pairs implemented here (unilateral deviation of player k
// changes utility and potential by the same amount):
//   inverse-SINR game: u_k = -s_k^T [ sigma^2/(p_k h_{k,r}^2) I
//       + sum_{j != k} (p_j h_{j,r}^2/(p_k h_{k,r}^2)
//                       + p_k h_{k,a(j)}^2/(p_j h_{j,a(j)}^2)) s_j s_j^T ] s_k
//     with potential V = -sum_m 1/gamma_m at matched filters.
//   SINR game: u_k = -p_k h_{k,r}^2 s_k^T [ sigma^2 I
//       + sum_{j != k} (p_j h_{j,r}^2
//                       + p_j (h_{k,a(j)}^2/h_{k,r}^2) h_{j,a(j)}^2) s_j s_j^T ] s_k
//     with potential Q = -sum_m rho_m, rho_m = p_m h_{m,a(m)}^2 s_m^T C_m s_m.
//     The leading p_k h_{k,r}^2 factor is exactly player k's share of Q; it
//     scales the utility by a positive constant and leaves the best response
//     unchanged.
//   TMSE game: u_k = -L_k with potential -TotalMse.
//
// All operations are pure functions of their inputs.

#ifndef MPMP_GAMES_HPP_
#define MPMP_GAMES_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "mpmp/errors.hpp"
#include "mpmp/model.hpp"
#include "mpmp/numerics.hpp"

namespace mpmp {

// Transmit powers inside best-response dynamics are floored at this value so
// power-dividing quantities stay defined; pure operations do not clamp.
inline constexpr double kPowerFloor = 1e-30;

struct EfficiencyParams {
  double R = 1e5;     // transmit data rate, bit/s
  int L = 100;        // payload bits per packet
  int M = 100;        // total bits per packet
  double P_max = 1.0; // transmit power cap, watts

  void validate() const {
    if (!(R > 0.0)) throw ValidationError("EfficiencyParams: R must be > 0");
    if (L < 1 || L > M) {
      throw ValidationError("EfficiencyParams: need 0 < L <= M");
    }
    if (M < 2) throw ValidationError("EfficiencyParams: M must be >= 2");
    if (!(P_max > 0.0)) {
      throw ValidationError("EfficiencyParams: P_max must be > 0");
    }
  }

  friend bool operator==(const EfficiencyParams&,
                         const EfficiencyParams&) = default;
};

enum class PotentialKind { NegSumInverseSinr, NegSumRho, TotalMse };

enum class ReceiverMode { MatchedFilter, Lmmse };

inline const char* to_string(ReceiverMode m) {
  return m == ReceiverMode::Lmmse ? "Lmmse" : "MatchedFilter";
}

inline ReceiverMode receiver_mode_from_string(const std::string& s) {
  if (s == "Lmmse") return ReceiverMode::Lmmse;
  if (s == "MatchedFilter") return ReceiverMode::MatchedFilter;
  throw ParseError("unknown receiver mode '" + s + "'");
}

namespace detail {

inline void check_user(const Scenario& sc, const GameState& st, int k) {
  if (k < 0 || k >= sc.K() || st.K() != sc.K() || st.N() != sc.N()) {
    throw InvalidInputError("user index or state dimensions out of range");
  }
}

}  // namespace detail

// sigma^2 I + sum_{j != excluded} p_j h_{j,receiver}^2 s_j s_j^T.
// Pass excluded = -1 for the full received covariance.
inline Eigen::MatrixXd interference_covariance(const Scenario& sc,
                                               const GameState& st,
                                               int receiver, int excluded) {
  const int N = sc.N();
  Eigen::MatrixXd m = sc.noise() * Eigen::MatrixXd::Identity(N, N);
  for (int j = 0; j < sc.K(); ++j) {
    if (j == excluded) continue;
    const double w = st.powers[j] * sc.h2(j, receiver);
    if (w != 0.0) {
      m.noalias() += w * (st.codes.col(j) * st.codes.col(j).transpose());
    }
  }
  return m;
}

// SINR of user k at its stored receiver (general linear receiver form).
inline double sinr(int k, const Scenario& sc, const GameState& st) {
  detail::check_user(sc, st, k);
  const Eigen::VectorXd d = st.receivers.col(k);
  if (!(d.norm() > 0.0)) {
    throw InvalidStateError("sinr: receiver vector of user " +
                            std::to_string(k) + " is zero");
  }
  const int r = sc.a(k);
  const double ds = d.dot(st.codes.col(k));
  const double num = st.powers[k] * sc.h2(k, r) * ds * ds;
  const double den = d.dot(interference_covariance(sc, st, r, k) * d);
  return num / den;
}

// Receiver minimizing user k's MSE given everything else.
inline Eigen::VectorXd lmmse_receiver(int k, const Scenario& sc,
                                      const GameState& st) {
  detail::check_user(sc, st, k);
  if (st.powers[k] == 0.0) return Eigen::VectorXd::Zero(sc.N());
  const int r = sc.a(k);
  const SymMatrix m(interference_covariance(sc, st, r, -1));
  return std::sqrt(st.powers[k]) * sc.h(k, r) * solve_spd(m, st.codes.col(k));
}

// SINR user k attains with an LMMSE receiver (closed form; equals sinr()
// evaluated at lmmse_receiver() within 1e-8 relative).
inline double lmmse_sinr(int k, const Scenario& sc, const GameState& st) {
  detail::check_user(sc, st, k);
  const int r = sc.a(k);
  const SymMatrix m(interference_covariance(sc, st, r, k));
  return st.powers[k] * sc.h2(k, r) *
         st.codes.col(k).dot(solve_spd(m, st.codes.col(k)));
}

// SINR user k attains with a matched filter d = s_k.
inline double matched_filter_sinr(int k, const Scenario& sc,
                                  const GameState& st) {
  detail::check_user(sc, st, k);
  const int r = sc.a(k);
  const Eigen::VectorXd s = st.codes.col(k);
  const double num = st.powers[k] * sc.h2(k, r);
  const double den = s.dot(interference_covariance(sc, st, r, k) * s);
  return num / den;
}

// SINR under the given measurement convention; used for reporting.
inline double measured_sinr(int k, const Scenario& sc, const GameState& st,
                            ReceiverMode mode) {
  return mode == ReceiverMode::Lmmse ? lmmse_sinr(k, sc, st)
                                     : matched_filter_sinr(k, sc, st);
}

// Mean square error of user k at its stored receiver,
// E{(b_k - d_k^T r)^2} for a unit-variance symbol.
inline double mse(int k, const Scenario& sc, const GameState& st) {
  detail::check_user(sc, st, k);
  const int r = sc.a(k);
  const Eigen::VectorXd d = st.receivers.col(k);
  const double signal =
      std::sqrt(st.powers[k]) * sc.h(k, r) * d.dot(st.codes.col(k));
  const double quad = d.dot(interference_covariance(sc, st, r, -1) * d);
  return 1.0 - 2.0 * signal + quad;
}

// Greedy interference-avoidance code update: the minimum eigenvector of
// user k's interference-plus-noise covariance.
inline UnitVector greedy_ia_best_response(int k, const Scenario& sc,
                                          const GameState& st) {
  detail::check_user(sc, st, k);
  return min_eigvec(SymMatrix(interference_covariance(sc, st, sc.a(k), k)))
      .vector;
}

// One step of the per-user MSE fixed-point iteration: LMMSE receiver against
// the full covariance, then the normalized receiver becomes the new code.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> mmse_pair_update(
    int k, const Scenario& sc, const GameState& st) {
  detail::check_user(sc, st, k);
  const Eigen::VectorXd d = lmmse_receiver(k, sc, st);
  const double n = d.norm();
  if (!(n > 0.0)) {
    throw DegeneratePowerError(
        "mmse_pair_update: zero receiver (user has zero power)");
  }
  return {d, d / n};
}

// Downlink variant: all B streams share one transmitter with power p; the
// covariance seen by mobile b is p g_b^2 S S^T + sigma^2 I.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> downlink_mmse_update(
    int b, const DownlinkScenario& dsc, const Eigen::MatrixXd& codes) {
  dsc.validate();
  if (b < 0 || b >= dsc.B || codes.rows() != dsc.N || codes.cols() != dsc.B) {
    throw InvalidInputError("downlink_mmse_update: bad index or code matrix");
  }
  const double g = dsc.gains[b];
  Eigen::MatrixXd m = dsc.power * g * g * (codes * codes.transpose());
  m += dsc.noise_variance * Eigen::MatrixXd::Identity(dsc.N, dsc.N);
  const Eigen::VectorXd d =
      std::sqrt(dsc.power) * g * solve_spd(SymMatrix(m), codes.col(b));
  return {d, d / d.norm()};
}

namespace detail {

// Weight of interferer j in user k's inverse-SINR-game matrix.
inline double menon_weight(int k, int j, const Scenario& sc,
                           const GameState& st) {
  const double own = st.powers[k] * sc.h2(k, sc.a(k));
  const double other = st.powers[j] * sc.h2(j, sc.a(j));
  return st.powers[j] * sc.h2(j, sc.a(k)) / own +
         st.powers[k] * sc.h2(k, sc.a(j)) / other;
}

inline void require_positive_powers(const Scenario& sc, const GameState& st,
                                    const char* who) {
  for (int j = 0; j < sc.K(); ++j) {
    if (!(st.powers[j] > 0.0)) {
      throw DegeneratePowerError(std::string(who) +
                                 ": utility undefined at zero power (user " +
                                 std::to_string(j) + ")");
    }
  }
}

}  // namespace detail

// Best response of the inverse-SINR potential game (matched filtering).
inline UnitVector menon_best_response(int k, const Scenario& sc,
                                      const GameState& st) {
  detail::check_user(sc, st, k);
  detail::require_positive_powers(sc, st, "menon_best_response");
  const int N = sc.N();
  Eigen::MatrixXd m = (sc.noise() / (st.powers[k] * sc.h2(k, sc.a(k)))) *
                      Eigen::MatrixXd::Identity(N, N);
  for (int j = 0; j < sc.K(); ++j) {
    if (j == k) continue;
    m.noalias() += detail::menon_weight(k, j, sc, st) *
                   (st.codes.col(j) * st.codes.col(j).transpose());
  }
  return min_eigvec(SymMatrix(std::move(m))).vector;
}

// Utility of the inverse-SINR game; unilateral changes of s_k move it by
// exactly the change of potential(NegSumInverseSinr, ...).
inline double menon_utility(int k, const Scenario& sc, const GameState& st) {
  detail::check_user(sc, st, k);
  detail::require_positive_powers(sc, st, "menon_utility");
  double q = sc.noise() / (st.powers[k] * sc.h2(k, sc.a(k)));
  for (int j = 0; j < sc.K(); ++j) {
    if (j == k) continue;
    const double c = st.codes.col(j).dot(st.codes.col(k));
    q += detail::menon_weight(k, j, sc, st) * c * c;
  }
  return -q;
}

// Best response of the SINR potential game.
inline UnitVector sinr_potential_best_response(int k, const Scenario& sc,
                                               const GameState& st) {
  detail::check_user(sc, st, k);
  const int N = sc.N();
  const int r = sc.a(k);
  Eigen::MatrixXd m = sc.noise() * Eigen::MatrixXd::Identity(N, N);
  for (int j = 0; j < sc.K(); ++j) {
    if (j == k) continue;
    const double w =
        st.powers[j] * sc.h2(j, r) +
        st.powers[j] * (sc.h2(k, sc.a(j)) / sc.h2(k, r)) * sc.h2(j, sc.a(j));
    m.noalias() += w * (st.codes.col(j) * st.codes.col(j).transpose());
  }
  return min_eigvec(SymMatrix(std::move(m))).vector;
}

// Utility of the SINR potential game (player k's share of Q; see header).
inline double sinr_potential_utility(int k, const Scenario& sc,
                                     const GameState& st) {
  detail::check_user(sc, st, k);
  const int r = sc.a(k);
  const double own = st.powers[k] * sc.h2(k, r);
  double q = sc.noise();
  for (int j = 0; j < sc.K(); ++j) {
    if (j == k) continue;
    const double c = st.codes.col(j).dot(st.codes.col(k));
    const double w =
        st.powers[j] * sc.h2(j, r) +
        st.powers[j] * (sc.h2(k, sc.a(j)) / sc.h2(k, r)) * sc.h2(j, sc.a(j));
    q += w * c * c;
  }
  return -own * q;
}

// Global potential functions. NegSumInverseSinr assumes matched filters
// (it never reads st.receivers); NegSumRho is receiver-free; TotalMse uses
// the stored receivers.
inline double potential(PotentialKind kind, const Scenario& sc,
                        const GameState& st) {
  switch (kind) {
    case PotentialKind::NegSumInverseSinr: {
      double v = 0.0;
      for (int m = 0; m < sc.K(); ++m) {
        if (!(st.powers[m] > 0.0)) {
          throw DegeneratePowerError(
              "potential: inverse SINR undefined at zero power");
        }
        v -= 1.0 / matched_filter_sinr(m, sc, st);
      }
      return v;
    }
    case PotentialKind::NegSumRho: {
      double q = 0.0;
      for (int m = 0; m < sc.K(); ++m) {
        const int r = sc.a(m);
        const Eigen::VectorXd s = st.codes.col(m);
        q -= st.powers[m] * sc.h2(m, r) *
             s.dot(interference_covariance(sc, st, r, m) * s);
      }
      return q;
    }
    case PotentialKind::TotalMse: {
      double t = 0.0;
      for (int m = 0; m < sc.K(); ++m) t += mse(m, sc, st);
      return t;
    }
  }
  throw InvalidInputError("potential: unknown kind");
}

// LMMSE receiver under its role as the receiver-side best response of the
// TMSE game (identical contract to lmmse_receiver).
inline Eigen::VectorXd tmse_receiver_best_response(int k, const Scenario& sc,
                                                   const GameState& st) {
  return lmmse_receiver(k, sc, st);
}

// Cross-interference term of the local TMSE cost:
// p_k sum_{l != k} h_{k,a(l)}^2 (d_l^T s_k)^2 at the stored receivers.
inline double high_sinr_cross_term(int k, const Scenario& sc,
                                   const GameState& st) {
  detail::check_user(sc, st, k);
  double c = 0.0;
  for (int l = 0; l < sc.K(); ++l) {
    if (l == k) continue;
    const double d = st.receivers.col(l).dot(st.codes.col(k));
    c += sc.h2(k, sc.a(l)) * d * d;
  }
  return st.powers[k] * c;
}

// Local cost L(s_k, d_k) of the TMSE game: own MSE plus the interference
// user k inflicts on every other receiver. Unilateral changes of (s_k, d_k)
// move -L by exactly the change of -TotalMse.
inline double tmse_local_cost(int k, const Scenario& sc, const GameState& st) {
  return mse(k, sc, st) + high_sinr_cross_term(k, sc, st);
}

namespace detail {

// Quadratic data of user k's constrained signature problem:
//   minimize  -2 b^T s + s^T D s  subject to ||s|| = 1,
// with D = p_k sum_l h_{k,a(l)}^2 d_l d_l^T and b = sqrt(p_k) h_{k,a(k)} d_k.
struct TmseCodeProblem {
  Eigen::MatrixXd d;
  Eigen::VectorXd b;
};

inline TmseCodeProblem tmse_code_problem(int k, const Scenario& sc,
                                         const GameState& st) {
  check_user(sc, st, k);
  if (!(st.powers[k] > 0.0)) {
    throw DegeneratePowerError("tmse_code_best_response: zero power");
  }
  const int N = sc.N();
  TmseCodeProblem p;
  p.d = Eigen::MatrixXd::Zero(N, N);
  for (int l = 0; l < sc.K(); ++l) {
    const double w = st.powers[k] * sc.h2(k, sc.a(l));
    p.d.noalias() += w * (st.receivers.col(l) * st.receivers.col(l).transpose());
  }
  p.b = std::sqrt(st.powers[k]) * sc.h(k, sc.a(k)) * st.receivers.col(k);
  return p;
}

}  // namespace detail

// Unnormalized signature candidate s(lambda) = (lambda I + D)^-1 b for the
// TMSE code update. ||s(lambda)|| is strictly decreasing on
// (-lambda_min(D), inf); exposed so that property can be validated.
inline Eigen::VectorXd tmse_code_candidate(int k, const Scenario& sc,
                                           const GameState& st, double lambda) {
  const detail::TmseCodeProblem p = detail::tmse_code_problem(k, sc, st);
  const int N = sc.N();
  Eigen::MatrixXd shifted = p.d + lambda * Eigen::MatrixXd::Identity(N, N);
  return solve_spd(SymMatrix(std::move(shifted)), p.b);
}

// Constrained signature best response of the TMSE game: solves
// (lambda I + D) s = b with lambda chosen so ||s|| = 1, via eigendecomposition
// of D and monotone bracketing in lambda. Returns a unit-norm code.
inline UnitVector tmse_code_best_response(int k, const Scenario& sc,
                                          const GameState& st) {
  const detail::TmseCodeProblem p = detail::tmse_code_problem(k, sc, st);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.d);
  if (es.info() != Eigen::Success) {
    throw InvalidInputError("tmse_code_best_response: eigensolver failed");
  }
  const Eigen::VectorXd mu = es.eigenvalues();  // ascending
  const Eigen::VectorXd w = es.eigenvectors().transpose() * p.b;
  const int N = static_cast<int>(mu.size());

  const auto norm2_at = [&](double lambda) {
    double n2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double c = w[i] / (lambda + mu[i]);
      n2 += c * c;
    }
    return n2;
  };
  const auto coeffs_at = [&](double lambda) {
    Eigen::VectorXd c(N);
    for (int i = 0; i < N; ++i) c[i] = w[i] / (lambda + mu[i]);
    return c;
  };

  const double eps0 = 1e-12 * (1.0 + std::abs(mu[0]));
  const double lambda_lo = -mu[0] + eps0;

  if (norm2_at(lambda_lo) < 1.0) {
    // Degenerate case: b has (numerically) no component in the minimum
    // eigenspace, so no multiplier reaches unit norm. Complete the candidate
    // at lambda_lo with minimum-eigenvector mass to exactly unit norm.
    Eigen::VectorXd c = coeffs_at(lambda_lo);
    const double alpha = c[0];
    const double beta2 = std::max(0.0, c.squaredNorm() - alpha * alpha);
    c[0] = std::copysign(std::sqrt(std::max(0.0, 1.0 - beta2)),
                         alpha == 0.0 ? 1.0 : alpha);
    return UnitVector::normalized(es.eigenvectors() * c);
  }

  // Expand an offset upward from lambda_lo until the norm drops below 1
  // (||s(lambda)|| -> 0 as lambda -> inf, so this terminates), then bisect.
  double off = eps0;
  double lambda_hi = lambda_lo + off;
  for (int it = 0; it < 2000 && norm2_at(lambda_hi) >= 1.0; ++it) {
    off *= 2.0;
    lambda_hi = lambda_lo + off;
  }
  const double root =
      bisect_root([&](double lambda) { return norm2_at(lambda) - 1.0; },
                  lambda_lo, lambda_hi, 1e-12);
  return UnitVector::normalized(es.eigenvectors() * coeffs_at(root));
}

// Unique positive root of M x e^-x = 1 - e^-x (equivalently x f'(x) = f(x)
// for f(x) = (1 - e^-x)^M). Cached per M; thread-safe.
inline double gamma_bar(int M) {
  if (M < 2) {
    throw InvalidInputError(
        "gamma_bar: M must be >= 2 (no positive root exists for M < 2)");
  }
  static std::mutex mu;
  static std::map<int, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    const auto it = cache.find(M);
    if (it != cache.end()) return it->second;
  }
  const auto g = [M](double x) {
    const double e = std::exp(-x);
    return static_cast<double>(M) * x * e - (1.0 - e);
  };
  const double root = bisect_root(g, 1e-6, 50.0, 1e-13);
  {
    std::lock_guard<std::mutex> lock(mu);
    cache[M] = root;
  }
  return root;
}

// Energy-efficient power best response: the power driving user k's LMMSE
// SINR to gamma_bar, capped at P_max.
inline double power_best_response(int k, const Scenario& sc,
                                  const GameState& st,
                                  const EfficiencyParams& ep) {
  detail::check_user(sc, st, k);
  ep.validate();
  const int r = sc.a(k);
  const SymMatrix m(interference_covariance(sc, st, r, k));
  const double q = st.codes.col(k).dot(solve_spd(m, st.codes.col(k)));
  const double target = gamma_bar(ep.M) / (sc.h2(k, r) * q);
  return std::min(ep.P_max, target);
}

// Energy efficiency u_k = R (L/M) f(gamma_k) / p_k in bit/Joule, with
// f(gamma) = (1 - e^-gamma)^M and gamma_k measured at the stored receiver.
inline double energy_efficiency(int k, const Scenario& sc, const GameState& st,
                                const EfficiencyParams& ep) {
  detail::check_user(sc, st, k);
  ep.validate();
  if (!(st.powers[k] > 0.0)) {
    throw UndefinedUtilityError("energy_efficiency: undefined at zero power");
  }
  const double gamma = sinr(k, sc, st);
  const double f = std::pow(1.0 - std::exp(-gamma), ep.M);
  return ep.R * (static_cast<double>(ep.L) / ep.M) * f / st.powers[k];
}

// Receiver-bank helpers used by the dynamics engine.
inline void refresh_lmmse_receivers(const Scenario& sc, GameState& st) {
  for (int k = 0; k < sc.K(); ++k) {
    st.receivers.col(k) = lmmse_receiver(k, sc, st);
  }
}

inline void set_matched_filter_receivers(GameState& st) {
  st.receivers = st.codes;
}

// Builds the canonical starting state: given codes, all powers at p0, and
// the receiver bank initialized per mode.
inline GameState initial_state(const Scenario& sc, const Eigen::MatrixXd& codes,
                               double p0,
                               ReceiverMode mode = ReceiverMode::Lmmse) {
  if (codes.rows() != sc.N() || codes.cols() != sc.K()) {
    throw InvalidInputError("initial_state: code matrix must be N x K");
  }
  if (!(p0 > 0.0)) {
    throw InvalidInputError("initial_state: p0 must be > 0");
  }
  GameState st;
  st.codes = codes;
  st.powers = Eigen::VectorXd::Constant(sc.K(), p0);
  st.receivers = codes;
  if (mode == ReceiverMode::Lmmse) refresh_lmmse_receivers(sc, st);
  st.validate();
  return st;
}

}  // namespace mpmp

#endif  // MPMP_GAMES_HPP_
