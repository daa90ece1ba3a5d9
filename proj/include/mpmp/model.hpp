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

// Network scenario data types and seeded random generation.
//
// Geometry conventions (all configurable unless noted):
//   - Users are placed uniformly in a side_m x side_m square.
//   - PeerToPeer: K transmitter-receiver pairs; receiver k is uniform in a
//     disc of radius side_m/2 around user k, clamped to the square, so every
//     pair distance is at most side_m/2.
//   - Multicell: B=2 access points at (side/4, side/2), (3side/4, side/2) or
//     B=4 at the four quadrant centers; users attach to the AP with the
//     largest channel gain.
//   - Femtocell: B=6 = the two B=2 macro APs plus 4 femto APs placed
//     uniformly at random; a femto AP is eligible for attachment only when
//     the true user-AP distance is at most 100 m (its service radius), but
//     its channel gain is generated for every user regardless.
//   - Link distances are clamped below by d_min_m before computing fading
//     means; squared gains are exponential with mean d^-2 and amplitudes are
//     their positive square roots, so all gains are strictly positive.
//
// Randomness: everything flows from ScenarioConfig::seed through fixed
// substreams (one per user position, per receiver position, per (user,
// receiver) fading pair), so adding receivers or users never perturbs the
// draws of existing ones. Same config + same seed => bit-identical Scenario.
// Transmitted symbols and noise are never sampled; every game quantity is a
// closed-form function of (gains, codes, powers).

#ifndef MPMP_MODEL_HPP_
#define MPMP_MODEL_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mpmp/errors.hpp"
#include "mpmp/random.hpp"

namespace mpmp {

enum class ScenarioKind { PeerToPeer, Multicell, Femtocell, DownlinkSingleCell };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PeerToPeer: return "PeerToPeer";
    case ScenarioKind::Multicell: return "Multicell";
    case ScenarioKind::Femtocell: return "Femtocell";
    case ScenarioKind::DownlinkSingleCell: return "DownlinkSingleCell";
  }
  return "?";
}

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
  if (s == "PeerToPeer") return ScenarioKind::PeerToPeer;
  if (s == "Multicell") return ScenarioKind::Multicell;
  if (s == "Femtocell") return ScenarioKind::Femtocell;
  if (s == "DownlinkSingleCell") return ScenarioKind::DownlinkSingleCell;
  throw ParseError("unknown scenario kind '" + s + "'");
}

// Substream tags for scenario generation (see random.hpp).
inline constexpr std::uint64_t kTagUserPosition = 1;
inline constexpr std::uint64_t kTagReceiverPosition = 2;
inline constexpr std::uint64_t kTagFading = 3;

inline constexpr double kFemtoRadiusM = 100.0;  // femto AP service radius

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::PeerToPeer;
  int K = 1;                     // user (transmitter) count
  int B = 1;                     // receiver count
  int N = 8;                     // processing gain (chips per symbol)
  double side_m = 1000.0;        // square side, meters
  double noise_variance = 1e-5;  // sigma^2, watts
  std::uint64_t seed = 1;
  double d_min_m = 10.0;         // lower clamp on link distances

  // Type invariants only; placement restrictions (Multicell B in {2,4},
  // Femtocell B=6) are enforced by generate_scenario so hand-built
  // scenarios can use any geometry.
  void validate() const {
    if (K < 1) throw ValidationError("ScenarioConfig: K must be >= 1");
    if (B < 1) throw ValidationError("ScenarioConfig: B must be >= 1");
    if (N < 1) throw ValidationError("ScenarioConfig: N must be >= 1");
    if (kind == ScenarioKind::PeerToPeer && K != B) {
      throw ValidationError("ScenarioConfig: PeerToPeer requires K = B");
    }
    if (!(side_m > 0.0)) {
      throw ValidationError("ScenarioConfig: side_m must be > 0");
    }
    if (!(noise_variance > 0.0)) {
      throw ValidationError("ScenarioConfig: noise_variance must be > 0");
    }
    if (!(d_min_m > 0.0)) {
      throw ValidationError("ScenarioConfig: d_min_m must be > 0");
    }
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// A realized network: geometry, channel amplitudes, and user->receiver
// assignment. Immutable value; safe to share across threads.
struct Scenario {
  ScenarioConfig config;
  Eigen::MatrixXd gains;               // K x B amplitudes h_{k,l} > 0
  std::vector<int> assignment;         // a[k] in [0, B), 0-based
  Eigen::MatrixXd user_positions;      // K x 2, meters
  Eigen::MatrixXd receiver_positions;  // B x 2, meters

  int K() const { return config.K; }
  int B() const { return config.B; }
  int N() const { return config.N; }
  double noise() const { return config.noise_variance; }
  int a(int k) const { return assignment[static_cast<std::size_t>(k)]; }
  double h(int k, int l) const { return gains(k, l); }
  double h2(int k, int l) const { return gains(k, l) * gains(k, l); }

  void validate() const {
    config.validate();
    if (gains.rows() != config.K || gains.cols() != config.B) {
      throw ValidationError("Scenario: gains must be K x B");
    }
    if (!gains.allFinite() || (gains.array() <= 0.0).any()) {
      throw ValidationError("Scenario: all gains must be positive and finite");
    }
    if (static_cast<int>(assignment.size()) != config.K) {
      throw ValidationError("Scenario: assignment must have length K");
    }
    for (int k = 0; k < config.K; ++k) {
      if (assignment[static_cast<std::size_t>(k)] < 0 ||
          assignment[static_cast<std::size_t>(k)] >= config.B) {
        throw ValidationError("Scenario: assignment out of range");
      }
    }
    if (user_positions.rows() != config.K || user_positions.cols() != 2 ||
        receiver_positions.rows() != config.B ||
        receiver_positions.cols() != 2) {
      throw ValidationError("Scenario: position matrices have wrong shape");
    }
  }
};

// Joint strategy profile: spreading codes (unit-norm columns), transmit
// powers (watts), and the receiver bank (unnormalized detection vectors).
struct GameState {
  Eigen::MatrixXd codes;      // N x K, unit-norm columns
  Eigen::VectorXd powers;     // length K
  Eigen::MatrixXd receivers;  // N x K

  int K() const { return static_cast<int>(codes.cols()); }
  int N() const { return static_cast<int>(codes.rows()); }

  void validate(double p_max = std::numeric_limits<double>::infinity()) const {
    if (codes.cols() < 1 || codes.rows() < 1) {
      throw ValidationError("GameState: empty code matrix");
    }
    if (!codes.allFinite() || !powers.allFinite() || !receivers.allFinite()) {
      throw ValidationError("GameState: non-finite entries");
    }
    if (powers.size() != codes.cols() || receivers.rows() != codes.rows() ||
        receivers.cols() != codes.cols()) {
      throw ValidationError("GameState: inconsistent dimensions");
    }
    for (int k = 0; k < codes.cols(); ++k) {
      if (std::abs(codes.col(k).norm() - 1.0) > 1e-10) {
        throw ValidationError("GameState: code column " + std::to_string(k) +
                              " is not unit norm");
      }
    }
    if ((powers.array() < 0.0).any() || (powers.array() > p_max).any()) {
      throw ValidationError("GameState: powers outside [0, P_max]");
    }
  }
};

// One transmitter broadcasting B unit-power-split streams to B mobile
// receivers; used by the downlink code update only.
struct DownlinkScenario {
  int B = 1;
  int N = 8;
  double power = 1.0;          // common transmit power p, watts
  Eigen::VectorXd gains;       // length B, amplitudes g_b > 0
  double noise_variance = 1e-5;

  void validate() const {
    if (B < 1 || N < 1) throw ValidationError("DownlinkScenario: B, N >= 1");
    if (!(power > 0.0)) throw ValidationError("DownlinkScenario: p must be > 0");
    if (!(noise_variance > 0.0)) {
      throw ValidationError("DownlinkScenario: noise_variance must be > 0");
    }
    if (gains.size() != B || !gains.allFinite() ||
        (gains.array() <= 0.0).any()) {
      throw ValidationError("DownlinkScenario: gains must be B positive reals");
    }
  }
};

namespace detail {

inline double clamp01(double x, double lo, double hi) {
  return std::min(hi, std::max(lo, x));
}

inline double link_distance(const Eigen::MatrixXd& users,
                            const Eigen::MatrixXd& receivers, int k, int l) {
  const double dx = users(k, 0) - receivers(l, 0);
  const double dy = users(k, 1) - receivers(l, 1);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace detail

// Generates a scenario for the uplink kinds. DownlinkSingleCell has no user
// geometry and is rejected; use generate_downlink instead.
inline Scenario generate_scenario(const ScenarioConfig& config) {
  config.validate();
  if (config.kind == ScenarioKind::DownlinkSingleCell) {
    throw ValidationError(
        "generate_scenario: DownlinkSingleCell has no uplink geometry; "
        "use generate_downlink");
  }
  if (config.kind == ScenarioKind::Multicell &&
      !(config.B == 2 || config.B == 4)) {
    throw ValidationError("generate_scenario: Multicell supports B in {2, 4}");
  }
  if (config.kind == ScenarioKind::Femtocell && config.B != 6) {
    throw ValidationError(
        "generate_scenario: Femtocell requires B = 6 (2 macro + 4 femto)");
  }

  Scenario sc;
  sc.config = config;
  const int K = config.K;
  const int B = config.B;
  const double side = config.side_m;

  sc.user_positions.resize(K, 2);
  for (int k = 0; k < K; ++k) {
    Rng r(substream(config.seed, kTagUserPosition, static_cast<std::uint64_t>(k)));
    sc.user_positions(k, 0) = r.uniform(0.0, side);
    sc.user_positions(k, 1) = r.uniform(0.0, side);
  }

  sc.receiver_positions.resize(B, 2);
  switch (config.kind) {
    case ScenarioKind::PeerToPeer:
      // Receiver k uniform in a disc of radius side/2 around user k,
      // clamped to the square (clamping only shrinks the distance).
      for (int k = 0; k < K; ++k) {
        Rng r(substream(config.seed, kTagReceiverPosition,
                        static_cast<std::uint64_t>(k)));
        const double theta = r.uniform(0.0, 2.0 * 3.14159265358979323846);
        const double rho = 0.5 * side * std::sqrt(r.uniform01());
        sc.receiver_positions(k, 0) = detail::clamp01(
            sc.user_positions(k, 0) + rho * std::cos(theta), 0.0, side);
        sc.receiver_positions(k, 1) = detail::clamp01(
            sc.user_positions(k, 1) + rho * std::sin(theta), 0.0, side);
      }
      break;
    case ScenarioKind::Multicell:
      if (B == 2) {
        sc.receiver_positions << side / 4, side / 2, 3 * side / 4, side / 2;
      } else {
        sc.receiver_positions << side / 4, side / 4, side / 4, 3 * side / 4,
            3 * side / 4, side / 4, 3 * side / 4, 3 * side / 4;
      }
      break;
    case ScenarioKind::Femtocell:
      sc.receiver_positions(0, 0) = side / 4;
      sc.receiver_positions(0, 1) = side / 2;
      sc.receiver_positions(1, 0) = 3 * side / 4;
      sc.receiver_positions(1, 1) = side / 2;
      for (int l = 2; l < 6; ++l) {
        Rng r(substream(config.seed, kTagReceiverPosition,
                        static_cast<std::uint64_t>(l)));
        sc.receiver_positions(l, 0) = r.uniform(0.0, side);
        sc.receiver_positions(l, 1) = r.uniform(0.0, side);
      }
      break;
    case ScenarioKind::DownlinkSingleCell:
      break;  // unreachable
  }

  sc.gains.resize(K, B);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < B; ++l) {
      const double d = std::max(
          config.d_min_m,
          detail::link_distance(sc.user_positions, sc.receiver_positions, k, l));
      Rng r(substream(config.seed, kTagFading, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(l)));
      sc.gains(k, l) = std::sqrt(r.exponential(1.0 / (d * d)));
    }
  }

  sc.assignment.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    if (config.kind == ScenarioKind::PeerToPeer) {
      sc.assignment[static_cast<std::size_t>(k)] = k;
      continue;
    }
    int best = -1;
    double best_gain = -1.0;
    for (int l = 0; l < B; ++l) {
      if (config.kind == ScenarioKind::Femtocell && l >= 2) {
        const double d = detail::link_distance(sc.user_positions,
                                               sc.receiver_positions, k, l);
        if (d > kFemtoRadiusM) continue;  // femto AP out of service range
      }
      if (sc.gains(k, l) > best_gain) {
        best_gain = sc.gains(k, l);
        best = l;
      }
    }
    sc.assignment[static_cast<std::size_t>(k)] = best;
  }

  sc.validate();
  return sc;
}

// K independent standard-normal N-vectors, each normalized to unit norm.
// Deterministic given (N, K, seed).
inline Eigen::MatrixXd random_codes(int N, int K, std::uint64_t seed) {
  if (N < 1 || K < 1) {
    throw InvalidInputError("random_codes: N and K must be >= 1");
  }
  Rng r(mix64(seed));
  Eigen::MatrixXd codes(N, K);
  for (int k = 0; k < K; ++k) {
    double norm = 0.0;
    do {
      for (int i = 0; i < N; ++i) codes(i, k) = r.normal();
      norm = codes.col(k).norm();
    } while (!(norm > 1e-12));  // a zero draw has probability ~0
    codes.col(k) /= norm;
  }
  return codes;
}

// Downlink companion generator: one transmitter at the square's center,
// B mobiles placed uniformly, amplitudes drawn like the uplink fading.
inline DownlinkScenario generate_downlink(const ScenarioConfig& config,
                                          double power) {
  config.validate();
  if (config.kind != ScenarioKind::DownlinkSingleCell) {
    throw ValidationError("generate_downlink: kind must be DownlinkSingleCell");
  }
  if (!(power > 0.0)) {
    throw ValidationError("generate_downlink: power must be > 0");
  }
  DownlinkScenario d;
  d.B = config.B;
  d.N = config.N;
  d.power = power;
  d.noise_variance = config.noise_variance;
  d.gains.resize(config.B);
  const double cx = config.side_m / 2, cy = config.side_m / 2;
  for (int b = 0; b < config.B; ++b) {
    Rng rp(substream(config.seed, kTagUserPosition, static_cast<std::uint64_t>(b)));
    const double x = rp.uniform(0.0, config.side_m);
    const double y = rp.uniform(0.0, config.side_m);
    const double dist = std::max(
        config.d_min_m, std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy)));
    Rng rf(substream(config.seed, kTagFading, static_cast<std::uint64_t>(b), 0));
    d.gains[b] = std::sqrt(rf.exponential(1.0 / (dist * dist)));
  }
  d.validate();
  return d;
}

}  // namespace mpmp

#endif  // MPMP_MODEL_HPP_
