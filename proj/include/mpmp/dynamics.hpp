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

// Round-robin best-response engine, convergence detection, and the two
// composite allocation procedures (code adaptation alternated with
// energy-efficient power control).
//
// Conventions shared by every runner:
//   - Users act in index order 0..K-1 within a round (deterministic schedule).
//   - Trace arrays all have length rounds_used; row i describes the state at
//     the end of round i+1.
//   - Recorded E(n) is ||p(n) - p(n-1)|| / ||p(n)|| where p(0) is the input
//     state's power vector; it is computed from exactly the vectors stored in
//     the power trace, so it can be re-derived from the record bit for bit.
//   - Identical (scenario, initial state, config) inputs give bit-identical
//     RunRecords.

#ifndef MPMP_DYNAMICS_HPP_
#define MPMP_DYNAMICS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mpmp/errors.hpp"
#include "mpmp/games.hpp"
#include "mpmp/model.hpp"
#include "mpmp/numerics.hpp"

namespace mpmp {

enum class GameKind {
  GreedyIA,        // code game: minimum-eigenvector interference avoidance
  GreedyMMSE,      // code game: LMMSE receiver + normalized-receiver code
  Menon,           // code game: inverse-SINR potential game (matched filter)
  SinrPotential,   // code game: SINR potential game
  TmseMin,         // code game: local total-MSE cost minimization
  PowerOnlyMF,     // power game at fixed codes, matched-filter receivers
  PowerOnlyLMMSE,  // power game at fixed codes, LMMSE receivers
  Algorithm1,      // GreedyIA code game alternated with the power game
  Algorithm2,      // TmseMin code game alternated with the power game
};

inline const char* to_string(GameKind g) {
  switch (g) {
    case GameKind::GreedyIA: return "GreedyIA";
    case GameKind::GreedyMMSE: return "GreedyMMSE";
    case GameKind::Menon: return "Menon";
    case GameKind::SinrPotential: return "SinrPotential";
    case GameKind::TmseMin: return "TmseMin";
    case GameKind::PowerOnlyMF: return "PowerOnlyMF";
    case GameKind::PowerOnlyLMMSE: return "PowerOnlyLMMSE";
    case GameKind::Algorithm1: return "Algorithm1";
    case GameKind::Algorithm2: return "Algorithm2";
  }
  throw InvalidInputError("to_string: unknown GameKind");
}

inline GameKind game_kind_from_string(const std::string& s) {
  for (GameKind g :
       {GameKind::GreedyIA, GameKind::GreedyMMSE, GameKind::Menon,
        GameKind::SinrPotential, GameKind::TmseMin, GameKind::PowerOnlyMF,
        GameKind::PowerOnlyLMMSE, GameKind::Algorithm1, GameKind::Algorithm2}) {
    if (s == to_string(g)) return g;
  }
  throw ParseError("unknown game '" + s + "'");
}

inline bool is_code_game(GameKind g) {
  return g == GameKind::GreedyIA || g == GameKind::GreedyMMSE ||
         g == GameKind::Menon || g == GameKind::SinrPotential ||
         g == GameKind::TmseMin;
}

inline bool is_power_game(GameKind g) {
  return g == GameKind::PowerOnlyMF || g == GameKind::PowerOnlyLMMSE;
}

enum class Schedule { RoundRobin };

inline const char* to_string(Schedule) { return "RoundRobin"; }

inline Schedule schedule_from_string(const std::string& s) {
  if (s == "RoundRobin") return Schedule::RoundRobin;
  throw ParseError("unknown schedule '" + s + "'");
}

struct DynamicsConfig {
  int max_rounds = 5000;   // cap on code-game rounds
  int power_rounds = 500;  // cap on power-game rounds
  int outer_rounds = 100;  // cap on alternating outer iterations
  double code_tol = 1e-8;  // potential-improvement / code-change threshold
  double power_tol = 1e-3; // E(n) threshold
  Schedule schedule = Schedule::RoundRobin;
  GameKind game = GameKind::GreedyIA;
  ReceiverMode report = ReceiverMode::Lmmse;  // convention for traced SINRs

  void validate() const {
    if (max_rounds < 1 || power_rounds < 1 || outer_rounds < 1) {
      throw ValidationError("DynamicsConfig: iteration caps must be >= 1");
    }
    if (!(code_tol > 0.0) || !(power_tol > 0.0)) {
      throw ValidationError("DynamicsConfig: tolerances must be > 0");
    }
  }

  friend bool operator==(const DynamicsConfig&,
                         const DynamicsConfig&) = default;
};

// Trace of one run. All five column arrays have length rounds_used.
struct RunRecord {
  GameKind game = GameKind::GreedyIA;
  bool converged = false;
  int rounds_used = 0;
  std::vector<double> potential;        // game potential (diagnostic for
                                        // games without one; see runners)
  std::vector<Eigen::VectorXd> sinr;    // per-user SINR, report convention
  std::vector<Eigen::VectorXd> power;   // per-user transmit power
  std::vector<double> e_n;              // normalized power change E(n)
  std::vector<double> max_code_change;  // max per-user code move, up to sign
  GameState final_state;
};

// Distance between codes treating +/-s as the same strategy.
inline double code_change(const Eigen::VectorXd& s_old,
                          const Eigen::VectorXd& s_new) {
  return std::min((s_new - s_old).norm(), (s_new + s_old).norm());
}

namespace detail {

inline void refresh_receivers_for(GameKind game, const Scenario& sc,
                                  GameState& st) {
  if (game == GameKind::Menon) {
    set_matched_filter_receivers(st);
  } else {
    refresh_lmmse_receivers(sc, st);
  }
}

// Potential column value for a code-game trace. Games without a potential
// get the SINR-game potential as a diagnostic.
inline double traced_potential(GameKind game, const Scenario& sc,
                               const GameState& st) {
  switch (game) {
    case GameKind::Menon:
      return potential(PotentialKind::NegSumInverseSinr, sc, st);
    case GameKind::TmseMin:
      return -potential(PotentialKind::TotalMse, sc, st);
    default:
      return potential(PotentialKind::NegSumRho, sc, st);
  }
}

inline Eigen::VectorXd sinr_row(const Scenario& sc, const GameState& st,
                                ReceiverMode report) {
  Eigen::VectorXd row(sc.K());
  for (int k = 0; k < sc.K(); ++k) row[k] = measured_sinr(k, sc, st, report);
  return row;
}

inline double normalized_power_change(const Eigen::VectorXd& p_now,
                                      const Eigen::VectorXd& p_prev) {
  return (p_now - p_prev).norm() / p_now.norm();
}

// One round-robin sweep of the given code game. Returns the largest
// per-user code change observed during the sweep.
inline double code_game_round(GameKind game, const Scenario& sc,
                              GameState& st) {
  double max_change = 0.0;
  for (int k = 0; k < sc.K(); ++k) {
    const Eigen::VectorXd s_old = st.codes.col(k);
    switch (game) {
      case GameKind::GreedyIA: {
        // Keeping the incumbent when it is already (numerically) optimal is
        // still a best response; it pins the run inside degenerate minimum
        // eigenspaces instead of wandering between equivalent bases.
        const Eigen::MatrixXd c =
            interference_covariance(sc, st, sc.a(k), k);
        const double q_old = s_old.dot(c * s_old);
        const MinEig me = min_eigvec(SymMatrix(c));
        if (q_old - me.value > 1e-12 * (1.0 + std::abs(q_old))) {
          st.codes.col(k) = me.vector.data();
        }
        break;
      }
      case GameKind::GreedyMMSE: {
        const auto [d, s] = mmse_pair_update(k, sc, st);
        st.receivers.col(k) = d;
        st.codes.col(k) = s;
        break;
      }
      case GameKind::Menon: {
        st.codes.col(k) = menon_best_response(k, sc, st).data();
        st.receivers.col(k) = st.codes.col(k);
        break;
      }
      case GameKind::SinrPotential: {
        st.codes.col(k) = sinr_potential_best_response(k, sc, st).data();
        break;
      }
      case GameKind::TmseMin: {
        st.receivers.col(k) = lmmse_receiver(k, sc, st);
        st.codes.col(k) = tmse_code_best_response(k, sc, st).data();
        break;
      }
      default:
        throw InvalidInputError("code_game_round: not a code game");
    }
    max_change = std::max(max_change, code_change(s_old, st.codes.col(k)));
  }
  return max_change;
}

}  // namespace detail

// Round-robin best-response dynamics for one of the code-allocation games.
// Potential games stop once a full round improves the potential by less than
// code_tol relative to its magnitude (potential scales differ by ~20 orders
// of magnitude across games, so an absolute threshold cannot serve them
// all); the two greedy procedures stop once the largest per-user code change
// in a round (up to sign) falls below code_tol.
inline RunRecord run_code_game(GameKind game, const Scenario& sc,
                               const GameState& st0,
                               const DynamicsConfig& cfg) {
  if (!is_code_game(game)) {
    throw InvalidInputError("run_code_game: not a code game");
  }
  cfg.validate();
  sc.validate();
  st0.validate();
  GameState st = st0;
  detail::refresh_receivers_for(game, sc, st);

  const bool has_potential = game == GameKind::Menon ||
                             game == GameKind::SinrPotential ||
                             game == GameKind::TmseMin;
  RunRecord rec;
  rec.game = game;
  double pot_prev =
      has_potential ? detail::traced_potential(game, sc, st) : 0.0;

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const double max_change = detail::code_game_round(game, sc, st);
    detail::refresh_receivers_for(game, sc, st);

    const double pot = detail::traced_potential(game, sc, st);
    rec.potential.push_back(pot);
    rec.sinr.push_back(detail::sinr_row(sc, st, cfg.report));
    rec.power.push_back(st.powers);
    rec.e_n.push_back(0.0);  // powers are fixed in code games
    rec.max_code_change.push_back(max_change);
    rec.rounds_used = round;

    if (has_potential) {
      if (pot - pot_prev <= cfg.code_tol * std::abs(pot)) {
        rec.converged = true;
        break;
      }
      pot_prev = pot;
    } else if (max_change < cfg.code_tol) {
      rec.converged = true;
      break;
    }
  }
  rec.final_state = std::move(st);
  return rec;
}

// Round-robin energy-efficient power control at fixed codes. Receiver mode
// follows cfg.game: PowerOnlyMF plays under matched filters, anything else
// under LMMSE receivers (recomputed after every round). Stops when
// E(n) < power_tol or the round cap is hit.
inline RunRecord run_power_game(const Scenario& sc, const GameState& st0,
                                const EfficiencyParams& ep,
                                const DynamicsConfig& cfg) {
  cfg.validate();
  ep.validate();
  sc.validate();
  st0.validate();
  const bool matched = cfg.game == GameKind::PowerOnlyMF;
  GameState st = st0;
  if (matched) {
    set_matched_filter_receivers(st);
  } else {
    refresh_lmmse_receivers(sc, st);
  }

  RunRecord rec;
  rec.game = is_power_game(cfg.game) ? cfg.game : GameKind::PowerOnlyLMMSE;

  for (int round = 1; round <= cfg.power_rounds; ++round) {
    const Eigen::VectorXd p_prev = st.powers;
    for (int k = 0; k < sc.K(); ++k) {
      st.powers[k] = std::max(power_best_response(k, sc, st, ep), kPowerFloor);
    }
    if (!matched) refresh_lmmse_receivers(sc, st);

    const double e = detail::normalized_power_change(st.powers, p_prev);
    // The energy game has no potential; trace the negated total MSE at the
    // active receiver bank as a diagnostic.
    rec.potential.push_back(-potential(PotentialKind::TotalMse, sc, st));
    rec.sinr.push_back(detail::sinr_row(sc, st, cfg.report));
    rec.power.push_back(st.powers);
    rec.e_n.push_back(e);
    rec.max_code_change.push_back(0.0);  // codes are fixed in power games
    rec.rounds_used = round;

    if (e < cfg.power_tol) {
      rec.converged = true;
      break;
    }
  }
  rec.final_state = std::move(st);
  return rec;
}

namespace detail {

// Shared outer loop of the two composite procedures: alternate a code game
// with the LMMSE power game until the outer power change E(n) < power_tol.
inline RunRecord run_alternating(GameKind outer, GameKind code_game,
                                 const Scenario& sc, const GameState& st0,
                                 const EfficiencyParams& ep,
                                 const DynamicsConfig& cfg) {
  cfg.validate();
  ep.validate();
  sc.validate();
  st0.validate(ep.P_max);
  GameState st = st0;

  DynamicsConfig code_cfg = cfg;
  code_cfg.game = code_game;
  DynamicsConfig power_cfg = cfg;
  power_cfg.game = GameKind::PowerOnlyLMMSE;

  RunRecord rec;
  rec.game = outer;

  for (int n = 1; n <= cfg.outer_rounds; ++n) {
    const Eigen::VectorXd p_prev = st.powers;
    const Eigen::MatrixXd codes_prev = st.codes;

    st = run_code_game(code_game, sc, st, code_cfg).final_state;
    st = run_power_game(sc, st, ep, power_cfg).final_state;

    double max_change = 0.0;
    for (int k = 0; k < sc.K(); ++k) {
      max_change =
          std::max(max_change, code_change(codes_prev.col(k), st.codes.col(k)));
    }
    const double e = normalized_power_change(st.powers, p_prev);

    rec.potential.push_back(traced_potential(code_game, sc, st));
    rec.sinr.push_back(sinr_row(sc, st, cfg.report));
    rec.power.push_back(st.powers);
    rec.e_n.push_back(e);
    rec.max_code_change.push_back(max_change);
    rec.rounds_used = n;

    if (e < cfg.power_tol) {
      rec.converged = true;
      break;
    }
  }
  rec.final_state = std::move(st);
  return rec;
}

}  // namespace detail

// Alternates the greedy interference-avoidance code game (with LMMSE
// receivers) and the power game. Convergence is not guaranteed when K > N;
// the record reports a cap exit honestly.
inline RunRecord run_algorithm1(const Scenario& sc, const GameState& st0,
                                const EfficiencyParams& ep,
                                const DynamicsConfig& cfg) {
  return detail::run_alternating(GameKind::Algorithm1, GameKind::GreedyIA, sc,
                                 st0, ep, cfg);
}

// Alternates the total-MSE code game (warm-started from the previous outer
// iteration's codes) and the LMMSE power game.
inline RunRecord run_algorithm2(const Scenario& sc, const GameState& st0,
                                const EfficiencyParams& ep,
                                const DynamicsConfig& cfg) {
  return detail::run_alternating(GameKind::Algorithm2, GameKind::TmseMin, sc,
                                 st0, ep, cfg);
}

// Dispatch on cfg.game.
inline RunRecord run_game(const Scenario& sc, const GameState& st0,
                          const EfficiencyParams& ep,
                          const DynamicsConfig& cfg) {
  if (is_code_game(cfg.game)) return run_code_game(cfg.game, sc, st0, cfg);
  if (is_power_game(cfg.game)) return run_power_game(sc, st0, ep, cfg);
  if (cfg.game == GameKind::Algorithm1) {
    return run_algorithm1(sc, st0, ep, cfg);
  }
  return run_algorithm2(sc, st0, ep, cfg);
}

}  // namespace mpmp

#endif  // MPMP_DYNAMICS_HPP_
