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
#include <vector>

#include "mpmp/dynamics.hpp"
#include "mpmp/errors.hpp"
#include "mpmp/games.hpp"
#include "mpmp/model.hpp"
#include "mpmp/random.hpp"

using Catch::Matchers::WithinRel;

namespace {

// Single cell: every user talks to one receiver with unit gain.
mpmp::Scenario single_cell(int k, int n, double noise) {
  mpmp::Scenario sc;
  sc.config.kind = mpmp::ScenarioKind::Multicell;
  sc.config.K = k;
  sc.config.B = 1;
  sc.config.N = n;
  sc.config.noise_variance = noise;
  sc.gains = Eigen::MatrixXd::Ones(k, 1);
  sc.assignment.assign(k, 0);
  sc.user_positions = Eigen::MatrixXd::Zero(k, 2);
  sc.receiver_positions = Eigen::MatrixXd::Zero(1, 2);
  sc.validate();
  return sc;
}

mpmp::Scenario peer_with_gains(const Eigen::MatrixXd& gains, int n,
                               double noise) {
  mpmp::Scenario sc;
  sc.config.kind = mpmp::ScenarioKind::PeerToPeer;
  sc.config.K = static_cast<int>(gains.rows());
  sc.config.B = static_cast<int>(gains.cols());
  sc.config.N = n;
  sc.config.noise_variance = noise;
  sc.gains = gains;
  for (int k = 0; k < sc.config.K; ++k) sc.assignment.push_back(k);
  sc.user_positions = Eigen::MatrixXd::Zero(sc.config.K, 2);
  sc.receiver_positions = Eigen::MatrixXd::Zero(sc.config.B, 2);
  sc.validate();
  return sc;
}

// Order-one gain matrix: keeps power best responses away from the cap so
// the interior equilibrium (SINR = gamma_bar) is actually reachable.
mpmp::Scenario o1_peer(int k, int n, double noise, std::uint64_t seed) {
  Eigen::MatrixXd gains(k, k);
  mpmp::Rng r(mpmp::mix64(seed));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) gains(i, j) = r.uniform(0.4, 1.2);
  }
  return peer_with_gains(gains, n, noise);
}

mpmp::Scenario random_peer(int k, std::uint64_t seed) {
  mpmp::ScenarioConfig c;
  c.kind = mpmp::ScenarioKind::PeerToPeer;
  c.K = k;
  c.B = k;
  c.seed = seed;
  return mpmp::generate_scenario(c);
}

mpmp::GameState start_state(const mpmp::Scenario& sc, std::uint64_t seed,
                            double p0 = 1.0) {
  return mpmp::initial_state(
      sc, mpmp::random_codes(sc.N(), sc.K(), mpmp::substream(seed, 1)), p0);
}

double gram_error(const Eigen::MatrixXd& codes) {
  const Eigen::MatrixXd g = codes.transpose() * codes;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols()))
      .cwiseAbs()
      .maxCoeff();
}

void check_trace_shape(const mpmp::RunRecord& rec, int k) {
  const auto n = static_cast<std::size_t>(rec.rounds_used);
  CHECK(rec.potential.size() == n);
  CHECK(rec.sinr.size() == n);
  CHECK(rec.power.size() == n);
  CHECK(rec.e_n.size() == n);
  CHECK(rec.max_code_change.size() == n);
  for (const auto& row : rec.sinr) CHECK(row.size() == k);
  for (const auto& row : rec.power) CHECK(row.size() == k);
}

// E(n) rows must be bit-for-bit recomputable from the power trace.
void check_e_recomputes(const mpmp::RunRecord& rec,
                        const Eigen::VectorXd& p0) {
  for (std::size_t i = 0; i < rec.e_n.size(); ++i) {
    const Eigen::VectorXd& prev = i == 0 ? p0 : rec.power[i - 1];
    const double e = (rec.power[i] - prev).norm() / rec.power[i].norm();
    CHECK(rec.e_n[i] == e);
  }
}

void check_potential_monotone(const std::vector<double>& pot) {
  for (std::size_t i = 1; i < pot.size(); ++i) {
    const double slack =
        1e-10 * std::max({1.0, std::abs(pot[i - 1]), std::abs(pot[i])});
    CHECK(pot[i] >= pot[i - 1] - slack);
  }
}

}  // namespace

TEST_CASE("dynamics config and enum plumbing") {
  mpmp::DynamicsConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_rounds = 0;
  CHECK_THROWS_AS(cfg.validate(), mpmp::ValidationError);
  cfg = mpmp::DynamicsConfig{};
  cfg.power_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), mpmp::ValidationError);

  using mpmp::GameKind;
  for (const GameKind g :
       {GameKind::GreedyIA, GameKind::GreedyMMSE, GameKind::Menon,
        GameKind::SinrPotential, GameKind::TmseMin, GameKind::PowerOnlyMF,
        GameKind::PowerOnlyLMMSE, GameKind::Algorithm1, GameKind::Algorithm2}) {
    CHECK(mpmp::game_kind_from_string(mpmp::to_string(g)) == g);
    // Exactly one of the three roles applies.
    const int roles = int(mpmp::is_code_game(g)) + int(mpmp::is_power_game(g)) +
                      int(g == GameKind::Algorithm1 || g == GameKind::Algorithm2);
    CHECK(roles == 1);
  }
  CHECK_THROWS_AS(mpmp::game_kind_from_string("NoSuchGame"), mpmp::ParseError);
  CHECK(mpmp::schedule_from_string(mpmp::to_string(
            mpmp::Schedule::RoundRobin)) == mpmp::Schedule::RoundRobin);
}

TEST_CASE("underloaded code games converge to orthonormal equilibria") {
  const mpmp::Scenario sc = single_cell(4, 8, 1.0);
  const mpmp::GameState st0 = start_state(sc, 5);
  using mpmp::GameKind;
  const GameKind games[] = {GameKind::GreedyIA, GameKind::GreedyMMSE,
                            GameKind::Menon, GameKind::SinrPotential,
                            GameKind::TmseMin};
  for (const GameKind g : games) {
    INFO("game " << mpmp::to_string(g));
    mpmp::DynamicsConfig cfg;
    cfg.game = g;
    // The total-MSE game approaches the orthonormal equilibrium at a rate
    // tied to the stop tolerance; tighten it so the stopped state certifies
    // the 1e-6 Gram check (8-ish rounds at unit noise).
    if (g == GameKind::TmseMin) cfg.code_tol = 1e-13;
    const mpmp::RunRecord rec = mpmp::run_code_game(g, sc, st0, cfg);
    CHECK(rec.converged);
    CHECK(rec.game == g);
    CHECK(gram_error(rec.final_state.codes) < 1e-6);
    check_trace_shape(rec, sc.K());
    for (const double e : rec.e_n) CHECK(e == 0.0);
    if (g == GameKind::Menon || g == GameKind::SinrPotential ||
        g == GameKind::TmseMin) {
      check_potential_monotone(rec.potential);
    }
  }
}

TEST_CASE("overloaded SINR potential game climbs its potential to a rest") {
  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const mpmp::Scenario sc = random_peer(12, seed);
    const mpmp::GameState st0 = start_state(sc, seed + 40);
    mpmp::DynamicsConfig cfg;
    cfg.game = mpmp::GameKind::SinrPotential;
    const mpmp::RunRecord rec =
        mpmp::run_code_game(cfg.game, sc, st0, cfg);
    CHECK(rec.converged);
    CHECK(rec.rounds_used <= cfg.max_rounds);
    check_potential_monotone(rec.potential);
  }
}

TEST_CASE("overloaded greedy IA reports a cap exit honestly") {
  const mpmp::Scenario sc = random_peer(12, 9);
  const mpmp::GameState st0 = start_state(sc, 3);
  mpmp::DynamicsConfig cfg;
  cfg.game = mpmp::GameKind::GreedyIA;
  cfg.max_rounds = 3;  // force the cap
  const mpmp::RunRecord rec = mpmp::run_code_game(cfg.game, sc, st0, cfg);
  check_trace_shape(rec, sc.K());
  if (rec.converged) {
    CHECK(rec.max_code_change.back() < cfg.code_tol);
  } else {
    CHECK(rec.rounds_used == cfg.max_rounds);
    CHECK(rec.max_code_change.back() >= cfg.code_tol);
  }
}

TEST_CASE("power game reaches the closed-form equilibria") {
  const mpmp::EfficiencyParams ep;
  mpmp::DynamicsConfig cfg;
  cfg.game = mpmp::GameKind::PowerOnlyLMMSE;

  SECTION("one user, interior: target over effective gain, one round") {
    const mpmp::Scenario sc = peer_with_gains(
        (Eigen::MatrixXd(1, 1) << 0.3).finished(), 4, 1e-3);
    const mpmp::GameState st0 = start_state(sc, 1);
    const mpmp::RunRecord rec = mpmp::run_power_game(sc, st0, ep, cfg);
    const double expected =
        std::min(ep.P_max, mpmp::gamma_bar(ep.M) * 1e-3 / 0.09);
    CHECK(rec.converged);
    CHECK(rec.rounds_used <= 2);
    CHECK_THAT(rec.final_state.powers[0], WithinRel(expected, 1e-10));
    check_e_recomputes(rec, st0.powers);
  }
  SECTION("two users on orthogonal codes decouple, under both receivers") {
    const mpmp::Scenario sc = peer_with_gains(
        (Eigen::MatrixXd(2, 2) << 0.5, 0.05, 0.07, 0.4).finished(), 4, 1e-3);
    mpmp::GameState st0;
    st0.codes = Eigen::MatrixXd::Zero(4, 2);
    st0.codes(0, 0) = 1.0;
    st0.codes(1, 1) = 1.0;
    st0.receivers = st0.codes;
    st0.powers = Eigen::VectorXd::Constant(2, 1.0);
    const double g = mpmp::gamma_bar(ep.M);
    const double p1 = std::min(ep.P_max, g * 1e-3 / 0.25);
    const double p2 = std::min(ep.P_max, g * 1e-3 / 0.16);
    for (const mpmp::GameKind mode :
         {mpmp::GameKind::PowerOnlyLMMSE, mpmp::GameKind::PowerOnlyMF}) {
      cfg.game = mode;
      const mpmp::RunRecord rec = mpmp::run_power_game(sc, st0, ep, cfg);
      CHECK(rec.converged);
      CHECK(rec.rounds_used <= 3);
      CHECK(rec.game == mode);
      CHECK_THAT(rec.final_state.powers[0], WithinRel(p1, 1e-10));
      CHECK_THAT(rec.final_state.powers[1], WithinRel(p2, 1e-10));
    }
  }
  SECTION("weak channels pin both users at the cap") {
    const mpmp::Scenario sc = peer_with_gains(
        (Eigen::MatrixXd(2, 2) << 1e-6, 1e-7, 1e-7, 1e-6).finished(), 4, 1e-3);
    const mpmp::GameState st0 = start_state(sc, 2);
    const mpmp::RunRecord rec = mpmp::run_power_game(sc, st0, ep, cfg);
    CHECK(rec.converged);
    CHECK(rec.final_state.powers[0] == ep.P_max);
    CHECK(rec.final_state.powers[1] == ep.P_max);
  }
}

TEST_CASE("loaded power game: E(n) decreases to convergence") {
  const mpmp::EfficiencyParams ep;
  mpmp::DynamicsConfig cfg;
  cfg.game = mpmp::GameKind::PowerOnlyLMMSE;
  const mpmp::Scenario sc = o1_peer(10, 8, 1e-2, 21);
  const mpmp::GameState st0 = start_state(sc, 77);
  const mpmp::RunRecord rec = mpmp::run_power_game(sc, st0, ep, cfg);
  CHECK(rec.converged);
  CHECK(rec.rounds_used >= 2);  // the run is non-trivial in this regime
  for (std::size_t i = 1; i < rec.e_n.size(); ++i) {
    if (rec.e_n[i - 1] > 1e-14) CHECK(rec.e_n[i] < rec.e_n[i - 1]);
  }
  check_e_recomputes(rec, st0.powers);
  check_trace_shape(rec, sc.K());
}

TEST_CASE("one-user composite procedures reduce to the power game") {
  const mpmp::EfficiencyParams ep;
  mpmp::DynamicsConfig cfg;
  const mpmp::Scenario sc = peer_with_gains(
      (Eigen::MatrixXd(1, 1) << 0.3).finished(), 4, 1e-3);
  const mpmp::GameState st0 = start_state(sc, 13);

  mpmp::DynamicsConfig pcfg = cfg;
  pcfg.game = mpmp::GameKind::PowerOnlyLMMSE;
  const double p_ref =
      mpmp::run_power_game(sc, st0, ep, pcfg).final_state.powers[0];

  const mpmp::RunRecord a1 = mpmp::run_algorithm1(sc, st0, ep, cfg);
  const mpmp::RunRecord a2 = mpmp::run_algorithm2(sc, st0, ep, cfg);
  CHECK(a1.converged);
  CHECK(a2.converged);
  CHECK_THAT(a1.final_state.powers[0], WithinRel(p_ref, 1e-12));
  CHECK_THAT(a2.final_state.powers[0], WithinRel(p_ref, 1e-12));
  CHECK(a1.game == mpmp::GameKind::Algorithm1);
  CHECK(a2.game == mpmp::GameKind::Algorithm2);
}

TEST_CASE("algorithm 1 equalizes SINRs at the target when underloaded") {
  const mpmp::EfficiencyParams ep;
  const mpmp::Scenario sc = o1_peer(4, 8, 1e-3, 5);
  const mpmp::GameState st0 = start_state(sc, 9);
  const mpmp::DynamicsConfig cfg;
  const mpmp::RunRecord rec = mpmp::run_algorithm1(sc, st0, ep, cfg);
  CHECK(rec.converged);
  const double target = mpmp::gamma_bar(ep.M);
  for (int k = 0; k < sc.K(); ++k) {
    CHECK(rec.final_state.powers[k] < ep.P_max);  // caps inactive
    CHECK_THAT(mpmp::lmmse_sinr(k, sc, rec.final_state),
               WithinRel(target, 1e-6));
  }
  CHECK(gram_error(rec.final_state.codes) < 1e-4);
}

TEST_CASE("algorithm 2 converges within a few outer iterations") {
  const mpmp::EfficiencyParams ep;
  const mpmp::DynamicsConfig cfg;

  SECTION("small generated network") {
    const mpmp::Scenario sc = random_peer(3, 31);
    const mpmp::GameState st0 = start_state(sc, 31);
    const mpmp::RunRecord rec = mpmp::run_algorithm2(sc, st0, ep, cfg);
    CHECK(rec.converged);
    CHECK(rec.rounds_used <= 8);
    check_trace_shape(rec, sc.K());
    check_e_recomputes(rec, st0.powers);
  }
  SECTION("large generated network") {
    const mpmp::Scenario sc = random_peer(30, 31);
    const mpmp::GameState st0 = start_state(sc, 77);
    const mpmp::RunRecord rec = mpmp::run_algorithm2(sc, st0, ep, cfg);
    CHECK(rec.converged);
    CHECK(rec.rounds_used <= 20);
  }
  SECTION("interior equilibrium is a fixed point of one more iteration") {
    const mpmp::Scenario sc = o1_peer(3, 8, 1e-3, 7);
    const mpmp::GameState st0 = start_state(sc, 15);
    const mpmp::RunRecord rec = mpmp::run_algorithm2(sc, st0, ep, cfg);
    CHECK(rec.converged);
    CHECK(rec.rounds_used <= 8);

    // Replay one outer iteration by hand from the converged state.
    mpmp::DynamicsConfig code_cfg = cfg;
    code_cfg.game = mpmp::GameKind::TmseMin;
    mpmp::DynamicsConfig power_cfg = cfg;
    power_cfg.game = mpmp::GameKind::PowerOnlyLMMSE;
    mpmp::GameState next =
        mpmp::run_code_game(mpmp::GameKind::TmseMin, sc, rec.final_state,
                            code_cfg)
            .final_state;
    next = mpmp::run_power_game(sc, next, ep, power_cfg).final_state;

    for (int k = 0; k < sc.K(); ++k) {
      const double rel =
          std::abs(next.powers[k] - rec.final_state.powers[k]) /
          rec.final_state.powers[k];
      CHECK(rel < 10.0 * cfg.power_tol);
      CHECK(mpmp::code_change(rec.final_state.codes.col(k),
                              next.codes.col(k)) < 1e-2);
    }
  }
}

TEST_CASE("runs are deterministic down to the bit") {
  const mpmp::EfficiencyParams ep;
  const mpmp::DynamicsConfig cfg;
  const mpmp::Scenario sc = o1_peer(3, 8, 1e-3, 7);
  const mpmp::GameState st0 = start_state(sc, 15);
  const mpmp::RunRecord a = mpmp::run_algorithm2(sc, st0, ep, cfg);
  const mpmp::RunRecord b = mpmp::run_algorithm2(sc, st0, ep, cfg);
  CHECK(a.converged == b.converged);
  CHECK(a.rounds_used == b.rounds_used);
  CHECK(a.potential == b.potential);
  CHECK(a.e_n == b.e_n);
  CHECK(a.max_code_change == b.max_code_change);
  for (std::size_t i = 0; i < a.power.size(); ++i) {
    CHECK(a.power[i] == b.power[i]);
    CHECK(a.sinr[i] == b.sinr[i]);
  }
  CHECK(a.final_state.codes == b.final_state.codes);
  CHECK(a.final_state.powers == b.final_state.powers);
  CHECK(a.final_state.receivers == b.final_state.receivers);
}

TEST_CASE("degenerate powers surface as errors from code games") {
  const mpmp::Scenario sc = random_peer(3, 2);
  mpmp::GameState st0 = start_state(sc, 4);
  st0.powers[1] = 0.0;
  mpmp::DynamicsConfig cfg;
  cfg.game = mpmp::GameKind::Menon;
  CHECK_THROWS_AS(mpmp::run_code_game(cfg.game, sc, st0, cfg),
                  mpmp::DegeneratePowerError);
}

TEST_CASE("run_game dispatches on the configured game") {
  const mpmp::EfficiencyParams ep;
  const mpmp::Scenario sc = o1_peer(2, 4, 1e-3, 3);
  const mpmp::GameState st0 = start_state(sc, 6);
  mpmp::DynamicsConfig cfg;
  cfg.game = mpmp::GameKind::SinrPotential;
  CHECK(mpmp::run_game(sc, st0, ep, cfg).game ==
        mpmp::GameKind::SinrPotential);
  cfg.game = mpmp::GameKind::PowerOnlyMF;
  CHECK(mpmp::run_game(sc, st0, ep, cfg).game == mpmp::GameKind::PowerOnlyMF);
  cfg.game = mpmp::GameKind::Algorithm1;
  CHECK(mpmp::run_game(sc, st0, ep, cfg).game == mpmp::GameKind::Algorithm1);
}
