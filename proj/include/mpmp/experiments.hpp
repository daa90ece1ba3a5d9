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

// Monte Carlo campaigns over random scenarios.
//
// Pairing: trial t at load K fixes one scenario (seed base_seed mixed with
// t and K) and one random starting code matrix; every listed game runs from
// that identical starting point, so cross-game differences are paired
// samples. Trials are independent and may run on several threads; the
// reduction is applied in fixed trial order, so the result is bit-identical
// regardless of jobs.

#ifndef MPMP_EXPERIMENTS_HPP_
#define MPMP_EXPERIMENTS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mpmp/dynamics.hpp"
#include "mpmp/errors.hpp"
#include "mpmp/games.hpp"
#include "mpmp/model.hpp"
#include "mpmp/random.hpp"

namespace mpmp {

// Seed of trial t at load K. The (t+1) factor keeps trial 0 from collapsing
// onto the raw base seed.
inline std::uint64_t trial_seed(std::uint64_t base_seed, int t, int k) {
  return base_seed ^ mix64(kSeedGamma * (static_cast<std::uint64_t>(t) + 1) ^
                           mix64(static_cast<std::uint64_t>(k)));
}

// Starting-code seed for a trial, decorrelated from the scenario stream.
inline std::uint64_t codes_seed(std::uint64_t scenario_seed) {
  return mix64(scenario_seed ^ 0xC0DE5EEDull);
}

struct Campaign {
  ScenarioConfig scenario_template;  // K (and peer-to-peer B) swept per k_list
  std::vector<int> k_list;
  std::vector<DynamicsConfig> games;
  int trials = 200;
  std::uint64_t base_seed = 1;
  EfficiencyParams efficiency;
  int jobs = 1;  // worker threads; does not affect results

  void validate() const {
    if (trials < 1) throw ValidationError("Campaign: trials must be >= 1");
    if (k_list.empty()) throw ValidationError("Campaign: K list is empty");
    for (const int k : k_list) {
      if (k < 1) throw ValidationError("Campaign: every K must be >= 1");
    }
    if (games.empty()) throw ValidationError("Campaign: no games listed");
    for (const DynamicsConfig& g : games) g.validate();
    efficiency.validate();
    if (jobs < 1) throw ValidationError("Campaign: jobs must be >= 1");
  }

  friend bool operator==(const Campaign&, const Campaign&) = default;
};

// Names and order of the per-trial metrics, as emitted in CSV/JSON.
inline const std::array<const char*, 6>& metric_names() {
  static const std::array<const char*, 6> names = {
      "sinr_db",      "sinr_linear",        "efficiency_bit_per_joule",
      "mean_power_w", "rounds_to_converge", "convergence_rate"};
  return names;
}

struct MetricSummary {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;                 // successful trials behind the mean
  std::vector<double> per_trial;  // successful trials, in trial order
};

struct AggregateCell {
  int K = 0;
  GameKind game = GameKind::GreedyIA;
  int trials_attempted = 0;
  int failures = 0;
  // One entry per metric_names() element, same order.
  std::vector<std::pair<std::string, MetricSummary>> metrics;
};

struct AggregateResult {
  Campaign campaign;
  std::vector<AggregateCell> cells;  // k_list-major, then game order
};

namespace detail {

// Per-user averages on the final state of one run. Order matches
// metric_names().
inline std::array<double, 6> trial_metrics(const Scenario& sc,
                                           const EfficiencyParams& ep,
                                           const DynamicsConfig& g,
                                           const RunRecord& rec) {
  const GameState& st = rec.final_state;
  double sinr_lin = 0.0;
  double eff = 0.0;
  double pow_w = 0.0;
  for (int k = 0; k < sc.K(); ++k) {
    sinr_lin += measured_sinr(k, sc, st, g.report);
    eff += energy_efficiency(k, sc, st, ep);
    pow_w += st.powers[k];
  }
  sinr_lin /= sc.K();
  eff /= sc.K();
  pow_w /= sc.K();
  return {10.0 * std::log10(sinr_lin),
          sinr_lin,
          eff,
          pow_w,
          static_cast<double>(rec.rounds_used),
          rec.converged ? 1.0 : 0.0};
}

struct TrialOutcome {
  // games.size() entries; ok=false marks a failed (excluded) run.
  struct PerGame {
    bool ok = false;
    std::array<double, 6> values{};
  };
  std::vector<PerGame> per_game;
};

inline ScenarioConfig stamp_scenario(const ScenarioConfig& tpl, int k,
                                     std::uint64_t seed) {
  ScenarioConfig cfg = tpl;
  cfg.K = k;
  if (cfg.kind == ScenarioKind::PeerToPeer) cfg.B = k;
  cfg.seed = seed;
  return cfg;
}

// Runs every game of the campaign on trial t's paired (scenario, codes).
inline TrialOutcome run_trial(const Campaign& c, int k, int t) {
  TrialOutcome out;
  out.per_game.resize(c.games.size());
  Scenario sc;
  Eigen::MatrixXd codes;
  try {
    const std::uint64_t seed = trial_seed(c.base_seed, t, k);
    sc = generate_scenario(stamp_scenario(c.scenario_template, k, seed));
    codes = random_codes(sc.N(), sc.K(), codes_seed(seed));
  } catch (const std::exception&) {
    return out;  // scenario generation failed: every game counts as failed
  }
  for (std::size_t gi = 0; gi < c.games.size(); ++gi) {
    try {
      const GameState st0 =
          initial_state(sc, codes, c.efficiency.P_max, ReceiverMode::Lmmse);
      const RunRecord rec = run_game(sc, st0, c.efficiency, c.games[gi]);
      out.per_game[gi].values = trial_metrics(sc, c.efficiency, c.games[gi], rec);
      out.per_game[gi].ok = true;
    } catch (const std::exception&) {
      out.per_game[gi].ok = false;
    }
  }
  return out;
}

inline MetricSummary summarize(std::vector<double> samples) {
  MetricSummary s;
  s.trials = static_cast<int>(samples.size());
  if (s.trials == 0) return s;
  double sum = 0.0;
  for (const double v : samples) sum += v;
  s.mean = sum / s.trials;
  if (s.trials > 1) {
    double ss = 0.0;
    for (const double v : samples) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / (s.trials - 1)) / std::sqrt(double(s.trials));
  }
  s.per_trial = std::move(samples);
  return s;
}

}  // namespace detail

inline AggregateResult run_campaign(const Campaign& c) {
  c.validate();
  const int nk = static_cast<int>(c.k_list.size());
  const int ng = static_cast<int>(c.games.size());

  // Slot matrix: outcomes[ki * trials + t]. Workers fill disjoint slots, so
  // the later reduction is schedule-independent.
  std::vector<detail::TrialOutcome> outcomes(
      static_cast<std::size_t>(nk) * c.trials);
  const auto work = [&](std::size_t idx) {
    const int ki = static_cast<int>(idx) / c.trials;
    const int t = static_cast<int>(idx) % c.trials;
    outcomes[idx] = detail::run_trial(c, c.k_list[ki], t);
  };

  if (c.jobs <= 1) {
    for (std::size_t i = 0; i < outcomes.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(c.jobs, static_cast<int>(outcomes.size()));
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < outcomes.size();
             i = next.fetch_add(1)) {
          work(i);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  AggregateResult res;
  res.campaign = c;
  for (int ki = 0; ki < nk; ++ki) {
    for (int gi = 0; gi < ng; ++gi) {
      AggregateCell cell;
      cell.K = c.k_list[ki];
      cell.game = c.games[gi].game;
      cell.trials_attempted = c.trials;
      std::array<std::vector<double>, 6> columns;
      for (int t = 0; t < c.trials; ++t) {
        const auto& pg =
            outcomes[static_cast<std::size_t>(ki) * c.trials + t].per_game[gi];
        if (!pg.ok) {
          ++cell.failures;
          continue;
        }
        for (int m = 0; m < 6; ++m) columns[m].push_back(pg.values[m]);
      }
      for (int m = 0; m < 6; ++m) {
        cell.metrics.emplace_back(metric_names()[m],
                                  detail::summarize(std::move(columns[m])));
      }
      res.cells.push_back(std::move(cell));
    }
  }
  return res;
}

// Outer-iteration count summary for the alternating TMSE/power procedure on
// peer-to-peer scenarios.
struct OuterIterationRow {
  int K = 0;
  double median_outer_iterations = 0.0;
  int converged = 0;
  int trials = 0;
  std::vector<int> iterations;  // successful trials, in trial order
};

inline std::vector<OuterIterationRow> table1_replica(
    const std::vector<int>& k_list, int trials, std::uint64_t seed) {
  if (k_list.empty() || trials < 1) {
    throw InvalidInputError("table1_replica: need non-empty K list, trials >= 1");
  }
  ScenarioConfig tpl;
  tpl.kind = ScenarioKind::PeerToPeer;
  tpl.N = 8;
  DynamicsConfig cfg;
  cfg.game = GameKind::Algorithm2;
  const EfficiencyParams ep;

  std::vector<OuterIterationRow> rows;
  for (const int k : k_list) {
    OuterIterationRow row;
    row.K = k;
    row.trials = trials;
    for (int t = 0; t < trials; ++t) {
      try {
        const std::uint64_t s = trial_seed(seed, t, k);
        const Scenario sc =
            generate_scenario(detail::stamp_scenario(tpl, k, s));
        const Eigen::MatrixXd codes =
            random_codes(sc.N(), sc.K(), codes_seed(s));
        const GameState st0 = initial_state(sc, codes, ep.P_max);
        const RunRecord rec = run_algorithm2(sc, st0, ep, cfg);
        row.iterations.push_back(rec.rounds_used);
        if (rec.converged) ++row.converged;
      } catch (const std::exception&) {
        // excluded from the median
      }
    }
    std::vector<int> sorted = row.iterations;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n > 0) {
      row.median_outer_iterations =
          n % 2 == 1 ? sorted[n / 2]
                     : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mpmp

#endif  // MPMP_EXPERIMENTS_HPP_
