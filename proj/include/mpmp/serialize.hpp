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

// JSON and CSV serialization. Schemas (stable; golden-tested):
//
// Scenario:
//   { "config": {"kind","K","B","N","side_m","noise_variance","seed","d_min_m"},
//     "user_positions": K rows of [x, y],
//     "receiver_positions": B rows of [x, y],
//     "gains": K rows of B amplitudes (row-major),
//     "assignment": K receiver indices (0-based) }
//
// GameState: codes and receivers are stored per user, one length-N array
// per user (user k's column of the in-memory matrix):
//   { "codes": K rows of N, "powers": length K, "receivers": K rows of N }
//
// RunRecord:
//   { "game", "converged", "rounds_used",
//     "trace": { "potential", "sinr" (rows of K), "power" (rows of K),
//                "e_n", "max_code_change" },   // all length rounds_used
//     "final_state": GameState }
//
// AggregateResult:
//   { "campaign": { "scenario_template", "k_list", "games", "trials",
//                   "base_seed", "efficiency", "jobs" },
//     "cells": [ { "K", "game", "trials_attempted", "failures",
//                  "metrics": { name: {"mean","stderr","trials",
//                                      "per_trial"} } } ] }
//
// CSV (one row per (K, game, metric)): header `K,game,metric,mean,stderr,trials`.
//
// All numbers are emitted in shortest round-trip form, so identical inputs
// produce byte-identical documents.

#ifndef MPMP_SERIALIZE_HPP_
#define MPMP_SERIALIZE_HPP_

#include <Eigen/Dense>
#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mpmp/dynamics.hpp"
#include "mpmp/errors.hpp"
#include "mpmp/experiments.hpp"
#include "mpmp/games.hpp"
#include "mpmp/model.hpp"

namespace mpmp {

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result r = std::to_chars(buf, buf + sizeof(buf), v);
  if (r.ec != std::errc()) throw IoError("format_double: conversion failed");
  return std::string(buf, r.ptr);
}

namespace detail {

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

inline nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Eigen::VectorXd vec_from_json(const nlohmann::json& a,
                                     const char* what) {
  if (!a.is_array()) {
    throw ParseError(std::string(what) + ": expected an array");
  }
  Eigen::VectorXd v(a.size());
  Eigen::Index i = 0;
  for (const auto& x : a) {
    if (!x.is_number()) {
      throw ParseError(std::string(what) + ": expected numbers");
    }
    v[i++] = x.get<double>();
  }
  return v;
}

// Matrix as one array per column (per-user layout for codes/receivers).
inline nlohmann::json cols_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    a.push_back(vec_to_json(m.col(c)));
  }
  return a;
}

inline Eigen::MatrixXd cols_from_json(const nlohmann::json& a,
                                      const char* what) {
  if (!a.is_array() || a.empty()) {
    throw ParseError(std::string(what) + ": expected a non-empty array");
  }
  const Eigen::VectorXd first = vec_from_json(a.at(0), what);
  Eigen::MatrixXd m(first.size(), a.size());
  m.col(0) = first;
  for (std::size_t c = 1; c < a.size(); ++c) {
    const Eigen::VectorXd col = vec_from_json(a.at(c), what);
    if (col.size() != m.rows()) {
      throw ParseError(std::string(what) + ": ragged rows");
    }
    m.col(static_cast<Eigen::Index>(c)) = col;
  }
  return m;
}

// Matrix as one array per row (positions and gains layout).
inline nlohmann::json rows_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    a.push_back(vec_to_json(m.row(r).transpose()));
  }
  return a;
}

inline Eigen::MatrixXd rows_from_json(const nlohmann::json& a,
                                      const char* what) {
  return cols_from_json(a, what).transpose();
}

}  // namespace detail

inline nlohmann::json scenario_config_to_json(const ScenarioConfig& c) {
  return {{"kind", to_string(c.kind)}, {"K", c.K},
          {"B", c.B},                  {"N", c.N},
          {"side_m", c.side_m},        {"noise_variance", c.noise_variance},
          {"seed", c.seed},            {"d_min_m", c.d_min_m}};
}

inline ScenarioConfig scenario_config_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  c.kind = scenario_kind_from_string(
      detail::get_field<std::string>(j, "kind"));
  c.K = detail::get_field<int>(j, "K");
  c.B = detail::get_field<int>(j, "B");
  c.N = detail::get_field<int>(j, "N");
  c.side_m = detail::get_field<double>(j, "side_m");
  c.noise_variance = detail::get_field<double>(j, "noise_variance");
  c.seed = detail::get_field<std::uint64_t>(j, "seed");
  c.d_min_m = detail::get_field<double>(j, "d_min_m");
  c.validate();
  return c;
}

inline nlohmann::json scenario_to_json(const Scenario& sc) {
  return {{"config", scenario_config_to_json(sc.config)},
          {"user_positions", detail::rows_to_json(sc.user_positions)},
          {"receiver_positions", detail::rows_to_json(sc.receiver_positions)},
          {"gains", detail::rows_to_json(sc.gains)},
          {"assignment", sc.assignment}};
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("scenario: expected an object");
  Scenario sc;
  sc.config = scenario_config_from_json(
      j.contains("config") ? j.at("config")
                           : throw ParseError("missing field 'config'"));
  sc.user_positions = detail::rows_from_json(
      detail::get_field<nlohmann::json>(j, "user_positions"),
      "user_positions");
  sc.receiver_positions = detail::rows_from_json(
      detail::get_field<nlohmann::json>(j, "receiver_positions"),
      "receiver_positions");
  sc.gains =
      detail::rows_from_json(detail::get_field<nlohmann::json>(j, "gains"),
                             "gains");
  sc.assignment = detail::get_field<std::vector<int>>(j, "assignment");
  sc.validate();
  return sc;
}

inline nlohmann::json game_state_to_json(const GameState& st) {
  return {{"codes", detail::cols_to_json(st.codes)},
          {"powers", detail::vec_to_json(st.powers)},
          {"receivers", detail::cols_to_json(st.receivers)}};
}

inline GameState game_state_from_json(const nlohmann::json& j) {
  GameState st;
  st.codes = detail::cols_from_json(
      detail::get_field<nlohmann::json>(j, "codes"), "codes");
  st.powers = detail::vec_from_json(
      detail::get_field<nlohmann::json>(j, "powers"), "powers");
  st.receivers = detail::cols_from_json(
      detail::get_field<nlohmann::json>(j, "receivers"), "receivers");
  st.validate();
  return st;
}

inline nlohmann::json efficiency_to_json(const EfficiencyParams& e) {
  return {{"R", e.R}, {"L", e.L}, {"M", e.M}, {"P_max", e.P_max}};
}

inline EfficiencyParams efficiency_from_json(const nlohmann::json& j) {
  EfficiencyParams e;
  e.R = detail::get_field<double>(j, "R");
  e.L = detail::get_field<int>(j, "L");
  e.M = detail::get_field<int>(j, "M");
  e.P_max = detail::get_field<double>(j, "P_max");
  e.validate();
  return e;
}

inline nlohmann::json dynamics_to_json(const DynamicsConfig& d) {
  return {{"max_rounds", d.max_rounds},
          {"power_rounds", d.power_rounds},
          {"outer_rounds", d.outer_rounds},
          {"code_tol", d.code_tol},
          {"power_tol", d.power_tol},
          {"schedule", to_string(d.schedule)},
          {"game", to_string(d.game)},
          {"report", to_string(d.report)}};
}

inline DynamicsConfig dynamics_from_json(const nlohmann::json& j) {
  DynamicsConfig d;
  d.max_rounds = detail::get_field<int>(j, "max_rounds");
  d.power_rounds = detail::get_field<int>(j, "power_rounds");
  d.outer_rounds = detail::get_field<int>(j, "outer_rounds");
  d.code_tol = detail::get_field<double>(j, "code_tol");
  d.power_tol = detail::get_field<double>(j, "power_tol");
  d.schedule =
      schedule_from_string(detail::get_field<std::string>(j, "schedule"));
  d.game = game_kind_from_string(detail::get_field<std::string>(j, "game"));
  d.report =
      receiver_mode_from_string(detail::get_field<std::string>(j, "report"));
  d.validate();
  return d;
}

inline nlohmann::json run_record_to_json(const RunRecord& r) {
  nlohmann::json trace;
  trace["potential"] = r.potential;
  nlohmann::json sinr = nlohmann::json::array();
  for (const Eigen::VectorXd& row : r.sinr) sinr.push_back(detail::vec_to_json(row));
  trace["sinr"] = std::move(sinr);
  nlohmann::json power = nlohmann::json::array();
  for (const Eigen::VectorXd& row : r.power) power.push_back(detail::vec_to_json(row));
  trace["power"] = std::move(power);
  trace["e_n"] = r.e_n;
  trace["max_code_change"] = r.max_code_change;
  return {{"game", to_string(r.game)},
          {"converged", r.converged},
          {"rounds_used", r.rounds_used},
          {"trace", std::move(trace)},
          {"final_state", game_state_to_json(r.final_state)}};
}

inline RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.game = game_kind_from_string(detail::get_field<std::string>(j, "game"));
  r.converged = detail::get_field<bool>(j, "converged");
  r.rounds_used = detail::get_field<int>(j, "rounds_used");
  const nlohmann::json trace = detail::get_field<nlohmann::json>(j, "trace");
  r.potential = detail::get_field<std::vector<double>>(trace, "potential");
  for (const auto& row : detail::get_field<nlohmann::json>(trace, "sinr")) {
    r.sinr.push_back(detail::vec_from_json(row, "trace.sinr"));
  }
  for (const auto& row : detail::get_field<nlohmann::json>(trace, "power")) {
    r.power.push_back(detail::vec_from_json(row, "trace.power"));
  }
  r.e_n = detail::get_field<std::vector<double>>(trace, "e_n");
  r.max_code_change =
      detail::get_field<std::vector<double>>(trace, "max_code_change");
  r.final_state = game_state_from_json(
      detail::get_field<nlohmann::json>(j, "final_state"));
  const std::size_t n = static_cast<std::size_t>(r.rounds_used);
  if (r.potential.size() != n || r.sinr.size() != n || r.power.size() != n ||
      r.e_n.size() != n || r.max_code_change.size() != n) {
    throw ParseError("run record: trace length does not match rounds_used");
  }
  return r;
}

inline nlohmann::json campaign_to_json(const Campaign& c) {
  nlohmann::json games = nlohmann::json::array();
  for (const DynamicsConfig& g : c.games) games.push_back(dynamics_to_json(g));
  return {{"scenario_template", scenario_config_to_json(c.scenario_template)},
          {"k_list", c.k_list},
          {"games", std::move(games)},
          {"trials", c.trials},
          {"base_seed", c.base_seed},
          {"efficiency", efficiency_to_json(c.efficiency)},
          {"jobs", c.jobs}};
}

inline Campaign campaign_from_json(const nlohmann::json& j) {
  Campaign c;
  c.scenario_template = scenario_config_from_json(
      detail::get_field<nlohmann::json>(j, "scenario_template"));
  c.k_list = detail::get_field<std::vector<int>>(j, "k_list");
  for (const auto& g : detail::get_field<nlohmann::json>(j, "games")) {
    c.games.push_back(dynamics_from_json(g));
  }
  c.trials = detail::get_field<int>(j, "trials");
  c.base_seed = detail::get_field<std::uint64_t>(j, "base_seed");
  c.efficiency = efficiency_from_json(
      detail::get_field<nlohmann::json>(j, "efficiency"));
  c.jobs = detail::get_field<int>(j, "jobs");
  c.validate();
  return c;
}

inline nlohmann::json aggregate_to_json(const AggregateResult& a) {
  nlohmann::json cells = nlohmann::json::array();
  for (const AggregateCell& cell : a.cells) {
    nlohmann::json metrics;
    for (const auto& [name, s] : cell.metrics) {
      metrics[name] = {{"mean", s.mean},
                       {"stderr", s.std_error},
                       {"trials", s.trials},
                       {"per_trial", s.per_trial}};
    }
    cells.push_back({{"K", cell.K},
                     {"game", to_string(cell.game)},
                     {"trials_attempted", cell.trials_attempted},
                     {"failures", cell.failures},
                     {"metrics", std::move(metrics)}});
  }
  return {{"campaign", campaign_to_json(a.campaign)},
          {"cells", std::move(cells)}};
}

inline std::string aggregate_to_csv(const AggregateResult& a) {
  std::string out = "K,game,metric,mean,stderr,trials\n";
  for (const AggregateCell& cell : a.cells) {
    for (const auto& [name, s] : cell.metrics) {
      out += std::to_string(cell.K);
      out += ',';
      out += to_string(cell.game);
      out += ',';
      out += name;
      out += ',';
      out += format_double(s.mean);
      out += ',';
      out += format_double(s.std_error);
      out += ',';
      out += std::to_string(s.trials);
      out += '\n';
    }
  }
  return out;
}

}  // namespace mpmp

#endif  // MPMP_SERIALIZE_HPP_
