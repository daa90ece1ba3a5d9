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

// Human-readable experiment configuration: an INI-style file with sections
// [scenario], [efficiency], [dynamics], [campaign].
//
//   [scenario]   kind, K, N, noise_variance (required);
//                B, side_m, seed, d_min_m (optional)
//   [efficiency] R, L, M, P_max (all optional)
//   [dynamics]   game, max_rounds, power_rounds, outer_rounds, code_tol,
//                power_tol, schedule, report (all optional)
//   [campaign]   k_list, games, trials, base_seed, jobs (all optional)
//
// Lines are `key = value`; `#` or `;` starts a comment; lists are
// comma-separated. Unknown sections, unknown keys, and duplicate keys are
// line-numbered errors. Defaults: B follows the scenario kind (peer-to-peer
// K, multicell 4, femtocell 6); k_list defaults to {K}; games defaults to
// the [dynamics] game; base_seed defaults to the scenario seed. The
// [campaign] games list stamps each named game onto the [dynamics] settings,
// so tolerances, caps, and the SINR report convention are shared.
//
// Round trip: for any parsed config c, parse_config(serialize_config(c)) == c.

#ifndef MPMP_CONFIG_HPP_
#define MPMP_CONFIG_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mpmp/dynamics.hpp"
#include "mpmp/errors.hpp"
#include "mpmp/experiments.hpp"
#include "mpmp/games.hpp"
#include "mpmp/model.hpp"
#include "mpmp/serialize.hpp"

namespace mpmp {

struct CliConfig {
  ScenarioConfig scenario;
  EfficiencyParams efficiency;
  DynamicsConfig dynamics;
  Campaign campaign;  // fully resolved from the sections above

  friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ConfigEntry {
  std::string value;
  int line = 0;
};

using ConfigSections =
    std::map<std::string, std::map<std::string, ConfigEntry>>;

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"scenario",
       {"kind", "K", "B", "N", "side_m", "noise_variance", "seed", "d_min_m"}},
      {"efficiency", {"R", "L", "M", "P_max"}},
      {"dynamics",
       {"game", "max_rounds", "power_rounds", "outer_rounds", "code_tol",
        "power_tol", "schedule", "report"}},
      {"campaign", {"k_list", "games", "trials", "base_seed", "jobs"}},
  };
  return schema;
}

inline ConfigSections parse_ini(const std::string& text,
                                const std::string& source) {
  ConfigSections sections;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  const auto fail = [&](int line, const std::string& msg) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail(line_no, "malformed section header '" + trim(raw) + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (config_schema().find(section) == config_schema().end()) {
        fail(line_no, "unknown section [" + section + "]");
      }
      sections[section];  // remember even if empty
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected 'key = value', got '" + line + "'");
    }
    if (section.empty()) {
      fail(line_no, "key outside of any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");
    const std::set<std::string>& known = config_schema().at(section);
    if (known.find(key) == known.end()) {
      fail(line_no, "unknown key '" + key + "' in [" + section + "]");
    }
    auto& sec = sections[section];
    if (sec.find(key) != sec.end()) {
      fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    sec[key] = ConfigEntry{value, line_no};
  }
  return sections;
}

// Typed access to one parsed section, with path-qualified errors.
class SectionReader {
 public:
  SectionReader(const ConfigSections& sections, std::string name,
                std::string source)
      : name_(std::move(name)), source_(std::move(source)) {
    const auto it = sections.find(name_);
    if (it != sections.end()) entries_ = &it->second;
  }

  bool has(const std::string& key) const {
    return entries_ != nullptr && entries_->count(key) > 0;
  }

  std::string raw(const std::string& key) const {
    return entries_->at(key).value;
  }

  std::string str_required(const std::string& key) const {
    if (!has(key)) {
      throw ParseError(source_ + ": missing required field '" + key +
                       "' in [" + name_ + "]");
    }
    return raw(key);
  }

  template <class T>
  T number(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    return parse_number<T>(raw(key), key);
  }

  template <class T>
  T number_required(const std::string& key) const {
    return parse_number<T>(str_required(key), key);
  }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> items;
    std::string value = raw(key);
    std::size_t pos = 0;
    while (pos <= value.size()) {
      const std::size_t comma = value.find(',', pos);
      const std::string item = trim(
          value.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (item.empty()) {
        throw ParseError(where(key) + ": empty list element");
      }
      items.push_back(item);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return items;
  }

  std::string where(const std::string& key) const {
    return source_ + ": [" + name_ + "] " + key;
  }

 private:
  template <class T>
  T parse_number(const std::string& text, const std::string& key) const {
    T out{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const std::from_chars_result r = std::from_chars(first, last, out);
    if (r.ec != std::errc() || r.ptr != last) {
      throw ParseError(where(key) + ": cannot parse number '" + text + "'");
    }
    return out;
  }

  std::string name_;
  std::string source_;
  const std::map<std::string, ConfigEntry>* entries_ = nullptr;
};

inline int default_receiver_count(ScenarioKind kind, int k) {
  switch (kind) {
    case ScenarioKind::PeerToPeer: return k;
    case ScenarioKind::Multicell: return 4;
    case ScenarioKind::Femtocell: return 6;
    case ScenarioKind::DownlinkSingleCell: return 1;
  }
  throw InvalidInputError("default_receiver_count: unknown kind");
}

}  // namespace detail

inline CliConfig parse_config(const std::string& text,
                              const std::string& source = "config") {
  const detail::ConfigSections sections = detail::parse_ini(text, source);
  CliConfig c;

  const detail::SectionReader sc(sections, "scenario", source);
  c.scenario.kind = scenario_kind_from_string(sc.str_required("kind"));
  c.scenario.K = sc.number_required<int>("K");
  c.scenario.N = sc.number_required<int>("N");
  c.scenario.noise_variance = sc.number_required<double>("noise_variance");
  c.scenario.B = sc.number<int>(
      "B", detail::default_receiver_count(c.scenario.kind, c.scenario.K));
  c.scenario.side_m = sc.number<double>("side_m", c.scenario.side_m);
  c.scenario.seed = sc.number<std::uint64_t>("seed", c.scenario.seed);
  c.scenario.d_min_m = sc.number<double>("d_min_m", c.scenario.d_min_m);

  const detail::SectionReader ef(sections, "efficiency", source);
  c.efficiency.R = ef.number<double>("R", c.efficiency.R);
  c.efficiency.L = ef.number<int>("L", c.efficiency.L);
  c.efficiency.M = ef.number<int>("M", c.efficiency.M);
  c.efficiency.P_max = ef.number<double>("P_max", c.efficiency.P_max);

  const detail::SectionReader dy(sections, "dynamics", source);
  if (dy.has("game")) c.dynamics.game = game_kind_from_string(dy.raw("game"));
  c.dynamics.max_rounds = dy.number<int>("max_rounds", c.dynamics.max_rounds);
  c.dynamics.power_rounds =
      dy.number<int>("power_rounds", c.dynamics.power_rounds);
  c.dynamics.outer_rounds =
      dy.number<int>("outer_rounds", c.dynamics.outer_rounds);
  c.dynamics.code_tol = dy.number<double>("code_tol", c.dynamics.code_tol);
  c.dynamics.power_tol = dy.number<double>("power_tol", c.dynamics.power_tol);
  if (dy.has("schedule")) {
    c.dynamics.schedule = schedule_from_string(dy.raw("schedule"));
  }
  if (dy.has("report")) {
    c.dynamics.report = receiver_mode_from_string(dy.raw("report"));
  }

  const detail::SectionReader ca(sections, "campaign", source);
  c.campaign.scenario_template = c.scenario;
  c.campaign.efficiency = c.efficiency;
  if (ca.has("k_list")) {
    for (const std::string& item : ca.list("k_list")) {
      int k = 0;
      const std::from_chars_result r =
          std::from_chars(item.data(), item.data() + item.size(), k);
      if (r.ec != std::errc() || r.ptr != item.data() + item.size()) {
        throw ParseError(ca.where("k_list") + ": cannot parse number '" +
                         item + "'");
      }
      c.campaign.k_list.push_back(k);
    }
  } else {
    c.campaign.k_list = {c.scenario.K};
  }
  if (ca.has("games")) {
    for (const std::string& item : ca.list("games")) {
      DynamicsConfig g = c.dynamics;
      g.game = game_kind_from_string(item);
      c.campaign.games.push_back(g);
    }
  } else {
    c.campaign.games = {c.dynamics};
  }
  c.campaign.trials = ca.number<int>("trials", c.campaign.trials);
  c.campaign.base_seed =
      ca.number<std::uint64_t>("base_seed", c.scenario.seed);
  c.campaign.jobs = ca.number<int>("jobs", c.campaign.jobs);

  try {
    c.scenario.validate();
    c.efficiency.validate();
    c.dynamics.validate();
    c.campaign.validate();
  } catch (const Error& e) {
    throw ParseError(source + ": " + e.what());
  }
  return c;
}

// Canonical text form; every field explicit. parse_config round-trips it.
inline std::string serialize_config(const CliConfig& c) {
  std::string out;
  const auto kv = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  out += "[scenario]\n";
  kv("kind", to_string(c.scenario.kind));
  kv("K", std::to_string(c.scenario.K));
  kv("B", std::to_string(c.scenario.B));
  kv("N", std::to_string(c.scenario.N));
  kv("side_m", format_double(c.scenario.side_m));
  kv("noise_variance", format_double(c.scenario.noise_variance));
  kv("seed", std::to_string(c.scenario.seed));
  kv("d_min_m", format_double(c.scenario.d_min_m));
  out += "\n[efficiency]\n";
  kv("R", format_double(c.efficiency.R));
  kv("L", std::to_string(c.efficiency.L));
  kv("M", std::to_string(c.efficiency.M));
  kv("P_max", format_double(c.efficiency.P_max));
  out += "\n[dynamics]\n";
  kv("game", to_string(c.dynamics.game));
  kv("max_rounds", std::to_string(c.dynamics.max_rounds));
  kv("power_rounds", std::to_string(c.dynamics.power_rounds));
  kv("outer_rounds", std::to_string(c.dynamics.outer_rounds));
  kv("code_tol", format_double(c.dynamics.code_tol));
  kv("power_tol", format_double(c.dynamics.power_tol));
  kv("schedule", to_string(c.dynamics.schedule));
  kv("report", to_string(c.dynamics.report));
  out += "\n[campaign]\n";
  std::string k_list;
  for (const int k : c.campaign.k_list) {
    if (!k_list.empty()) k_list += ", ";
    k_list += std::to_string(k);
  }
  kv("k_list", k_list);
  std::string games;
  for (const DynamicsConfig& g : c.campaign.games) {
    if (!games.empty()) games += ", ";
    games += to_string(g.game);
  }
  kv("games", games);
  kv("trials", std::to_string(c.campaign.trials));
  kv("base_seed", std::to_string(c.campaign.base_seed));
  kv("jobs", std::to_string(c.campaign.jobs));
  return out;
}

inline CliConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace mpmp

#endif  // MPMP_CONFIG_HPP_
