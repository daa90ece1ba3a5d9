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

// Command-line front end.
//
//   mpmp run --config FILE [--seed S] [--trials T] [--jobs J] [--out-dir D]
//   mpmp trace --config FILE [--game G] [--seed S] [--out-dir D]
//   mpmp gamma-bar M
//   mpmp gen-scenario --config FILE [--seed S] [--output FILE]
//
// Output directory resolution: --out-dir flag, then $MPMP_OUT_DIR, then
// ./out. All randomness comes from the config seed or --seed; outputs carry
// no timestamps, so equal inputs give byte-identical files.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mpmp/mpmp.hpp"

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MPMP_OUT_DIR"); env && *env) return env;
  return "out";
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mpmp::IoError("cannot open '" + path.string() + "' for writing");
  out << body;
  if (!out) throw mpmp::IoError("failed writing '" + path.string() + "'");
}

std::filesystem::path prepare_out_dir(const std::string& flag_value) {
  const std::filesystem::path dir = resolve_out_dir(flag_value);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw mpmp::IoError("cannot create output directory '" + dir.string() +
                        "': " + ec.message());
  }
  return dir;
}

// Applies --seed to both the scenario and the campaign so one flag controls
// every random draw.
void apply_seed(mpmp::CliConfig& cfg, const std::optional<std::uint64_t>& seed) {
  if (!seed) return;
  cfg.scenario.seed = *seed;
  cfg.campaign.scenario_template.seed = *seed;
  cfg.campaign.base_seed = *seed;
}

int cmd_run(const std::string& config_path,
            const std::optional<std::uint64_t>& seed,
            const std::optional<int>& trials, const std::optional<int>& jobs,
            const std::string& out_dir_flag) {
  mpmp::CliConfig cfg = mpmp::load_config_file(config_path);
  apply_seed(cfg, seed);
  if (trials) cfg.campaign.trials = *trials;
  if (jobs) cfg.campaign.jobs = *jobs;
  cfg.campaign.validate();

  const mpmp::AggregateResult result = mpmp::run_campaign(cfg.campaign);

  const std::filesystem::path dir = prepare_out_dir(out_dir_flag);
  write_file(dir / "results.csv", mpmp::aggregate_to_csv(result));
  write_file(dir / "results.json", mpmp::aggregate_to_json(result).dump(2) + "\n");

  std::cout << "campaign: trials=" << cfg.campaign.trials
            << " base_seed=" << cfg.campaign.base_seed
            << " games=" << cfg.campaign.games.size()
            << " K_values=" << cfg.campaign.k_list.size() << "\n";
  for (const mpmp::AggregateCell& cell : result.cells) {
    std::cout << "K=" << cell.K << " game=" << mpmp::to_string(cell.game);
    for (const auto& [name, s] : cell.metrics) {
      std::cout << " " << name << "=" << mpmp::format_double(s.mean);
    }
    std::cout << " failures=" << cell.failures << "\n";
  }
  std::cout << "wrote " << (dir / "results.csv").string() << " and "
            << (dir / "results.json").string() << "\n";
  return 0;
}

int cmd_trace(const std::string& config_path, const std::string& game_name,
              const std::optional<std::uint64_t>& seed,
              const std::string& out_dir_flag) {
  mpmp::CliConfig cfg = mpmp::load_config_file(config_path);
  apply_seed(cfg, seed);
  mpmp::DynamicsConfig dyn = cfg.dynamics;
  if (!game_name.empty()) dyn.game = mpmp::game_kind_from_string(game_name);

  const mpmp::Scenario sc = mpmp::generate_scenario(cfg.scenario);
  const Eigen::MatrixXd codes = mpmp::random_codes(
      sc.N(), sc.K(), mpmp::codes_seed(cfg.scenario.seed));
  const mpmp::GameState st0 =
      mpmp::initial_state(sc, codes, cfg.efficiency.P_max);
  const mpmp::RunRecord rec = mpmp::run_game(sc, st0, cfg.efficiency, dyn);

  const std::filesystem::path dir = prepare_out_dir(out_dir_flag);
  const std::filesystem::path path =
      dir / ("trace_" + std::string(mpmp::to_string(dyn.game)) + ".json");
  write_file(path, mpmp::run_record_to_json(rec).dump(2) + "\n");

  std::cout << "game=" << mpmp::to_string(dyn.game)
            << " converged=" << (rec.converged ? "true" : "false")
            << " rounds_used=" << rec.rounds_used << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_gamma_bar(int m) {
  const double value = mpmp::gamma_bar(m);
  std::printf("%.10g\n", value);
  return 0;
}

int cmd_gen_scenario(const std::string& config_path,
                     const std::optional<std::uint64_t>& seed,
                     const std::string& output) {
  mpmp::CliConfig cfg = mpmp::load_config_file(config_path);
  apply_seed(cfg, seed);
  const mpmp::Scenario sc = mpmp::generate_scenario(cfg.scenario);
  const std::string body = mpmp::scenario_to_json(sc).dump(2) + "\n";
  if (output.empty()) {
    std::cout << body;
  } else {
    write_file(output, body);
    std::cout << "wrote " << output << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Non-cooperative code, receiver, and power allocation games for "
      "multipoint-to-multipoint CDMA networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string game_name;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> jobs;
  int gamma_m = 0;

  CLI::App* run = app.add_subcommand(
      "run", "Execute the configured Monte Carlo campaign (CSV + JSON)");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--seed", seed, "Override scenario seed and campaign base seed");
  run->add_option("--trials", trials, "Override the number of trials");
  run->add_option("--jobs", jobs, "Worker threads (results are identical)");
  run->add_option("--out-dir", out_dir,
                  "Output directory (default: $MPMP_OUT_DIR, then ./out)");

  CLI::App* trace = app.add_subcommand(
      "trace", "Run one game on one scenario and write its full trace JSON");
  trace->add_option("--config", config_path, "Configuration file")->required();
  trace->add_option("--game", game_name, "Game to run (default: [dynamics] game)");
  trace->add_option("--seed", seed, "Override the scenario seed");
  trace->add_option("--out-dir", out_dir,
                    "Output directory (default: $MPMP_OUT_DIR, then ./out)");

  CLI::App* gamma = app.add_subcommand(
      "gamma-bar", "Print the target SINR of the power game for packet size M");
  gamma->add_option("M", gamma_m, "Bits per packet (M >= 2)")->required();

  CLI::App* gen = app.add_subcommand(
      "gen-scenario", "Generate the configured scenario and emit its JSON");
  gen->add_option("--config", config_path, "Configuration file")->required();
  gen->add_option("--seed", seed, "Override the scenario seed");
  gen->add_option("--output", output, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, trials, jobs, out_dir);
    if (trace->parsed()) return cmd_trace(config_path, game_name, seed, out_dir);
    if (gamma->parsed()) return cmd_gamma_bar(gamma_m);
    if (gen->parsed()) return cmd_gen_scenario(config_path, seed, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
