// Copyright 2026 The poqklab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner for the proof-of-quantum-knowledge lab.
//
//   poqk_cli mint-demo [--lambda N] [--seed S] [--scenario wiesner|subspace]
//   poqk_cli verify-demo [--lambda N] [--seed S]
//   poqk_cli experiment run <config.json> [--seed S] [--trials N] [--output P]
//   poqk_cli experiment replay <report.json> [--seed --seed-value S]
//
// Reports are written as CSV and JSON side by side under POQK_OUT_DIR (or
// the working directory); a report replays byte-identically, modulo the
// timestamp line, from its embedded config.
// Exit codes: 0 ok, 1 replay mismatch, 2 config error, 3 invariant violation.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "poqk/experiments.hpp"

using namespace poqk;
using experiments::ConfigError;
using nlohmann::ordered_json;

namespace {

std::filesystem::path output_dir() {
  const char* env = std::getenv("POQK_OUT_DIR");
  return env ? std::filesystem::path(env) : std::filesystem::current_path();
}

void write_report(const report::Report& rep, const std::string& stem) {
  std::string ts = report::now_timestamp();
  auto dir = output_dir();
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / (stem + ".csv"));
    csv << rep.to_csv(ts);
  }
  {
    std::ofstream js(dir / (stem + ".json"));
    js << rep.to_json(ts).dump(1) << "\n";
  }
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << " and .json\n";
}

int cmd_mint_demo(const std::string& scenario, int lambda, std::uint64_t seed) {
  if (scenario == "wiesner") {
    wiesner::WiesnerScenario sc(lambda, wiesner::OracleMode::Real, seed);
    auto id = sc.oracle(aap::Role::I, "getId", Bits::zeros(0)).bits;
    auto secret = sc.secret_of(id);
    std::cout << "scenario: wiesner, lambda " << lambda << "\n";
    std::cout << "id: " << id.to_hex() << "\n";
    std::cout << "secret v: " << secret.v.to_binary() << "  theta: " << secret.theta.to_binary()
              << "\n";
    std::cout << "bill amplitudes: " << sc.state().dump_amplitudes_json() << "\n";
  } else {
    subspace::SubspaceScenario sc(lambda, subspace::OracleMode::Real, seed);
    auto id = sc.oracle(aap::Role::I, "getId", Bits::zeros(0)).bits;
    auto secret = sc.secret_of(id);
    std::cout << "scenario: subspace, lambda " << lambda << "\n";
    std::cout << "id: " << id.to_hex() << "\n";
    std::cout << "secret v: " << secret.v.to_binary() << "  theta: " << secret.theta.to_binary()
              << "  basis: " << Bits(gf2::encode_basis(secret.basis), lambda * lambda).to_hex()
              << "\n";
    std::cout << "bill amplitudes: " << sc.state().dump_amplitudes_json() << "\n";
  }
  return 0;
}

int cmd_verify_demo(int lambda, std::uint64_t seed) {
  wiesner::WiesnerScenario sc(lambda, wiesner::OracleMode::Real, seed);
  auto id = sc.oracle(aap::Role::I, "getId", Bits::zeros(0)).bits;
  auto money = sc.oracle(aap::Role::I, "getMoney", id);
  auto secret = sc.secret_of(id);
  int honest = sc.ver(secret, money.register_name);
  std::cout << "genuine bill: " << (honest ? "accepted" : "rejected") << "\n";

  // a bill flipped in its encoding basis must be rejected
  wiesner::WiesnerScenario sc2(lambda, wiesner::OracleMode::Real, seed + 1);
  auto id2 = sc2.oracle(aap::Role::I, "getId", Bits::zeros(0)).bits;
  auto money2 = sc2.oracle(aap::Role::I, "getMoney", id2);
  auto secret2 = sc2.secret_of(id2);
  auto qubits = sc2.state().qubits_of(money2.register_name);
  if (secret2.theta.bit(0))
    qsim::apply_z(sc2.state(), qubits[0]);
  else
    qsim::apply_x(sc2.state(), qubits[0]);
  int forged = sc2.ver(secret2, money2.register_name);
  std::cout << "corrupted bill: " << (forged ? "accepted" : "rejected") << "\n";
  return honest == 1 && forged == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof-of-quantum-knowledge experiment lab"};
  app.require_subcommand(1);

  int lambda = 2;
  std::uint64_t seed = 1;
  std::string scenario = "wiesner";
  auto* mint = app.add_subcommand("mint-demo", "mint a bill and print its description");
  mint->add_option("--lambda", lambda);
  mint->add_option("--seed", seed);
  mint->add_option("--scenario", scenario)->check(CLI::IsMember({"wiesner", "subspace"}));

  auto* verify = app.add_subcommand("verify-demo", "mint, verify, corrupt and verify again");
  verify->add_option("--lambda", lambda);
  verify->add_option("--seed", seed);

  auto* experiment = app.add_subcommand("experiment", "run or replay experiments");
  experiment->require_subcommand(1);
  std::string config_path, report_path, output_override;
  std::uint64_t seed_override = 0;
  bool have_seed_override = false;
  int trials_override = 0;
  auto* run = experiment->add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path)->required();
  run->add_option("--seed", seed_override);
  run->add_option("--trials", trials_override);
  run->add_option("--output", output_override);
  auto* replay = experiment->add_subcommand("replay", "re-run a report's embedded config");
  replay->add_option("report", report_path)->required();
  replay->add_flag("--seed", have_seed_override)->description("compare under a fresh seed");
  replay->add_option("--seed-value", seed_override);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mint) {
      if (scenario == "subspace" && lambda % 2 != 0) throw ConfigError("even lambda required");
      return cmd_mint_demo(scenario, lambda, seed);
    }
    if (*verify) return cmd_verify_demo(lambda, seed);
    if (*run) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config: " + config_path);
      ordered_json config;
      try {
        in >> config;
      } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
      }
      if (seed_override) config["seed"] = seed_override;
      if (trials_override) config["trials"] = trials_override;
      report::Report rep = experiments::run_experiment(config);
      std::string stem = output_override.empty()
                             ? config.value("output", std::string(config.at("experiment")) +
                                                          "_" +
                                                          std::string(config.at("scenario")))
                             : output_override;
      write_report(rep, stem);
      return 0;
    }
    if (*replay) {
      std::ifstream in(report_path);
      if (!in) throw ConfigError("cannot open report: " + report_path);
      ordered_json stored_json;
      try {
        in >> stored_json;
      } catch (const std::exception& e) {
        throw ConfigError(std::string("bad report JSON: ") + e.what());
      }
      report::Report stored = report::Report::from_json(stored_json);
      ordered_json config = stored.config;
      if (have_seed_override) {
        config["seed"] = seed_override;
        std::cout << "note: seed overridden, this is a non-replay comparison\n";
      }
      report::Report fresh = experiments::run_experiment(config);
      fresh.config = stored.config;  // compare rows under the stored header
      if (!have_seed_override && fresh.body_equals(stored)) {
        std::cout << "replay OK: rows reproduce byte-identically\n";
        return 0;
      }
      if (!have_seed_override) {
        std::cout << "replay MISMATCH: report rows do not reproduce\n";
        return 1;
      }
      bool same = fresh.rows == stored.rows;
      std::cout << (same ? "rows match despite seed override\n"
                         : "rows differ under the overridden seed (expected)\n");
      return same ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"invariant\",\"message\":\"" << e.what() << "\"}\n";
    return 3;
  }
  return 0;
}
