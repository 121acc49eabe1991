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

#include "poqk/experiments.hpp"

#include <cmath>

namespace poqk::experiments {

using nlohmann::ordered_json;

namespace {

Bits parse_hex_mask(const ordered_json& j, const std::string& key, int width) {
  if (!j.contains(key)) return Bits::zeros(width);
  return Bits::from_hex(j.at(key).get<std::string>(), width);
}

}  // namespace

wiesner::ProverFamilySpec parse_prover(const ordered_json& config, int lambda) {
  wiesner::ProverFamilySpec family;
  if (!config.contains("prover")) return family;
  const auto& p = config.at("prover");
  family.kind = p.value("kind", "honest");
  family.xset = parse_hex_mask(p, "xset", lambda);
  family.zset = parse_hex_mask(p, "zset", lambda);
  family.q = p.value("q", 0.0);
  family.phase = p.value("phase", 0.0);
  if (p.contains("beta"))
    family.beta = Bits::from_hex(p.at("beta").get<std::string>(), lambda);
  else
    family.beta = Bits::zeros(lambda);
  return family;
}

int lambda_cap(const std::string& experiment, const std::string& phi_path) {
  if (experiment == "extraction-sweep") return phi_path == "circuit" ? 4 : 3;
  if (experiment == "nondestructive-scan") return 4;
  return 6;  // completeness, cloning-game, amplification
}

aap::ScenarioFactory make_factory(const std::string& scenario, int lambda,
                                  const std::string& mode) {
  if (scenario == "wiesner")
    return wiesner::wiesner_factory(lambda, mode == "purified" ? wiesner::OracleMode::Purified
                                                               : wiesner::OracleMode::Real);
  if (scenario == "subspace")
    return subspace::subspace_factory(lambda, mode == "purified"
                                                  ? subspace::OracleMode::Purified
                                                  : subspace::OracleMode::Real);
  throw ConfigError("unknown scenario: " + scenario);
}

aap::Protocol make_protocol(const std::string& scenario,
                            const wiesner::ProverFamilySpec& family) {
  if (scenario == "wiesner") return wiesner::wiesner_protocol(family);
  if (scenario == "subspace") return subspace::subspace_protocol(family);
  throw ConfigError("unknown scenario: " + scenario);
}

aap::Extractor make_extractor(const std::string& scenario, const std::string& phi_path) {
  extractor::PhiPath path =
      phi_path == "circuit" ? extractor::PhiPath::Circuit : extractor::PhiPath::Dense;
  bool wiesner_family = scenario == "wiesner";
  if (!wiesner_family && scenario != "subspace")
    throw ConfigError("unknown scenario: " + scenario);
  if (path == extractor::PhiPath::Circuit)
    return [wiesner_family](aap::MoneyScenario& sc, const itm::BlackBoxProver& bb,
                            const aap::AgreeResult&) {
      return wiesner_family
                 ? extractor::extract_wiesner(sc.state(), bb, extractor::PhiPath::Circuit)
                 : extractor::extract_subspace(sc.state(), bb, extractor::PhiPath::Circuit);
    };
  // Dense path: the prover unitary is identical across trials (only register
  // names differ), so the isometry is built once and reused.
  auto cache = std::make_shared<std::optional<extractor::IsometryPhi>>();
  return [wiesner_family, cache](aap::MoneyScenario& sc, const itm::BlackBoxProver& bb,
                                 const aap::AgreeResult&) {
    auto family = wiesner_family ? extractor::Family::Wiesner : extractor::Family::Subspace;
    return extractor::extract_with_cached_phi(sc.state(), bb, family, *cache);
  };
}

namespace {

report::Report run_completeness(const ordered_json& config) {
  std::string scenario = config.at("scenario");
  int lambda = config.at("lambda");
  std::string mode = config.value("mode", "real");
  int trials = config.at("trials");
  std::uint64_t seed = config.at("seed");
  auto family = parse_prover(config, lambda);
  auto pass = aap::estimate_pass_probability(make_factory(scenario, lambda, mode),
                                             make_protocol(scenario, family), trials, seed);
  auto ci = aap::wilson(pass.pass, pass.agree);
  report::Report rep;
  rep.config = config;
  rep.columns = {"scenario",  "prover",      "lambda",       "seed",
                 "trials",    "p_hat",       "p_ci_lo",      "p_ci_hi",
                 "delta_hat", "delta_ci_lo", "delta_ci_hi",  "prover_calls"};
  rep.rows.push_back({scenario, family.kind, std::to_string(lambda), std::to_string(seed),
                      std::to_string(trials), report::fmt(pass.p_hat()), report::fmt(ci.lo),
                      report::fmt(ci.hi), "na", "na", "na", "0"});
  return rep;
}

report::Report run_extraction_sweep(const ordered_json& config) {
  std::string scenario = config.at("scenario");
  int lambda = config.at("lambda");
  int trials = config.at("trials");
  std::uint64_t seed = config.at("seed");
  std::string phi_path = config.value("phi_path", "dense");
  std::vector<double> grid = config.value("grid", std::vector<double>{0.0, 0.1, 0.2, 0.3});
  std::string kind = config.contains("prover")
                         ? config.at("prover").value("kind", "depolarizing")
                         : std::string("depolarizing");

  struct Point {
    double q, p_hat, mu_hat, delta_hat;
    std::int64_t calls;
  };
  std::vector<Point> points;
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    wiesner::ProverFamilySpec family;
    family.kind = kind;
    if (kind == "depolarizing")
      family.q = grid[gi];
    else if (kind == "phase_deviation")
      family.phase = grid[gi];
    else
      throw ConfigError("extraction-sweep needs a depolarizing or phase_deviation prover");
    auto factory = make_factory(scenario, lambda, "purified");
    auto protocol = make_protocol(scenario, family);
    auto pass = aap::estimate_pass_probability(factory, protocol, trials,
                                               Rng::child_seed(seed, 1000 + gi));
    auto sound =
        aap::run_soundness_experiment(factory, protocol, make_extractor(scenario, phi_path),
                                      trials, Rng::child_seed(seed, 2000 + gi));
    points.push_back({grid[gi], pass.p_hat(), 1.0 - pass.p_hat(), 1.0 - sound.r_acceptance(),
                      sound.prover_calls});
  }
  double fitted_c = 0.0;
  for (const auto& pt : points)
    if (pt.mu_hat > 1e-12)
      fitted_c = std::max(fitted_c, pt.delta_hat / std::pow(pt.mu_hat, 0.25));

  report::Report rep;
  rep.config = config;
  rep.columns = {"scenario", "prover",    "lambda",   "q",           "p_hat",
                 "mu_hat",   "delta_hat", "fitted_C", "prover_calls"};
  for (const auto& pt : points)
    rep.rows.push_back({scenario, kind, std::to_string(lambda), report::fmt(pt.q),
                        report::fmt(pt.p_hat), report::fmt(pt.mu_hat),
                        report::fmt(pt.delta_hat), report::fmt(fitted_c),
                        std::to_string(pt.calls)});
  return rep;
}

report::Report run_cloning_game(const ordered_json& config) {
  std::string scenario = config.at("scenario");
  if (scenario != "wiesner") throw ConfigError("cloning-game supports the wiesner scenario");
  int lambda = config.at("lambda");
  int trials = config.at("trials");
  std::uint64_t seed = config.at("seed");
  std::string name = config.value("strategy", "optimal");
  cloning::CloningStrategy strategy = cloning::CloningStrategy::trivial_split();
  if (name == "optimal")
    strategy = cloning::CloningStrategy::per_qubit(cloning::load_optimal_cloner(), "optimal");
  else if (name == "measure_resend")
    strategy =
        cloning::CloningStrategy::per_qubit(cloning::measure_resend_cloner(), "measure_resend");
  else if (name == "honest_two_bills")
    strategy = cloning::CloningStrategy::honest_two_bills();
  else if (name != "trivial_split")
    throw ConfigError("unknown strategy: " + name);

  cloning::GameRow row = cloning::run_no_cloning_game(lambda, strategy, trials, seed);
  report::Report rep;
  rep.config = config;
  rep.columns = {"scenario", "strategy", "lambda", "trials",
                 "win_rate", "ci_lo",    "ci_hi",  "bound_(3/4)^lambda"};
  rep.rows.push_back({row.scenario, row.strategy, std::to_string(row.lambda),
                      std::to_string(row.trials), report::fmt(row.win_rate),
                      report::fmt(row.ci_lo), report::fmt(row.ci_hi), report::fmt(row.bound)});
  return rep;
}

report::Report run_amplification(const ordered_json& config) {
  if (config.at("scenario") != "wiesner")
    throw ConfigError("amplification supports the wiesner scenario");
  int lambda = config.at("lambda");
  int trials = config.at("trials");
  int n_reps = config.value("n_reps", 3);
  std::uint64_t seed = config.at("seed");
  std::string kind = config.contains("prover")
                         ? config.at("prover").value("kind", "fresh_bills")
                         : std::string("fresh_bills");
  cloning::AmplificationProver mode;
  if (kind == "fresh_bills")
    mode = cloning::AmplificationProver::FreshBills;
  else if (kind == "reuse_bill")
    mode = cloning::AmplificationProver::ReuseBill;
  else if (kind == "fixed_beta")
    mode = cloning::AmplificationProver::FixedBeta;
  else
    throw ConfigError("unknown amplification prover: " + kind);

  auto row = cloning::sequential_amplification(lambda, mode, n_reps, trials, seed);
  report::Report rep;
  rep.config = config;
  rep.columns = {"scenario", "prover", "lambda", "n_reps", "trials", "round", "pass_rate"};
  for (int r = 0; r < n_reps; ++r)
    rep.rows.push_back({"wiesner", kind, std::to_string(lambda), std::to_string(n_reps),
                        std::to_string(trials), std::to_string(r + 1),
                        report::fmt(row.per_round_pass[r])});
  rep.rows.push_back({"wiesner", kind, std::to_string(lambda), std::to_string(n_reps),
                      std::to_string(trials), "overall", report::fmt(row.overall_pass)});
  return rep;
}

report::Report run_nondestructive_scan(const ordered_json& config) {
  if (config.at("scenario") != "wiesner")
    throw ConfigError("nondestructive-scan supports the wiesner scenario");
  int lambda = config.at("lambda");
  auto family = parse_prover(config, lambda);
  double tolerance = config.value("tolerance", 1e-9);

  // Scan every bill secret exhaustively; a prover counts as nondestructive
  // only if every secret and challenge is safe.
  bool deterministic = true;
  double worst = 0.0;
  for (std::uint64_t vv = 0; vv < (1ULL << lambda); ++vv)
    for (std::uint64_t tt = 0; tt < (1ULL << lambda); ++tt) {
      wiesner::WiesnerSecret secret{Bits(vv, lambda), Bits(tt, lambda)};
      qsim::StateVector init = qsim::StateVector::vacuum({{"W", lambda}, {"N", 2 * lambda}});
      qsim::apply_x_mask(init, init.qubits_of("W"), secret.v);
      qsim::apply_h_mask(init, init.qubits_of("W"), secret.theta);
      auto prover = wiesner::instantiate_prover(family, init, lambda, "W");
      auto check = cloning::nondestructive_check(
          prover, wiesner::verifier_v2_with_secret(secret), init, tolerance);
      deterministic = deterministic && check.transcript_deterministic;
      worst = std::max(worst, check.max_damage);
    }
  report::Report rep;
  rep.config = config;
  rep.columns = {"scenario",   "prover",     "lambda",
                 "deterministic", "max_damage", "nondestructive"};
  bool flag = deterministic && worst <= tolerance;
  rep.rows.push_back({"wiesner", family.kind, std::to_string(lambda),
                      deterministic ? "1" : "0", report::fmt(worst), flag ? "1" : "0"});
  return rep;
}

}  // namespace

report::Report run_experiment(const ordered_json& config) {
  for (const char* key : {"scenario", "experiment", "lambda", "trials", "seed"})
    if (!config.contains(key)) throw ConfigError(std::string("config missing key: ") + key);
  std::string experiment = config.at("experiment");
  int lambda = config.at("lambda");
  int trials = config.at("trials");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  std::string phi_path = config.value("phi_path", "dense");
  if (lambda < 1 || lambda > lambda_cap(experiment, phi_path))
    throw ConfigError("lambda out of range for " + experiment + " (cap " +
                      std::to_string(lambda_cap(experiment, phi_path)) + ")");
  if (config.at("scenario") == "subspace" && lambda % 2 != 0)
    throw ConfigError("subspace scenario needs even lambda");

  if (experiment == "completeness") return run_completeness(config);
  if (experiment == "extraction-sweep") return run_extraction_sweep(config);
  if (experiment == "cloning-game") return run_cloning_game(config);
  if (experiment == "amplification") return run_amplification(config);
  if (experiment == "nondestructive-scan") return run_nondestructive_scan(config);
  throw ConfigError("unknown experiment: " + experiment);
}

}  // namespace poqk::experiments
