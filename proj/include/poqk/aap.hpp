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

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "poqk/itm.hpp"

namespace poqk::aap {

enum class Role { I, P, V };

std::string role_name(Role r);

/// Lazily sampled random oracle {0,1}^in -> {0,1}^out. Answers are a pure
/// function of (seed, query), so interleaving cannot change them; scenarios
/// may also pin an entry explicitly (define) before it is ever queried.
class RandomOracleTable {
 public:
  RandomOracleTable(int in_len, int out_len, std::uint64_t seed)
      : in_len_(in_len), out_len_(out_len), seed_(seed) {}

  int in_len() const { return in_len_; }
  int out_len() const { return out_len_; }

  Bits query(const Bits& arg);
  /// Lazy definition; throws if the entry was already sampled differently.
  void define(const Bits& arg, const Bits& value);
  bool defined(const Bits& arg) const { return table_.count(arg.word) > 0; }

 private:
  int in_len_, out_len_;
  std::uint64_t seed_;
  std::map<std::uint64_t, std::uint64_t> table_;
};

/// Oracle replies are tagged; bot carries its reason and is never an
/// in-band bitstring.
struct OracleReply {
  enum class Kind { Bot, Bits_, Register } kind = Kind::Bot;
  enum class BotReason { None, UnknownId, IdCollision, WrongRole, AlreadyDispensed, UnknownKeyword };
  BotReason reason = BotReason::None;
  Bits bits;
  std::string register_name;

  static OracleReply bot(BotReason r) { return {Kind::Bot, r, {}, {}}; }
  static OracleReply of_bits(const Bits& b) { return {Kind::Bits_, BotReason::None, b, {}}; }
  static OracleReply of_register(const std::string& r) {
    return {Kind::Register, BotReason::None, {}, r};
  }
  bool is_bot() const { return kind == Kind::Bot; }
};

/// A money-flavoured AaP scenario: setup oracle with role-scoped dispatch,
/// agreement relation C, and proof relation R. The scenario owns the global
/// statevector (bank registers, bills, prover workspace all live in it) and
/// the oracle randomness.
class MoneyScenario {
 public:
  virtual ~MoneyScenario() = default;

  virtual std::string name() const = 0;
  virtual int id_width() const = 0;
  virtual OracleReply oracle(Role role, const std::string& keyword, const Bits& arg) = 0;
  /// C(1^lambda, x): 1 iff a bank record with identifier x exists.
  virtual bool agreement(const Bits& x) = 0;
  /// R(1^lambda, x, rho_W): probabilistic, consumes the witness register.
  virtual int proof_relation(const Bits& x, const std::string& witness_reg) = 0;

  int lambda() const { return lambda_; }
  qsim::StateVector& state() { return state_; }
  Rng& rng() { return rng_; }

 protected:
  MoneyScenario(int lambda, std::uint64_t seed)
      : lambda_(lambda), rng_(seed), state_(qsim::StateVector::vacuum({})) {}

  int lambda_;
  Rng rng_;
  qsim::StateVector state_;
};

/// Prover-side auxiliary input produced by input generation.
struct ProverAux {
  std::optional<Bits> id;
  std::vector<std::string> witness_regs;
};

/// What P1 sends and what it outputs as its statement (honest provers make
/// these equal; x_p = nullopt models a P1 abort).
struct P1Claim {
  Bits message;
  std::optional<Bits> x_p;
};

/// Protocol pieces for one party configuration (honest or adversarial).
/// V1 is fixed by the scenario family: it checks the claimed id via a
/// `public` query and aborts on bot.
struct Protocol {
  std::string prover_name;
  std::function<ProverAux(MoneyScenario&)> input_gen;
  std::function<std::optional<P1Claim>(MoneyScenario&, const ProverAux&)> p1;
  std::function<itm::BlackBoxProver(MoneyScenario&, const Bits& x, const ProverAux&)> p2;
  std::function<itm::ClassicalMachineSpec(MoneyScenario&, const Bits& x)> v2;
};

struct AgreeResult {
  bool ok = false;
  Bits x;
  itm::Transcript transcript;
  ProverAux aux;
};

/// Agree phase: input generation, P1's claim, V1's public-query check and
/// the x_V = x_P comparison.
AgreeResult run_agree_phase(MoneyScenario& sc, const Protocol& protocol);

struct CompletenessOutcome {
  int agree = 0;
  int prove = 0;
  std::optional<Bits> x;
};

/// Steps 1-3 of the completeness experiment; failures are data, not errors.
CompletenessOutcome run_completeness_experiment(MoneyScenario& sc, const Protocol& protocol);

/// Builds a fresh scenario for a given seed; experiments re-prepare state
/// per trial through this.
using ScenarioFactory = std::function<std::unique_ptr<MoneyScenario>(std::uint64_t seed)>;

/// Extractor: given the agree transcript, the agreed x, black-box access to
/// the prove-phase prover, and the scenario oracle under roles {I,P},
/// returns the register holding the candidate witness.
using Extractor = std::function<std::string(MoneyScenario&, const itm::BlackBoxProver&,
                                            const AgreeResult&)>;

struct SoundnessOutcome {
  int trials = 0;
  int agree_failures = 0;  // extractor "automatically wins" on these
  int r_accepts = 0;
  std::optional<Bits> x;
  std::int64_t prover_calls = 0;

  /// Acceptance estimate over trials where the agree phase succeeded;
  /// agree-phase failures count as wins per the soundness definition.
  double r_acceptance() const {
    return trials == 0 ? 0.0
                       : static_cast<double>(r_accepts + agree_failures) / trials;
  }
};

/// Soundness experiment, repeated `trials` times with child seeds; each
/// trial re-prepares the scenario, runs the agree phase, extraction, and a
/// single evaluation of R on the extracted state.
SoundnessOutcome run_soundness_experiment(const ScenarioFactory& factory,
                                          const Protocol& protocol, const Extractor& extractor,
                                          int trials, std::uint64_t seed);

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};
/// 95% Wilson score interval.
WilsonInterval wilson(int successes, int trials);

struct SecurityRow {
  std::string scenario;
  std::string prover;
  int lambda = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  double p_hat = 0, p_ci_lo = 0, p_ci_hi = 0;
  double delta_hat = 0, delta_ci_lo = 0, delta_ci_hi = 0;
  std::int64_t prover_calls = 0;
};

/// Monte-Carlo estimates of the prover's pass probability p and the
/// extraction failure delta = 1 - Pr[R accepts], with Wilson 95% intervals.
/// Pass-probability trials and extraction trials use disjoint child seeds.
SecurityRow estimate_security(const ScenarioFactory& factory, const Protocol& protocol,
                              const Extractor& extractor, int trials, std::uint64_t seed);

/// Pass probability alone (prove-phase verdict conditioned on agreement).
struct PassStats {
  int trials = 0;
  int agree = 0;
  int pass = 0;
  double p_hat() const { return agree == 0 ? 0.0 : static_cast<double>(pass) / agree; }
};
PassStats estimate_pass_probability(const ScenarioFactory& factory, const Protocol& protocol,
                                    int trials, std::uint64_t seed);

}  // namespace poqk::aap
