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

#include "poqk/aap.hpp"

namespace poqk::wiesner {

struct WiesnerSecret {
  Bits v;
  Bits theta;
};

/// s = c.theta + cbar.thetabar: s_i = 1 iff c_i = theta_i. These are the
/// positions the verifier checks.
Bits check_mask(const Bits& c, const Bits& theta);

/// |$>_{v,theta} = (prod_i H_i^{theta_i}) |v> as a 2^lambda vector.
qsim::Vec money_vector(const WiesnerSecret& s);

enum class OracleMode { Real, Purified };

struct BankRow {
  enum class Mode { Real, PurifiedUnmeasured, PurifiedMeasured };
  Mode mode = Mode::Real;
  std::optional<WiesnerSecret> secret;
  bool money_dispensed = false;
  std::string a_reg;      // purified mode: the bank's EPR halves
  std::string money_reg;  // the bill (real) or the B halves (purified)
};

/// Bank database: one per experiment instance, keyed by id.
struct WiesnerBankDb {
  std::map<std::uint64_t, BankRow> rows;
};

/// Scenario wiesner: random oracle H: {0,1}^{2 lambda} -> {0,1}^{2 lambda}
/// realized as a lazy table with id |-> (v, theta) by splitting the output;
/// in purified mode the bank stores lambda EPR pairs per bill and defers
/// sampling (v, theta) to the first secret query.
class WiesnerScenario : public aap::MoneyScenario {
 public:
  WiesnerScenario(int lambda, OracleMode mode, std::uint64_t seed);

  std::string name() const override { return "wiesner"; }
  int id_width() const override { return 2 * lambda_; }
  aap::OracleReply oracle(aap::Role role, const std::string& keyword,
                          const Bits& arg) override;
  bool agreement(const Bits& x) override;
  int proof_relation(const Bits& x, const std::string& witness_reg) override;

  OracleMode mode() const { return mode_; }
  WiesnerBankDb& db() { return db_; }

  /// getId internals: samples an id, mints the bill (or EPR pairs), returns
  /// bot on an id collision.
  aap::OracleReply mint();

  /// Purified-mode delayed measurement: samples theta on the first call,
  /// measures the bank halves in basis theta, stores and returns (v, theta).
  WiesnerSecret purified_secret_query(const Bits& id);

  /// The (v, theta) on record for an id, resolving the purified measurement
  /// if needed. Throws on unknown id.
  WiesnerSecret secret_of(const Bits& id);

  /// Ver: measures each witness qubit in basis theta and accepts iff the
  /// outcomes match v. Consumes the witness.
  int ver(const WiesnerSecret& secret, const std::string& witness_reg);

 private:
  OracleMode mode_;
  aap::RandomOracleTable h_;
  WiesnerBankDb db_;
  int mint_counter_ = 0;
};

/// A prove-phase machine plus the private registers it runs on. Local qubit
/// layout: N = [M1 challenge | M2 answer], then the listed S registers.
struct ProverInstance {
  itm::QuantumMachineSpec spec;
  std::vector<std::string> s_regs;

  itm::BlackBoxProver black_box() const {
    return itm::BlackBoxProver(spec, "N", s_regs);
  }
};

/// Measures the witness in the challenge bases and reports the outcomes.
ProverInstance honest_prover(int lambda, const std::string& witness_reg);

/// Applies sigma_X on xset qubits where c_i = 1 and sigma_Z on zset qubits
/// where c_i = 0 before behaving honestly. Passes with probability 1.
ProverInstance pauli_attack_prover(int lambda, const std::string& witness_reg,
                                   const Bits& xset, const Bits& zset);

/// Depolarizes each witness qubit with probability q (purified via a
/// two-qubit ancilla pair per witness qubit) before behaving honestly.
/// Allocates and prepares the ancilla register in `state`.
ProverInstance depolarizing_prover(qsim::StateVector& state, int lambda,
                                   const std::string& witness_reg, double q,
                                   const std::string& anc_reg);

/// Ignores the witness and answers the fixed string beta.
ProverInstance fixed_beta_prover(int lambda, const Bits& beta);

/// Answers a uniformly random beta from |+> ancillas (allocated here).
ProverInstance random_beta_prover(qsim::StateVector& state, int lambda,
                                  const std::string& anc_reg);

/// Parametric prover family selector shared by experiments and the CLI.
struct ProverFamilySpec {
  std::string kind = "honest";  // honest|pauli_attack|depolarizing|fixed_beta|random_beta
  Bits xset, zset;              // pauli_attack
  double q = 0.0;               // depolarizing
  Bits beta;                    // fixed_beta
  double phase = 0.0;           // subspace phase_deviation
};

ProverInstance instantiate_prover(const ProverFamilySpec& family, qsim::StateVector& state,
                                  int lambda, const std::string& witness_reg);

/// Protocol wiesner's V2 with the secret resolved through the scenario's
/// oracle in its first round (purified mode collapses there).
itm::ClassicalMachineSpec verifier_v2(WiesnerScenario& sc, const Bits& id);

/// V2 bound to a known secret; used by exhaustive executions and games where
/// the oracle query has been resolved beforehand.
itm::ClassicalMachineSpec verifier_v2_with_secret(const WiesnerSecret& secret);

/// Honest input generation: getId until != bot (capped at 16 tries), then
/// getMoney.
aap::ProverAux honest_input_gen(aap::MoneyScenario& sc);

/// The honest protocol instantiated with a configurable prover family (the
/// agree phase stays honest: adversaries here choose among minted ids only).
aap::Protocol wiesner_protocol(const ProverFamilySpec& family);

/// Scenario factory for experiments.
aap::ScenarioFactory wiesner_factory(int lambda, OracleMode mode);

}  // namespace poqk::wiesner
