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

#include "poqk/wiesner.hpp"

#include <cmath>

namespace poqk::wiesner {

using aap::OracleReply;
using aap::Role;
using qsim::StateVector;

Bits check_mask(const Bits& c, const Bits& theta) { return (c ^ theta).flipped(); }

qsim::Vec money_vector(const WiesnerSecret& s) {
  int lambda = s.v.width;
  StateVector t = StateVector::vacuum({{"m", lambda}});
  qsim::apply_x_mask(t, t.qubits_of("m"), s.v);
  qsim::apply_h_mask(t, t.qubits_of("m"), s.theta);
  return t.amplitudes();
}

WiesnerScenario::WiesnerScenario(int lambda, OracleMode mode, std::uint64_t seed)
    : MoneyScenario(lambda, seed),
      mode_(mode),
      h_(2 * lambda, 2 * lambda, splitmix64(seed)) {}

aap::OracleReply WiesnerScenario::mint() {
  Bits id = rng_.bits(id_width());
  if (db_.rows.count(id.word)) return OracleReply::bot(OracleReply::BotReason::IdCollision);
  BankRow row;
  std::string tag = std::to_string(mint_counter_++);
  if (mode_ == OracleMode::Real) {
    Bits out = h_.query(id);
    row.mode = BankRow::Mode::Real;
    row.secret = WiesnerSecret{out.slice(0, lambda_), out.slice(lambda_, lambda_)};
    row.money_reg = "W" + tag;
    state_.add_register(row.money_reg, lambda_);
    qsim::apply_x_mask(state_, state_.qubits_of(row.money_reg), row.secret->v);
    qsim::apply_h_mask(state_, state_.qubits_of(row.money_reg), row.secret->theta);
  } else {
    row.mode = BankRow::Mode::PurifiedUnmeasured;
    row.a_reg = "A" + tag;
    row.money_reg = "B" + tag;
    StateVector epr = qsim::make_epr_pairs(lambda_, row.a_reg, row.money_reg);
    state_ = state_.tensor(epr);
  }
  db_.rows[id.word] = row;
  return OracleReply::of_bits(id);
}

WiesnerSecret WiesnerScenario::purified_secret_query(const Bits& id) {
  BankRow& row = db_.rows.at(id.word);
  if (row.mode == BankRow::Mode::PurifiedMeasured) return *row.secret;
  if (row.mode != BankRow::Mode::PurifiedUnmeasured)
    throw std::logic_error("purified_secret_query: real-mode row");
  Bits theta = rng_.bits(lambda_);
  auto qubits = state_.qubits_of(row.a_reg);
  qsim::apply_h_mask(state_, qubits, theta);
  Bits v = qsim::measure_computational(state_, row.a_reg, rng_);
  qsim::apply_h_mask(state_, qubits, theta);  // leave the bank half as |$>_{v,theta}
  row.secret = WiesnerSecret{v, theta};
  row.mode = BankRow::Mode::PurifiedMeasured;
  return *row.secret;
}

WiesnerSecret WiesnerScenario::secret_of(const Bits& id) {
  BankRow& row = db_.rows.at(id.word);
  if (row.secret) return *row.secret;
  return purified_secret_query(id);
}

aap::OracleReply WiesnerScenario::oracle(Role role, const std::string& keyword,
                                         const Bits& arg) {
  if (keyword == "getId") {
    if (role != Role::I) return OracleReply::bot(OracleReply::BotReason::WrongRole);
    return mint();
  }
  if (keyword == "public") {
    if (!db_.rows.count(arg.word)) return OracleReply::bot(OracleReply::BotReason::UnknownId);
    return OracleReply::of_bits(Bits::zeros(0));  // public is empty
  }
  if (keyword == "getMoney") {
    if (role != Role::I) return OracleReply::bot(OracleReply::BotReason::WrongRole);
    auto it = db_.rows.find(arg.word);
    if (it == db_.rows.end()) return OracleReply::bot(OracleReply::BotReason::UnknownId);
    if (it->second.money_dispensed)
      return OracleReply::bot(OracleReply::BotReason::AlreadyDispensed);
    it->second.money_dispensed = true;
    return OracleReply::of_register(it->second.money_reg);
  }
  if (keyword == "secret") {
    if (role != Role::V) return OracleReply::bot(OracleReply::BotReason::WrongRole);
    auto it = db_.rows.find(arg.word);
    if (it == db_.rows.end()) return OracleReply::bot(OracleReply::BotReason::UnknownId);
    WiesnerSecret s = secret_of(arg);
    return OracleReply::of_bits(s.v.concat(s.theta));
  }
  return OracleReply::bot(OracleReply::BotReason::UnknownKeyword);
}

bool WiesnerScenario::agreement(const Bits& x) { return db_.rows.count(x.word) > 0; }

int WiesnerScenario::ver(const WiesnerSecret& secret, const std::string& witness_reg) {
  auto qubits = state_.qubits_of(witness_reg);
  qsim::apply_h_mask(state_, qubits, secret.theta);
  Bits outcome = qsim::measure_computational(state_, witness_reg, rng_);
  return outcome == secret.v ? 1 : 0;
}

int WiesnerScenario::proof_relation(const Bits& x, const std::string& witness_reg) {
  OracleReply r = oracle(Role::V, "secret", x);
  if (r.is_bot()) return 0;
  WiesnerSecret s{r.bits.slice(0, lambda_), r.bits.slice(lambda_, lambda_)};
  return ver(s, witness_reg);
}

namespace {

/// Honest measurement body on machine-local indices. N = [M1 | M2] occupies
/// [0, 2 lambda), witness qubits start at `s_base`. Rotates the witness into
/// the challenge bases, copies into M2, rotates back.
void append_honest_body(itm::GateProgram& prog, int lambda, int s_base) {
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_ch(i, s_base + i));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_cnot(s_base + i, lambda + i));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_ch(i, s_base + i));
}

}  // namespace

ProverInstance honest_prover(int lambda, const std::string& witness_reg) {
  itm::GateProgram prog;
  append_honest_body(prog, lambda, 2 * lambda);
  itm::QuantumMachineSpec spec{2 * lambda, lambda, {prog}};
  return {spec, {witness_reg}};
}

ProverInstance pauli_attack_prover(int lambda, const std::string& witness_reg, const Bits& xset,
                                   const Bits& zset) {
  if (xset.width != lambda || zset.width != lambda)
    throw std::invalid_argument("pauli_attack_prover: mask width mismatch");
  itm::GateProgram prog;
  int s_base = 2 * lambda;
  for (int i = 0; i < lambda; ++i) {
    // sigma_X where c_i = 1 and i in xset
    if (xset.bit(i)) prog.gates.push_back(itm::g_cnot(i, s_base + i));
    // sigma_Z where c_i = 0 and i in zset: Z composed with a challenge-controlled Z
    if (zset.bit(i)) {
      prog.gates.push_back(itm::g_z(s_base + i));
      prog.gates.push_back(itm::g_cz(i, s_base + i));
    }
  }
  append_honest_body(prog, lambda, s_base);
  itm::QuantumMachineSpec spec{2 * lambda, lambda, {prog}};
  return {spec, {witness_reg}};
}

ProverInstance depolarizing_prover(StateVector& state, int lambda,
                                   const std::string& witness_reg, double q,
                                   const std::string& anc_reg) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("depolarizing_prover: bad q");
  state.add_register(anc_reg, 2 * lambda);
  // Per witness qubit, a two-qubit ancilla pair carrying the Pauli-twirl
  // amplitudes: sqrt(1-3q/4)|00> + sqrt(q/4)(|01>+|10>+|11>).
  qsim::Vec col(4);
  col << std::sqrt(1.0 - 0.75 * q), std::sqrt(0.25 * q), std::sqrt(0.25 * q),
      std::sqrt(0.25 * q);
  qsim::Mat prep = qsim::state_prep_unitary(col);
  auto anc = state.qubits_of(anc_reg);
  for (int i = 0; i < lambda; ++i) qsim::apply_dense(state, prep, {anc[2 * i], anc[2 * i + 1]});

  itm::GateProgram prog;
  int s_base = 2 * lambda;           // witness local base
  int a_base = 3 * lambda;           // ancilla local base
  for (int i = 0; i < lambda; ++i) {
    int a1 = a_base + 2 * i, a2 = a_base + 2 * i + 1;
    // |a1 a2>: 01 -> X, 10 -> Z, 11 -> XZ (Z first, then X)
    prog.gates.push_back(itm::g_cz(a1, s_base + i));
    prog.gates.push_back(itm::g_cnot(a2, s_base + i));
  }
  append_honest_body(prog, lambda, s_base);
  itm::QuantumMachineSpec spec{2 * lambda, 3 * lambda, {prog}};
  return {spec, {witness_reg, anc_reg}};
}

ProverInstance fixed_beta_prover(int lambda, const Bits& beta) {
  if (beta.width != lambda) throw std::invalid_argument("fixed_beta_prover: beta width");
  itm::GateProgram prog;
  for (int i = 0; i < lambda; ++i)
    if (beta.bit(i)) prog.gates.push_back(itm::g_x(lambda + i));
  itm::QuantumMachineSpec spec{2 * lambda, 0, {prog}};
  return {spec, {}};
}

ProverInstance random_beta_prover(StateVector& state, int lambda, const std::string& anc_reg) {
  state.add_register(anc_reg, lambda);
  auto anc = state.qubits_of(anc_reg);
  for (int q : anc) qsim::apply_h(state, q);
  itm::GateProgram prog;
  int a_base = 2 * lambda;
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_cnot(a_base + i, lambda + i));
  itm::QuantumMachineSpec spec{2 * lambda, lambda, {prog}};
  return {spec, {anc_reg}};
}

ProverInstance instantiate_prover(const ProverFamilySpec& family, StateVector& state, int lambda,
                                  const std::string& witness_reg) {
  if (family.kind == "honest") return honest_prover(lambda, witness_reg);
  if (family.kind == "pauli_attack")
    return pauli_attack_prover(lambda, witness_reg, family.xset, family.zset);
  if (family.kind == "depolarizing")
    return depolarizing_prover(state, lambda, witness_reg, family.q, "danc_" + witness_reg);
  if (family.kind == "fixed_beta") return fixed_beta_prover(lambda, family.beta);
  if (family.kind == "random_beta")
    return random_beta_prover(state, lambda, "ranc_" + witness_reg);
  throw std::invalid_argument("instantiate_prover: unknown kind " + family.kind);
}

namespace {

/// Tape layout for V2: [0] v, [1] theta, [2] c, [3] verdict. An abort stores
/// the verdict early; output_fn reads the last entry.
itm::ClassicalMachineSpec make_v2(std::function<std::optional<WiesnerSecret>()> fetch_secret,
                                  int lambda) {
  itm::ClassicalMachineSpec v;
  v.rand_width = lambda;
  v.round_fns.push_back([fetch_secret, lambda](std::vector<Bits>& tape, const Bits&,
                                               const Bits& u) -> itm::RoundOutput {
    auto secret = fetch_secret();
    if (!secret) {
      tape.push_back(Bits(0, 1));
      return {std::nullopt, true};
    }
    tape.push_back(secret->v);
    tape.push_back(secret->theta);
    tape.push_back(u);  // the challenge c
    return {u.concat(Bits::zeros(lambda)), false};
  });
  v.round_fns.push_back([lambda](std::vector<Bits>& tape, const Bits& incoming,
                                 const Bits&) -> itm::RoundOutput {
    Bits v_bits = tape[0], theta = tape[1], c = tape[2];
    Bits beta = incoming.slice(lambda, lambda);
    Bits s = check_mask(c, theta);
    int ok = ((beta ^ v_bits) & s).is_zero() ? 1 : 0;
    tape.push_back(Bits(static_cast<std::uint64_t>(ok), 1));
    return {std::nullopt, false};
  });
  v.output_fn = [](const std::vector<Bits>& tape) {
    return tape.empty() ? 0 : static_cast<int>(tape.back().word & 1);
  };
  return v;
}

}  // namespace

itm::ClassicalMachineSpec verifier_v2(WiesnerScenario& sc, const Bits& id) {
  return make_v2(
      [&sc, id]() -> std::optional<WiesnerSecret> {
        aap::OracleReply r = sc.oracle(Role::V, "secret", id);
        if (r.is_bot()) return std::nullopt;
        int lambda = sc.lambda();
        return WiesnerSecret{r.bits.slice(0, lambda), r.bits.slice(lambda, lambda)};
      },
      sc.lambda());
}

itm::ClassicalMachineSpec verifier_v2_with_secret(const WiesnerSecret& secret) {
  return make_v2([secret]() -> std::optional<WiesnerSecret> { return secret; },
                 secret.v.width);
}

aap::ProverAux honest_input_gen(aap::MoneyScenario& sc) {
  aap::ProverAux aux;
  for (int attempt = 0; attempt < 16; ++attempt) {
    OracleReply r = sc.oracle(Role::I, "getId", Bits::zeros(0));
    if (r.is_bot()) continue;
    Bits id = r.bits;
    OracleReply money = sc.oracle(Role::I, "getMoney", id);
    if (money.is_bot()) continue;
    aux.id = id;
    aux.witness_regs = {money.register_name};
    return aux;
  }
  throw std::runtime_error("honest_input_gen: getId kept colliding (16 tries)");
}

aap::Protocol wiesner_protocol(const ProverFamilySpec& family) {
  aap::Protocol p;
  p.prover_name = family.kind;
  p.input_gen = honest_input_gen;
  p.p1 = [](aap::MoneyScenario&, const aap::ProverAux& aux) -> std::optional<aap::P1Claim> {
    if (!aux.id) return std::nullopt;
    return aap::P1Claim{*aux.id, *aux.id};
  };
  p.p2 = [family](aap::MoneyScenario& sc, const Bits&, const aap::ProverAux& aux) {
    std::string witness = aux.witness_regs.empty() ? "" : aux.witness_regs[0];
    return instantiate_prover(family, sc.state(), sc.lambda(), witness).black_box();
  };
  p.v2 = [](aap::MoneyScenario& sc, const Bits& x) {
    return verifier_v2(dynamic_cast<WiesnerScenario&>(sc), x);
  };
  return p;
}

aap::ScenarioFactory wiesner_factory(int lambda, OracleMode mode) {
  return [lambda, mode](std::uint64_t seed) -> std::unique_ptr<aap::MoneyScenario> {
    return std::make_unique<WiesnerScenario>(lambda, mode, seed);
  };
}

}  // namespace poqk::wiesner
