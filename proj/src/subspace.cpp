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

#include "poqk/subspace.hpp"

#include <cmath>

namespace poqk::subspace {

using aap::OracleReply;
using aap::Role;
using qsim::StateVector;

gf2::Subspace SubspaceSecret::money_subspace() const {
  std::vector<Bits> gens;
  for (int j = 0; j < lambda(); ++j)
    if (theta.bit(j)) gens.push_back(basis.vector(j));
  return gf2::make_subspace(lambda(), gens);
}

PadVectors pads(const SubspaceSecret& s) {
  return {s.v & s.theta.flipped(), s.v & s.theta};
}

AmbientPads ambient_pads(const SubspaceSecret& s) {
  PadVectors p = pads(s);
  auto inv = s.basis.m.inverse();
  if (!inv) throw std::invalid_argument("ambient_pads: dependent basis");
  return {s.basis.m.matvec(p.d), inv->transpose().matvec(p.e)};
}

qsim::Vec money_vector_padded_superposition(const SubspaceSecret& s) {
  int lambda = s.lambda();
  AmbientPads ap = ambient_pads(s);
  StateVector t = StateVector::vacuum({{"m", lambda}});
  auto elems = gf2::enumerate(s.money_subspace());
  qsim::Vec& a = t.amplitudes();
  a[0] = 0.0;
  double amp = 1.0 / std::sqrt(static_cast<double>(elems.size()));
  for (const Bits& x : elems) a[static_cast<std::int64_t>(x.word)] = amp;
  auto qubits = t.qubits_of("m");
  qsim::apply_z_mask(t, qubits, ap.z_mask);
  qsim::apply_x_mask(t, qubits, ap.x_shift);
  return t.amplitudes();
}

void prepare_money_state(StateVector& state, const std::string& reg, const SubspaceSecret& s) {
  auto qubits = state.qubits_of(reg);
  qsim::apply_x_mask(state, qubits, s.v);
  qsim::apply_h_mask(state, qubits, s.theta);
  qsim::apply_dense(state, gf2::w_unitary(s.basis, reg).matrix, qubits);
}

qsim::Vec money_vector(const SubspaceSecret& s) {
  StateVector t = StateVector::vacuum({{"m", s.lambda()}});
  prepare_money_state(t, "m", s);
  // Both constructions must coincide; a mismatch means the pad conventions
  // drifted apart.
  qsim::Vec other = money_vector_padded_superposition(s);
  if ((t.amplitudes() - other).norm() > 1e-9)
    throw std::logic_error("money_vector: construction routes disagree");
  return t.amplitudes();
}

qsim::Povm povm_E(const Bits& theta, const gf2::Gf2Basis& basis, const std::string& target) {
  int lambda = theta.width;
  qsim::Povm povm;
  povm.target = target;
  qsim::Mat w = gf2::w_unitary(basis, target).matrix;
  for (std::uint64_t v = 0; v < (1ULL << lambda); ++v) {
    qsim::Vec wiesner_vec = wiesner::money_vector({Bits(v, lambda), theta});
    qsim::Vec col = w * wiesner_vec;
    povm.elements.push_back(col * col.adjoint());
  }
  return povm;
}

SubspaceScenario::SubspaceScenario(int lambda, OracleMode mode, std::uint64_t seed)
    : MoneyScenario(lambda, seed),
      mode_(mode),
      h_(2 * lambda + lambda * lambda, 2 * lambda + lambda * lambda, splitmix64(seed)) {
  if (lambda % 2 != 0) throw std::invalid_argument("SubspaceScenario: lambda must be even");
}

Bits SubspaceScenario::sample_balanced_theta(int lambda, Rng& rng) {
  while (true) {
    Bits theta = rng.bits(lambda);
    if (theta.popcount() == lambda / 2) return theta;
  }
}

Bits encode_secret(const SubspaceSecret& s) {
  int lambda = s.lambda();
  Bits packed = s.v.concat(s.theta);
  return packed.concat(Bits(gf2::encode_basis(s.basis), lambda * lambda));
}

SubspaceSecret decode_secret(const Bits& packed, int lambda) {
  SubspaceSecret s;
  s.v = packed.slice(0, lambda);
  s.theta = packed.slice(lambda, lambda);
  s.basis = gf2::decode_basis(packed.slice(2 * lambda, lambda * lambda).word, lambda);
  return s;
}

aap::OracleReply SubspaceScenario::mint() {
  Bits id = rng_.bits(id_width());
  if (db_.count(id.word)) return OracleReply::bot(OracleReply::BotReason::IdCollision);
  BankRow row;
  std::string tag = std::to_string(mint_counter_++);
  if (mode_ == OracleMode::Real) {
    SubspaceSecret secret;
    secret.v = rng_.bits(lambda_);
    secret.theta = sample_balanced_theta(lambda_, rng_);
    secret.basis = gf2::random_invertible_basis(lambda_, rng_);
    h_.define(id, encode_secret(secret));
    row.mode = BankRow::Mode::Real;
    row.secret = secret;
    row.money_reg = "W" + tag;
    state_.add_register(row.money_reg, lambda_);
    prepare_money_state(state_, row.money_reg, secret);
  } else {
    row.mode = BankRow::Mode::PurifiedUnmeasured;
    row.a_reg = "A" + tag;
    row.money_reg = "B" + tag;
    state_ = state_.tensor(qsim::make_epr_pairs(lambda_, row.a_reg, row.money_reg));
  }
  db_[id.word] = row;
  return OracleReply::of_bits(id);
}

SubspaceSecret SubspaceScenario::purified_secret_query(const Bits& id) {
  BankRow& row = db_.at(id.word);
  if (row.mode == BankRow::Mode::PurifiedMeasured) return *row.secret;
  if (row.mode != BankRow::Mode::PurifiedUnmeasured)
    throw std::logic_error("purified_secret_query: real-mode row");
  SubspaceSecret secret;
  secret.theta = sample_balanced_theta(lambda_, rng_);
  secret.basis = gf2::random_invertible_basis(lambda_, rng_);
  qsim::Povm povm = povm_E(secret.theta, secret.basis, row.a_reg);
  auto [v_index, prob] = qsim::povm_measure(state_, povm, rng_);
  secret.v = Bits(static_cast<std::uint64_t>(v_index), lambda_);
  h_.define(id, encode_secret(secret));
  row.secret = secret;
  row.mode = BankRow::Mode::PurifiedMeasured;
  return secret;
}

SubspaceSecret SubspaceScenario::secret_of(const Bits& id) {
  BankRow& row = db_.at(id.word);
  if (row.secret) return *row.secret;
  return purified_secret_query(id);
}

aap::OracleReply SubspaceScenario::oracle(Role role, const std::string& keyword,
                                          const Bits& arg) {
  if (keyword == "getId") {
    if (role != Role::I) return OracleReply::bot(OracleReply::BotReason::WrongRole);
    return mint();
  }
  if (keyword == "public") {
    if (!db_.count(arg.word)) return OracleReply::bot(OracleReply::BotReason::UnknownId);
    return OracleReply::of_bits(Bits::zeros(0));
  }
  if (keyword == "getMoney") {
    // The purified oracle serves getMoney to I and P alike.
    bool allowed = role == Role::I || (mode_ == OracleMode::Purified && role == Role::P);
    if (!allowed) return OracleReply::bot(OracleReply::BotReason::WrongRole);
    auto it = db_.find(arg.word);
    if (it == db_.end()) return OracleReply::bot(OracleReply::BotReason::UnknownId);
    if (it->second.money_dispensed)
      return OracleReply::bot(OracleReply::BotReason::AlreadyDispensed);
    it->second.money_dispensed = true;
    return OracleReply::of_register(it->second.money_reg);
  }
  if (keyword == "secret") {
    if (role != Role::V) return OracleReply::bot(OracleReply::BotReason::WrongRole);
    auto it = db_.find(arg.word);
    if (it == db_.end()) return OracleReply::bot(OracleReply::BotReason::UnknownId);
    return OracleReply::of_bits(encode_secret(secret_of(arg)));
  }
  return OracleReply::bot(OracleReply::BotReason::UnknownKeyword);
}

bool SubspaceScenario::agreement(const Bits& x) { return db_.count(x.word) > 0; }

int SubspaceScenario::ver(const SubspaceSecret& secret, const std::string& witness_reg) {
  AmbientPads ap = ambient_pads(secret);
  auto qubits = state_.qubits_of(witness_reg);
  qsim::apply_x_mask(state_, qubits, ap.x_shift);
  qsim::apply_z_mask(state_, qubits, ap.z_mask);
  gf2::Subspace a = secret.money_subspace();
  auto [in_a, p1] = qsim::measure_membership(state_, witness_reg, gf2::enumerate(a), rng_);
  if (!in_a) return 0;
  qsim::apply_h_mask(state_, qubits, Bits::ones(lambda_));
  auto [in_perp, p2] =
      qsim::measure_membership(state_, witness_reg, gf2::enumerate(gf2::complement(a)), rng_);
  return in_perp;
}

int SubspaceScenario::proof_relation(const Bits& x, const std::string& witness_reg) {
  OracleReply r = oracle(Role::V, "secret", x);
  if (r.is_bot()) return 0;
  return ver(decode_secret(r.bits, lambda_), witness_reg);
}

wiesner::ProverInstance honest_prover(int lambda, const std::string& witness_reg) {
  itm::GateProgram prog;
  int s_base = 1 + lambda;
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_ch(0, s_base + i));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_cnot(s_base + i, 1 + i));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_ch(0, s_base + i));
  itm::QuantumMachineSpec spec{1 + lambda, lambda, {prog}};
  return {spec, {witness_reg}};
}

wiesner::ProverInstance phase_deviation_prover(int lambda, const std::string& witness_reg,
                                               double angle) {
  itm::GateProgram prog;
  int s_base = 1 + lambda;
  qsim::Mat rz(2, 2);
  rz << 1.0, 0.0, 0.0, std::polar(1.0, angle);
  prog.gates.push_back(itm::g_dense(rz, {s_base}, {0}));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_ch(0, s_base + i));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_cnot(s_base + i, 1 + i));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_ch(0, s_base + i));
  itm::QuantumMachineSpec spec{1 + lambda, lambda, {prog}};
  return {spec, {witness_reg}};
}

wiesner::ProverInstance instantiate_prover(const wiesner::ProverFamilySpec& family,
                                           StateVector& /*state*/, int lambda,
                                           const std::string& witness_reg) {
  if (family.kind == "honest") return honest_prover(lambda, witness_reg);
  if (family.kind == "phase_deviation")
    return phase_deviation_prover(lambda, witness_reg, family.phase);
  if (family.kind == "fixed_beta") {
    itm::GateProgram prog;
    for (int i = 0; i < lambda; ++i)
      if (family.beta.bit(i)) prog.gates.push_back(itm::g_x(1 + i));
    itm::QuantumMachineSpec spec{1 + lambda, 0, {prog}};
    return {spec, {}};
  }
  throw std::invalid_argument("subspace instantiate_prover: unknown kind " + family.kind);
}

namespace {

itm::ClassicalMachineSpec make_v2(std::function<std::optional<SubspaceSecret>()> fetch_secret,
                                  int lambda) {
  itm::ClassicalMachineSpec v;
  v.rand_width = 1;
  v.round_fns.push_back([fetch_secret, lambda](std::vector<Bits>& tape, const Bits&,
                                               const Bits& u) -> itm::RoundOutput {
    auto secret = fetch_secret();
    if (!secret) {
      tape.push_back(Bits(0, 1));
      return {std::nullopt, true};
    }
    tape.push_back(encode_secret(*secret));
    tape.push_back(u);  // single challenge bit
    return {u.concat(Bits::zeros(lambda)), false};
  });
  v.round_fns.push_back([lambda](std::vector<Bits>& tape, const Bits& incoming,
                                 const Bits&) -> itm::RoundOutput {
    SubspaceSecret secret = decode_secret(tape[0], lambda);
    int c = tape[1].bit(0);
    Bits m = incoming.slice(1, lambda);
    AmbientPads ap = ambient_pads(secret);
    gf2::Subspace a = secret.money_subspace();
    int ok = c == 0 ? gf2::member(m ^ ap.x_shift, a)
                    : gf2::member(m ^ ap.z_mask, gf2::complement(a));
    tape.push_back(Bits(static_cast<std::uint64_t>(ok), 1));
    return {std::nullopt, false};
  });
  v.output_fn = [](const std::vector<Bits>& tape) {
    return tape.empty() ? 0 : static_cast<int>(tape.back().word & 1);
  };
  return v;
}

}  // namespace

itm::ClassicalMachineSpec verifier_v2(SubspaceScenario& sc, const Bits& id) {
  return make_v2(
      [&sc, id]() -> std::optional<SubspaceSecret> {
        aap::OracleReply r = sc.oracle(Role::V, "secret", id);
        if (r.is_bot()) return std::nullopt;
        return decode_secret(r.bits, sc.lambda());
      },
      sc.lambda());
}

itm::ClassicalMachineSpec verifier_v2_with_secret(const SubspaceSecret& secret) {
  return make_v2([secret]() -> std::optional<SubspaceSecret> { return secret; },
                 secret.lambda());
}

aap::Protocol subspace_protocol(const wiesner::ProverFamilySpec& family) {
  aap::Protocol p;
  p.prover_name = family.kind;
  p.input_gen = wiesner::honest_input_gen;
  p.p1 = [](aap::MoneyScenario&, const aap::ProverAux& aux) -> std::optional<aap::P1Claim> {
    if (!aux.id) return std::nullopt;
    return aap::P1Claim{*aux.id, *aux.id};
  };
  p.p2 = [family](aap::MoneyScenario& sc, const Bits&, const aap::ProverAux& aux) {
    std::string witness = aux.witness_regs.empty() ? "" : aux.witness_regs[0];
    return poqk::subspace::instantiate_prover(family, sc.state(), sc.lambda(), witness)
        .black_box();
  };
  p.v2 = [](aap::MoneyScenario& sc, const Bits& x) {
    return verifier_v2(dynamic_cast<SubspaceScenario&>(sc), x);
  };
  return p;
}

aap::ScenarioFactory subspace_factory(int lambda, OracleMode mode) {
  return [lambda, mode](std::uint64_t seed) -> std::unique_ptr<aap::MoneyScenario> {
    return std::make_unique<SubspaceScenario>(lambda, mode, seed);
  };
}

}  // namespace poqk::subspace
