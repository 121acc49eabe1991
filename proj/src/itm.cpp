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

#include "poqk/itm.hpp"

#include <sstream>

namespace poqk::itm {

void GateProgram::apply(qsim::StateVector& state, const std::vector<int>& local_to_global,
                        bool inverse) const {
  auto map_indices = [&](const std::vector<int>& local) {
    std::vector<int> out;
    out.reserve(local.size());
    for (int q : local) {
      if (q < 0 || q >= static_cast<int>(local_to_global.size()))
        throw std::invalid_argument("GateProgram: local qubit out of range");
      out.push_back(local_to_global[q]);
    }
    return out;
  };
  auto run_gate = [&](const Gate& g, bool inv) {
    qsim::Mat u = inv ? qsim::Mat(g.u.adjoint()) : g.u;
    auto targets = map_indices(g.targets);
    if (g.controls.empty()) {
      qsim::apply_dense(state, u, targets);
    } else {
      auto ctrls = map_indices(g.controls);
      qsim::apply_dense_controlled(state, u, targets, ctrls,
                                   Bits::mask_of(static_cast<int>(ctrls.size())));
    }
  };
  if (!inverse) {
    for (const auto& g : gates) run_gate(g, false);
  } else {
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) run_gate(*it, true);
  }
}

qsim::Mat GateProgram::to_matrix(int local_qubits) const {
  std::int64_t d = 1LL << local_qubits;
  std::vector<std::pair<std::string, int>> layout = {{"q", local_qubits}};
  std::vector<int> ident(local_qubits);
  for (int i = 0; i < local_qubits; ++i) ident[i] = i;
  qsim::Mat m(d, d);
  for (std::int64_t col = 0; col < d; ++col) {
    qsim::StateVector s = qsim::StateVector::vacuum(layout);
    s.amplitudes()[0] = 0.0;
    s.amplitudes()[col] = 1.0;
    apply(s, ident, false);
    m.col(col) = s.amplitudes();
  }
  return m;
}

Gate g_h(int q) { return {qsim::hadamard(), {q}, {}}; }
Gate g_x(int q) { return {qsim::pauli_x(), {q}, {}}; }
Gate g_z(int q) { return {qsim::pauli_z(), {q}, {}}; }
Gate g_cnot(int control, int target) { return {qsim::pauli_x(), {target}, {control}}; }
Gate g_cz(int a, int b) { return {qsim::pauli_z(), {b}, {a}}; }
Gate g_ch(int control, int target) { return {qsim::hadamard(), {target}, {control}}; }
Gate g_dense(const qsim::Mat& u, std::vector<int> targets, std::vector<int> controls) {
  return {u, std::move(targets), std::move(controls)};
}

std::string Transcript::to_json() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < messages.size(); ++i) {
    if (i) os << ",";
    os << "{\"round\":" << i << ",\"sender\":\""
       << (messages[i].sender == Sender::Verifier ? "V" : "P") << "\",\"bits\":\""
       << messages[i].bits.to_hex() << "\"}";
  }
  os << "]";
  return os.str();
}

namespace {

std::vector<int> wiring(const qsim::StateVector& state, const std::string& n_reg,
                        const std::vector<std::string>& s_regs) {
  std::vector<std::string> names = {n_reg};
  names.insert(names.end(), s_regs.begin(), s_regs.end());
  return state.qubits_of(names);
}

void write_register(qsim::StateVector& state, const std::string& reg, const Bits& value,
                    const Bits& current) {
  qsim::apply_x_mask(state, state.qubits_of(reg), value ^ current);
}

}  // namespace

void reset_register(qsim::StateVector& state, const std::string& reg, Rng& rng) {
  Bits cur = qsim::measure_computational(state, reg, rng);
  write_register(state, reg, Bits::zeros(cur.width), cur);
}

InteractionResult run_interaction(const ClassicalMachineSpec& verifier, std::vector<Bits>& tape,
                                  const QuantumMachineSpec& prover, qsim::StateVector& state,
                                  const std::string& n_reg,
                                  const std::vector<std::string>& s_regs, Rng& rng) {
  if (state.reg(n_reg).width != prover.n_width)
    throw std::invalid_argument("run_interaction: network width mismatch");
  auto map = wiring(state, n_reg, s_regs);
  if (static_cast<int>(map.size()) != prover.n_width + prover.s_width)
    throw std::invalid_argument("run_interaction: private width mismatch");

  reset_register(state, n_reg, rng);
  InteractionResult res;
  Bits n_content = Bits::zeros(prover.n_width);
  int total = std::max(verifier.rounds(), prover.rounds());
  for (int r = 0; r < total; ++r) {
    if (r < verifier.rounds()) {
      Bits u = rng.bits(verifier.rand_width);
      RoundOutput out = verifier.round_fns[r](tape, n_content, u);
      if (out.message) {
        if (out.message->width != prover.n_width)
          throw std::invalid_argument("run_interaction: verifier message width mismatch");
        write_register(state, n_reg, *out.message, n_content);
        n_content = *out.message;
        res.transcript.messages.push_back({Sender::Verifier, n_content});
      }
      if (out.abort) break;
    }
    if (r < prover.rounds()) {
      prover.round_programs[r].apply(state, map, false);
      n_content = qsim::measure_computational(state, n_reg, rng);
      res.transcript.messages.push_back({Sender::Prover, n_content});
    }
  }
  res.verdict = verifier.output_fn(tape);
  return res;
}

std::vector<Branch> run_interaction_branches(const ClassicalMachineSpec& verifier,
                                             const std::vector<Bits>& tape0,
                                             const QuantumMachineSpec& prover,
                                             const qsim::StateVector& state0,
                                             const std::string& n_reg,
                                             const std::vector<std::string>& s_regs,
                                             const std::vector<Bits>& u_per_round) {
  if (static_cast<int>(u_per_round.size()) < verifier.rounds())
    throw std::invalid_argument("run_interaction_branches: missing randomness");
  std::vector<Branch> done;

  struct Frame {
    double prob;
    qsim::StateVector state;
    std::vector<Bits> tape;
    Transcript transcript;
    Bits n_content;
    int round;
    bool aborted;
  };
  std::vector<Frame> stack;
  stack.push_back({1.0, state0, tape0, {}, Bits::zeros(prover.n_width), 0, false});

  int total = std::max(verifier.rounds(), prover.rounds());
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.round >= total || f.aborted) {
      Branch b;
      b.prob = f.prob;
      b.result.verdict = verifier.output_fn(f.tape);
      b.result.transcript = std::move(f.transcript);
      b.state = std::move(f.state);
      b.tape = std::move(f.tape);
      done.push_back(std::move(b));
      continue;
    }
    int r = f.round;
    if (r < verifier.rounds()) {
      RoundOutput out = verifier.round_fns[r](f.tape, f.n_content, u_per_round[r]);
      if (out.message) {
        write_register(f.state, n_reg, *out.message, f.n_content);
        f.n_content = *out.message;
        f.transcript.messages.push_back({Sender::Verifier, f.n_content});
      }
      if (out.abort) {
        f.aborted = true;
        stack.push_back(std::move(f));
        continue;
      }
    }
    if (r < prover.rounds()) {
      auto map = wiring(f.state, n_reg, s_regs);
      prover.round_programs[r].apply(f.state, map, false);
      for (const auto& [bits, p] : qsim::outcome_distribution(f.state, n_reg, 1e-18)) {
        Frame child = f;
        qsim::project_register(child.state, n_reg, bits);
        child.prob *= p;
        child.n_content = bits;
        child.transcript.messages.push_back({Sender::Prover, bits});
        child.round = r + 1;
        stack.push_back(std::move(child));
      }
    } else {
      f.round = r + 1;
      stack.push_back(std::move(f));
    }
  }
  return done;
}

BlackBoxProver::BlackBoxProver(QuantumMachineSpec spec, std::string n_reg,
                               std::vector<std::string> s_regs)
    : spec_(std::move(spec)), n_reg_(std::move(n_reg)), s_regs_(std::move(s_regs)) {
  if (spec_.rounds() != 1)
    throw std::invalid_argument("BlackBoxProver: expected a single-round prove phase");
}

void BlackBoxProver::apply(qsim::StateVector& state, bool inverse) const {
  auto map = wiring(state, n_reg_, s_regs_);
  if (static_cast<int>(map.size()) != spec_.n_width + spec_.s_width)
    throw std::invalid_argument("BlackBoxProver: wiring width mismatch");
  spec_.round_programs[0].apply(state, map, inverse);
  (inverse ? inverse_calls_ : forward_calls_)++;
}

qsim::Mat BlackBoxProver::challenge_controlled_unitary(int max_qubits) const {
  int n = spec_.n_width + spec_.s_width;
  if (n > max_qubits)
    throw std::invalid_argument("challenge_controlled_unitary: dense cap exceeded");
  forward_calls_ += 1LL << n;  // one execution per basis column
  return spec_.round_programs[0].to_matrix(n);
}

qsim::Mat BlackBoxProver::challenge_block(const Bits& challenge, int max_qubits) const {
  int cw = challenge.width;
  int total = spec_.n_width + spec_.s_width;
  int rest = total - cw;
  if (rest > max_qubits) throw std::invalid_argument("challenge_block: dense cap exceeded");
  std::int64_t d = 1LL << rest;
  std::vector<std::pair<std::string, int>> layout = {{"q", total}};
  std::vector<int> ident(total);
  for (int i = 0; i < total; ++i) ident[i] = i;
  qsim::Mat block(d, d);
  for (std::int64_t col = 0; col < d; ++col) {
    qsim::StateVector s = qsim::StateVector::vacuum(layout);
    // basis state |challenge>_{M1} |col>_{M2,S}
    std::int64_t index = static_cast<std::int64_t>(challenge.word) | (col << cw);
    s.amplitudes()[0] = 0.0;
    s.amplitudes()[index] = 1.0;
    spec_.round_programs[0].apply(s, ident, false);
    ++forward_calls_;
    const qsim::Vec& a = s.amplitudes();
    for (std::int64_t row = 0; row < d; ++row)
      block(row, col) = a[static_cast<std::int64_t>(challenge.word) | (row << cw)];
  }
  // Columns lose norm if the prover moves the challenge register, so this
  // doubles as the challenge-controlled structure check.
  qsim::Mat err = block.adjoint() * block - qsim::Mat::Identity(d, d);
  if (err.cwiseAbs().maxCoeff() > qsim::kUnitaryTol)
    throw std::invalid_argument("challenge_block: prover is not challenge-controlled");
  return block;
}

}  // namespace poqk::itm
