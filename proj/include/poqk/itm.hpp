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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "poqk/qsim/ops.hpp"

namespace poqk::itm {

/// Primitive gate on machine-local qubit indices; controls require value 1.
struct Gate {
  qsim::Mat u;
  std::vector<int> targets;
  std::vector<int> controls;
};

/// A unitary as a gate list; local qubits [0, n_width) are the network
/// register N, the rest the private register S.
struct GateProgram {
  std::vector<Gate> gates;

  void apply(qsim::StateVector& state, const std::vector<int>& local_to_global,
             bool inverse) const;
  /// Dense matrix of the program on d local qubits.
  qsim::Mat to_matrix(int local_qubits) const;
};

Gate g_h(int q);
Gate g_x(int q);
Gate g_z(int q);
Gate g_cnot(int control, int target);
Gate g_cz(int a, int b);
Gate g_ch(int control, int target);
Gate g_dense(const qsim::Mat& u, std::vector<int> targets, std::vector<int> controls = {});

/// Interactive quantum machine: per-round unitaries on (S, N). The prove
/// phases in this codebase are all single-round.
struct QuantumMachineSpec {
  int n_width = 0;
  int s_width = 0;
  std::vector<GateProgram> round_programs;

  int rounds() const { return static_cast<int>(round_programs.size()); }
};

struct RoundOutput {
  std::optional<Bits> message;  // nullopt: silent round, nothing logged
  bool abort = false;
};

/// Interactive classical machine. Round functions stand in for the reversible
/// circuits of the formal model; the shipped verifiers only ever append to
/// their tape, which keeps them injective for fixed randomness.
struct ClassicalMachineSpec {
  int rand_width = 0;
  /// (tape, incoming N content, random input u) -> round output.
  std::vector<std::function<RoundOutput(std::vector<Bits>&, const Bits&, const Bits&)>>
      round_fns;
  std::function<int(const std::vector<Bits>&)> output_fn;

  int rounds() const { return static_cast<int>(round_fns.size()); }
};

enum class Sender { Verifier, Prover };

struct Message {
  Sender sender;
  Bits bits;
  bool operator==(const Message&) const = default;
};

struct Transcript {
  std::vector<Message> messages;
  bool operator==(const Transcript&) const = default;
  /// JSON list of {round, sender, bits(hex)}.
  std::string to_json() const;
};

struct InteractionResult {
  int verdict = 0;
  Transcript transcript;
};

/// Executes one interaction on `state`, which must contain the network
/// register `n_reg` and the prover's private registers `s_regs`. The
/// verifier speaks first; N is reset to |0> up front and measured in the
/// computational basis after every activation. Verifier randomness is drawn
/// fresh per round and never logged.
InteractionResult run_interaction(const ClassicalMachineSpec& verifier,
                                  std::vector<Bits>& tape, const QuantumMachineSpec& prover,
                                  qsim::StateVector& state, const std::string& n_reg,
                                  const std::vector<std::string>& s_regs, Rng& rng);

struct Branch {
  double prob = 0.0;
  InteractionResult result;
  qsim::StateVector state;
  std::vector<Bits> tape;
};

/// Exhaustive executor: enumerates every measurement branch of the
/// interaction for a fixed verifier randomness sequence (u_per_round[i] feeds
/// the verifier's i-th activation). Round functions must not touch state
/// outside the passed tape; resolve any oracle measurements before calling.
std::vector<Branch> run_interaction_branches(const ClassicalMachineSpec& verifier,
                                             const std::vector<Bits>& tape0,
                                             const QuantumMachineSpec& prover,
                                             const qsim::StateVector& state0,
                                             const std::string& n_reg,
                                             const std::vector<std::string>& s_regs,
                                             const std::vector<Bits>& u_per_round);

/// Measures a register and flips it back to |0...0>.
void reset_register(qsim::StateVector& state, const std::string& reg, Rng& rng);

/// Opaque handle over a prover's prove-phase unitary. Holders may run the
/// unitary or its inverse on a joint state and act freely on N, but the API
/// exposes no way to address S directly. Calls are counted for the
/// unit-cost runtime ledger.
class BlackBoxProver {
 public:
  BlackBoxProver(QuantumMachineSpec spec, std::string n_reg, std::vector<std::string> s_regs);

  int n_width() const { return spec_.n_width; }
  int s_width() const { return spec_.s_width; }
  const std::string& n_reg() const { return n_reg_; }
  const std::vector<std::string>& s_regs() const { return s_regs_; }

  /// Applies the prover's round unitary (round 0) or its inverse to the
  /// joint state containing N and S.
  void apply(qsim::StateVector& state, bool inverse) const;

  /// Full challenge-controlled unitary U = sum_c |c><c| (x) U_c as a dense
  /// matrix on (N, S). Throws if n_width + s_width exceeds the cap.
  qsim::Mat challenge_controlled_unitary(int max_qubits = 12) const;

  /// Dense block U_c on (answer part of N, S) for a fixed challenge written
  /// into the first `challenge_width` qubits of N. Verifies that the prover
  /// does not move the challenge register.
  qsim::Mat challenge_block(const Bits& challenge, int max_qubits = 12) const;

  std::int64_t forward_calls() const { return forward_calls_; }
  std::int64_t inverse_calls() const { return inverse_calls_; }
  void reset_ledger() const { forward_calls_ = inverse_calls_ = 0; }

  /// Runs the machine inside an interaction (the executor needs the machine spec;
  /// extractors have no business calling this).
  const QuantumMachineSpec& spec_for_executor() const { return spec_; }

 private:
  QuantumMachineSpec spec_;
  std::string n_reg_;
  std::vector<std::string> s_regs_;
  mutable std::int64_t forward_calls_ = 0;
  mutable std::int64_t inverse_calls_ = 0;
};

}  // namespace poqk::itm
