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

#include "poqk/extractor.hpp"
#include "poqk/wiesner.hpp"

namespace poqk::cloning {

/// A 1-qubit -> 2-qubit channel as a Choi matrix on (in (x) out) with the
/// input factor on the high bits: C = sum_{ij} |i><j| (x) Lambda(|i><j|).
struct CloneChannel {
  qsim::Mat choi;  // 8 x 8
  double achieved_value = 0.0;

  double tp_defect() const;   // |Tr_out C - I_2|, max entry
  double psd_defect() const;  // most negative eigenvalue, clamped at 0
  std::vector<qsim::Mat> kraus() const;
  /// Stinespring isometry V = sum_k K_k (x) |k>_env as a (4 * 2^e) x 2
  /// matrix; env padded to a whole number of qubits.
  qsim::Mat stinespring(int& env_qubits) const;
};

/// E_{v,theta} <v theta, v theta| Lambda(|v theta><v theta|) |v theta, v theta>
/// over the four single-qubit Wiesner states.
double per_qubit_joint_pass(const CloneChannel& ch);

/// Measure in the computational basis and hand both parties |m>.
CloneChannel measure_resend_cloner();

/// The numerically optimized cloner fixture (produced by tools/cloner_opt and
/// shipped under fixtures/). Validates PSD/TP on load and that the achieved
/// value clears 0.74.
CloneChannel load_optimal_cloner(const std::string& path = "");

/// Applies the channel to every qubit of a bill register: the bill qubits
/// become party A's copy, `out_b` party B's, with fresh environment
/// registers tracing out the Stinespring dilation.
void apply_clone_channel(qsim::StateVector& state, const CloneChannel& ch,
                         const std::string& bill_reg, const std::string& out_b,
                         const std::string& env_prefix);

struct CloningStrategy {
  enum class Kind { HonestTwoBills, TrivialSplit, PerQubitChannel };
  Kind kind = Kind::TrivialSplit;
  std::string name = "trivial_split";
  CloneChannel channel;  // PerQubitChannel only

  static CloningStrategy honest_two_bills();
  static CloningStrategy trivial_split();
  static CloningStrategy per_qubit(const CloneChannel& ch, const std::string& name);
};

struct GameRow {
  std::string scenario = "wiesner";
  std::string strategy;
  int lambda = 0;
  int trials = 0;
  int wins = 0;
  double win_rate = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  double bound = 0.0;  // (3/4)^lambda
};

/// The no-cloning game: the adversary holds one bill, produces a bipartite
/// sigma_AB, both parties claim the same id, and the game is won iff the
/// money verification accepts both halves (independent verification
/// randomness). The two halves share no registers after distribution.
GameRow run_no_cloning_game(int lambda, const CloningStrategy& strategy, int trials,
                            std::uint64_t seed);

struct NondestructiveReport {
  bool is_nondestructive = false;
  bool transcript_deterministic = false;
  double max_damage = 1.0;
};

/// Exhaustive scan over the verifier randomness: an interaction is flagged
/// nondestructive when every challenge yields a deterministic transcript and
/// undoing the prover unitary restores the pre-interaction state. max_damage
/// = 1 - min_u (replay fidelity after the undo).
NondestructiveReport nondestructive_check(const wiesner::ProverInstance& prover,
                                          const itm::ClassicalMachineSpec& verifier,
                                          const qsim::StateVector& init, double tolerance);

/// For a nondestructive prover, repeated runs determine the full response
/// signature r(m): the deterministic reply to each verifier message.
std::map<std::uint64_t, Bits> learn_response_signature(const wiesner::ProverInstance& prover,
                                                       const itm::ClassicalMachineSpec& verifier,
                                                       const qsim::StateVector& init,
                                                       int rand_width);

struct DoubleVerification {
  bool agree_match = false;
  int accept_first = 0;
  int accept_second = 0;
  static constexpr double delta0 = 0.1339745962155614;  // (2 - sqrt 3)/2
};

enum class SplitKind { TwoGenuineBills, BillAndNothing };

/// The reduction adversary: runs both agree phases, aborts unless the
/// instances match, extracts from both provers, and submits the outputs to
/// R (x) R sequentially (A first, then B's post-A state).
DoubleVerification pok_to_money_adversary(int lambda, SplitKind split, std::uint64_t seed);

struct AmplificationRow {
  std::vector<double> per_round_pass;
  double overall_pass = 0.0;
  int trials = 0;
};

enum class AmplificationProver { FreshBills, ReuseBill, FixedBeta };

/// n sequential prove phases against one prover state; overall pass is the
/// AND of the rounds. FreshBills provisions one witness per round (the
/// honest sequential prover), ReuseBill reuses a single post-measurement
/// witness, FixedBeta ignores the witness entirely.
AmplificationRow sequential_amplification(int lambda, AmplificationProver mode, int n_reps,
                                          int trials, std::uint64_t seed);

}  // namespace poqk::cloning
