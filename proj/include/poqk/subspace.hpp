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
#include "poqk/gf2.hpp"
#include "poqk/wiesner.hpp"

namespace poqk::subspace {

/// Secret for a one-time-padded subspace bill: lambda is even, theta has
/// Hamming weight lambda/2, and the basis spans Z_2^lambda.
struct SubspaceSecret {
  Bits v;
  Bits theta;
  gf2::Gf2Basis basis;

  int lambda() const { return v.width; }
  /// A = span{z_i : theta_i = 1}.
  gf2::Subspace money_subspace() const;
};

/// d = v.thetabar, e = v.theta (entrywise products).
struct PadVectors {
  Bits d, e;
};
PadVectors pads(const SubspaceSecret& s);

/// The one-time pad in ambient coordinates: the X pad shifts standard-basis
/// strings by M d (M the basis matrix), and the Z pad applies phases
/// sigma_Z(M^{-T} e). With these the padded subspace state equals
/// W |$>_{v,theta} exactly; the same-basis reading of the Z pad breaks that
/// equality (and protocol completeness) for bases with M^T M != I.
struct AmbientPads {
  Bits x_shift;  // M d
  Bits z_mask;   // M^{-T} e
};
AmbientPads ambient_pads(const SubspaceSecret& s);

/// |$>_{v,theta,Z} = W |$>_{v,theta} as a 2^lambda vector. Asserts equality
/// with the padded-superposition construction (both routes are built).
qsim::Vec money_vector(const SubspaceSecret& s);

/// The padded-superposition route: X-pad Z-pad applied to the uniform
/// superposition over A. Exposed separately for the cross-check tests.
qsim::Vec money_vector_padded_superposition(const SubspaceSecret& s);

/// Writes the money state into an existing |0...0> register.
void prepare_money_state(qsim::StateVector& state, const std::string& reg,
                         const SubspaceSecret& s);

/// POVM E(theta, Z) = { W |$>_{v,theta}><$| W^dag : v }.
qsim::Povm povm_E(const Bits& theta, const gf2::Gf2Basis& basis, const std::string& target);

enum class OracleMode { Real, Purified };

struct BankRow {
  enum class Mode { Real, PurifiedUnmeasured, PurifiedMeasured };
  Mode mode = Mode::Real;
  std::optional<SubspaceSecret> secret;
  bool money_dispensed = false;
  std::string a_reg;
  std::string money_reg;
};

/// Scenario subspaces: ids have length 2 lambda + lambda^2 and the random
/// oracle entry for a minted id is lazily defined as (v, theta, Z); the
/// purified variant stores lambda EPR pairs and defers the POVM measurement
/// E(theta, Z) to the first secret query.
class SubspaceScenario : public aap::MoneyScenario {
 public:
  SubspaceScenario(int lambda, OracleMode mode, std::uint64_t seed);

  std::string name() const override { return "subspace"; }
  int id_width() const override { return 2 * lambda_ + lambda_ * lambda_; }
  aap::OracleReply oracle(aap::Role role, const std::string& keyword,
                          const Bits& arg) override;
  bool agreement(const Bits& x) override;
  int proof_relation(const Bits& x, const std::string& witness_reg) override;

  OracleMode mode() const { return mode_; }
  std::map<std::uint64_t, BankRow>& db() { return db_; }

  aap::OracleReply mint();
  SubspaceSecret purified_secret_query(const Bits& id);
  SubspaceSecret secret_of(const Bits& id);

  /// Ver: un-pads, measures P_A, rotates with H^{(x) lambda}, measures
  /// P_{A perp}; accepts iff both projections succeed. Consumes the witness.
  int ver(const SubspaceSecret& secret, const std::string& witness_reg);

  /// Samples theta with |theta|_H = lambda/2 uniformly.
  static Bits sample_balanced_theta(int lambda, Rng& rng);

 private:
  OracleMode mode_;
  aap::RandomOracleTable h_;
  std::map<std::uint64_t, BankRow> db_;
  int mint_counter_ = 0;
};

/// Packs (v, theta, Z) into the oracle's output width and back.
Bits encode_secret(const SubspaceSecret& s);
SubspaceSecret decode_secret(const Bits& packed, int lambda);

/// Honest subspace prover: single-bit challenge, N = [M1: 1 | M2: lambda].
wiesner::ProverInstance honest_prover(int lambda, const std::string& witness_reg);

/// Honest behavior plus a Z-rotation by `angle` on witness qubit 0 applied
/// only on the c=1 branch; interpolates completeness away from 1.
wiesner::ProverInstance phase_deviation_prover(int lambda, const std::string& witness_reg,
                                               double angle);

wiesner::ProverInstance instantiate_prover(const wiesner::ProverFamilySpec& family,
                                           qsim::StateVector& state, int lambda,
                                           const std::string& witness_reg);

/// Protocol subspaces V2: one-bit challenge c; checks m + Wd in A for c=0
/// and m + (W^{-T} e) in A-perp for c=1.
itm::ClassicalMachineSpec verifier_v2(SubspaceScenario& sc, const Bits& id);
itm::ClassicalMachineSpec verifier_v2_with_secret(const SubspaceSecret& secret);

aap::Protocol subspace_protocol(const wiesner::ProverFamilySpec& family);
aap::ScenarioFactory subspace_factory(int lambda, OracleMode mode);

}  // namespace poqk::subspace
