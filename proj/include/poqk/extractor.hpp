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

#include "poqk/gf2.hpp"
#include "poqk/itm.hpp"

namespace poqk::extractor {

enum class Family { Wiesner, Subspace };

/// The prover's conjugated observables, one X and one Z observable per mask,
/// as dense matrices on B = (answer register M2, private register S).
///
/// Wiesner recipe: V_c = (prod_i H_i^{c_i}) U_c, X(a) = V_a^dag (sigma_X(a)
/// (x) Id) V_a, Z(b) = V_bbar^dag (sigma_Z(b) (x) Id) V_bbar — the Z family
/// entry for mask b runs the prover on the challenge bbar, whose standard-
/// basis positions are exactly b.
///
/// Subspace recipe: V_0 = U_0, V_1 = H^{(x)lambda} U_1, X(a) = V_1^dag
/// sigma_X(a) V_1, Z(b) = V_0^dag sigma_Z(b) V_0; the tilded families apply
/// the W^{-1} relabeling of the masks.
struct ProverObservables {
  Family family = Family::Wiesner;
  int lambda = 0;
  int b_width = 0;  // M2 width + S width
  std::vector<qsim::Mat> x_obs, z_obs;      // indexed by mask
  std::vector<qsim::Mat> x_tilde, z_tilde;  // subspace only
  /// Matching A-side observables per mask (Paulis; W-conjugated when tilded).
  std::vector<qsim::Mat> a_x_obs, a_z_obs;
  std::optional<gf2::Gf2Basis> basis;  // subspace only
  std::int64_t prover_calls = 0;

  /// Hermitian, unitary, +-1 spectrum within tol for every stored observable.
  double observable_defect() const;
};

ProverObservables build_wiesner_observables(const itm::BlackBoxProver& bb, int max_qubits = 12);
ProverObservables build_subspace_observables(const itm::BlackBoxProver& bb,
                                             const gf2::Gf2Basis& basis, int max_qubits = 12);

/// Synthetic exact-Pauli observables on a B space of `s_width` witness
/// qubits behind a lambda-qubit answer register (the epsilon = 0 fixture).
ProverObservables exact_pauli_observables(int lambda);

enum class MaskDistribution { Uniform, WeightHalf, BiasedQuarter };

struct Correlations {
  double z_corr = 0.0;
  double x_corr = 0.0;
};

/// Exact expectations E_m <psi| A_W(m) (x) W^B(m) |psi> over the mask
/// distribution, W in {X, Z}. The masks c.theta (and cbar.thetabar) induced
/// by uniform (c, theta) are Bernoulli(1/4) products, which is
/// MaskDistribution::BiasedQuarter; the subspace analysis restricts to
/// weight-lambda/2 masks and tilded observables.
Correlations estimate_correlations(const ProverObservables& obs,
                                   const qsim::StateVector& state, const std::string& a_reg,
                                   const std::vector<int>& b_qubits, MaskDistribution dist,
                                   bool tilded = false);

/// The answer-register qubits followed by the private-register qubits; the
/// qubit list every B-side dense observable applies to.
std::vector<int> b_qubit_list(const itm::BlackBoxProver& bb, const qsim::StateVector& state,
                              Family family);

/// The localizing isometry Phi^B |phi> = (1/2^lambda sum_{a,b} X(a) Z(b)
/// (x) sigma_X(a) sigma_Z(b) (x) Id) |phi>|EPR>_{B'A'}. The two factor sums
/// G_W = 2^{-lambda/2} sum_m sigma_W(m)_{A'} (x) W(m)_B are stored in the
/// A'-diagonal frame: blocked over the A' computational value for Z, and
/// over its Hadamard frame for X, which keeps the application cost at
/// 2^lambda small-matrix products instead of one huge one.
struct IsometryPhi {
  int lambda = 0;
  int b_width = 0;
  /// twisted[a'] = 2^{-lambda/2} sum_m (-1)^{m.a'} W(m); dim 2^{b_width}.
  std::vector<qsim::Mat> x_twisted, z_twisted;
  std::int64_t prover_calls = 0;

  /// Full matrix H_B -> H_B (x) H_A' (x) H_B' (input B low, B' high).
  qsim::Mat matrix() const;
  /// max |Phi^dag Phi - I|.
  double isometry_defect() const;
};

IsometryPhi build_phi_isometry(const ProverObservables& obs);

/// Dense-path application: adds EPR ancilla registers (b_prime/a_prime) to
/// the state and applies G_Z then G_X on (B, A'). Returns the B' register.
std::string apply_phi_dense(const IsometryPhi& phi, qsim::StateVector& state,
                            const std::vector<int>& b_qubits, const std::string& suffix = "");

/// Circuit-path application per the controlled-gate construction: 2 forward
/// and 2 inverse black-box calls plus O(lambda) extractor gates. Agrees with
/// the dense path exactly.
std::string apply_phi_circuit(qsim::StateVector& state, const itm::BlackBoxProver& bb,
                              Family family, const std::string& suffix = "");

enum class PhiPath { Dense, Circuit };

/// Black-box extraction for the Wiesner protocol (purified mode): implements
/// Phi^B from the prover's observables, discards Bhat, and leaves the
/// candidate witness in the returned register.
std::string extract_wiesner(qsim::StateVector& state, const itm::BlackBoxProver& bb,
                            PhiPath path, const std::string& suffix = "");

/// Subspace extraction uses the un-tilded Phi^B; the output approximates the
/// padded money state W|$>_{v,theta} directly.
std::string extract_subspace(qsim::StateVector& state, const itm::BlackBoxProver& bb,
                             PhiPath path, const std::string& suffix = "");

/// Dense extraction with a caller-held isometry cache: fills the cache from
/// the prover on first use and reuses it afterwards (the prover unitary must
/// be the same circuit across calls; only register names may differ).
std::string extract_with_cached_phi(qsim::StateVector& state, const itm::BlackBoxProver& bb,
                                    Family family, std::optional<IsometryPhi>& cache,
                                    const std::string& suffix = "");

}  // namespace poqk::extractor
