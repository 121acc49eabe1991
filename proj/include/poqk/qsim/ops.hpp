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
#include <optional>
#include <vector>

#include "poqk/qsim/state.hpp"
#include "poqk/rng.hpp"

namespace poqk::qsim {

enum class PauliAxis { X, Z };

/// Tensor-product Pauli on a register: the axis applied where mask bit = 1.
struct PauliMask {
  PauliAxis axis;
  Bits mask;
};

/// Dense operator bound to a register name. Stored unitaries must satisfy
/// U^dag U = I within 1e-8; stored projectors P^2 = P within 1e-8.
struct DenseOperator {
  Mat matrix;
  std::string target;

  int width() const;
  bool is_unitary(double tol = kUnitaryTol) const;
  bool is_projector(double tol = kUnitaryTol) const;
};

/// POVM on a register: positive elements summing to the identity.
struct Povm {
  std::vector<Mat> elements;
  std::string target;

  void validate(double tol = kUnitaryTol) const;
};

// --- low-level kernels on explicit qubit indices ---

/// Applies a dense 2^k x 2^k matrix to the given k qubits (qubits[0] is the
/// least significant index into the matrix).
void apply_dense(StateVector& s, const Mat& u, const std::vector<int>& qubits);

/// Same, restricted to the subspace where `ctrls` read `ctrl_value`.
void apply_dense_controlled(StateVector& s, const Mat& u, const std::vector<int>& qubits,
                            const std::vector<int>& ctrls, std::uint64_t ctrl_value);

void apply_x(StateVector& s, int qubit);
void apply_z(StateVector& s, int qubit);
void apply_h(StateVector& s, int qubit);
void apply_cnot(StateVector& s, int control, int target);
void apply_cz(StateVector& s, int a, int b);
void apply_ch(StateVector& s, int control, int target);
/// sigma_X on every qubit whose mask bit is 1 (qubit i <-> mask bit i).
void apply_x_mask(StateVector& s, const std::vector<int>& qubits, const Bits& mask);
void apply_z_mask(StateVector& s, const std::vector<int>& qubits, const Bits& mask);
void apply_h_mask(StateVector& s, const std::vector<int>& qubits, const Bits& mask);

// --- register-level operations ---

void apply_gate(StateVector& s, const DenseOperator& op);
void apply_pauli_mask(StateVector& s, const PauliMask& p, const std::string& target);
void hadamard_layer(StateVector& s, const Bits& mask, const std::string& target);

/// Probability of each register value; entries with probability < floor are
/// dropped. Sums to 1 up to the floor.
std::vector<std::pair<Bits, double>> outcome_distribution(const StateVector& s,
                                                          const std::string& target,
                                                          double floor = 1e-14);

/// Born-rule measurement of a register in the computational basis. The state
/// collapses and is renormalized; deterministic given the rng stream.
Bits measure_computational(StateVector& s, const std::string& target, Rng& rng);

/// Projects a register onto a basis value; returns the pre-projection
/// probability (state renormalized unless the probability is ~0).
double project_register(StateVector& s, const std::string& target, const Bits& value);

/// Two-outcome projective measurement onto span{|x> : x in allowed} of a
/// register; returns (inside bit, probability of the observed outcome).
std::pair<int, double> measure_membership(StateVector& s, const std::string& target,
                                          const std::vector<Bits>& allowed, Rng& rng);

/// k EPR pairs with layout (A-half register, B-half register); pair i spans
/// bit i of each register.
StateVector make_epr_pairs(int k, const std::string& a_name = "A",
                           const std::string& b_name = "B");

/// POVM measurement; post-state follows the E^{1/2} update rule (exact for
/// the projective POVMs used by the protocols).
std::pair<int, double> povm_measure(StateVector& s, const Povm& povm, Rng& rng);

/// <target|rho_on|target> where rho_on is the reduced state on `on`.
/// `target_pure` must be a normalized vector of dimension 2^{width(on)}.
double fidelity(const StateVector& s, const Vec& target_pure, const std::string& on);
double fidelity(const StateVector& s, const Vec& target_pure,
                const std::vector<std::string>& on);
/// Same against an explicit qubit list (list order = target bit order).
double fidelity_qubits(const StateVector& s, const Vec& target_pure,
                       const std::vector<int>& qubits);

/// Partial trace onto the listed registers (in listed order).
Mat reduced_density(const StateVector& s, const std::vector<std::string>& keep);

double purity(const Mat& rho);

/// <psi| U_{qubits} |psi> without mutating the state.
cx expectation(const StateVector& s, const Mat& u, const std::vector<int>& qubits);

// --- dense-matrix helpers ---

Mat kron(const Mat& a, const Mat& b);
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat hadamard();
/// 2^n x 2^n tensor-product Pauli with the axis on mask bits (bit 0 = least
/// significant matrix index).
Mat pauli_mask_matrix(PauliAxis axis, const Bits& mask);
Mat hadamard_mask_matrix(const Bits& mask);
/// Principal square root of a PSD matrix.
Mat psd_sqrt(const Mat& m);
/// A unitary whose first column is the given unit vector (Gram-Schmidt
/// completion); applying it to |0...0> prepares the vector.
Mat state_prep_unitary(const Vec& target);
/// Completes an isometry (orthonormal columns) to a unitary; column j of the
/// result equals column j of the isometry for j < cols.
Mat isometry_completion(const Mat& iso);

}  // namespace poqk::qsim
