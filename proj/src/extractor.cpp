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

#include "poqk/extractor.hpp"

#include <cmath>

namespace poqk::extractor {

using qsim::Mat;
using qsim::StateVector;

namespace {

double hermitian_unitary_defect(const Mat& o) {
  double d1 = (o - o.adjoint()).cwiseAbs().maxCoeff();
  double d2 = (o * o - Mat::Identity(o.rows(), o.cols())).cwiseAbs().maxCoeff();
  return std::max(d1, d2);
}

Mat on_m2(const Mat& op_m2, int s_width) {
  // B-local ordering: M2 occupies the low qubits, S the high ones.
  return qsim::kron(Mat::Identity(1LL << s_width, 1LL << s_width), op_m2);
}

/// Reads the (classical) content of a register; throws if superposed.
Bits classical_value(const StateVector& s, const std::string& reg) {
  auto dist = qsim::outcome_distribution(s, reg, 1e-12);
  if (dist.size() != 1)
    throw std::logic_error("classical_value: register " + reg + " is in superposition");
  return dist[0].first;
}

void reset_classical_register(StateVector& s, const std::string& reg) {
  Bits cur = classical_value(s, reg);
  qsim::apply_x_mask(s, s.qubits_of(reg), cur);
}

}  // namespace

double ProverObservables::observable_defect() const {
  double worst = 0.0;
  for (const auto& o : x_obs) worst = std::max(worst, hermitian_unitary_defect(o));
  for (const auto& o : z_obs) worst = std::max(worst, hermitian_unitary_defect(o));
  for (const auto& o : x_tilde) worst = std::max(worst, hermitian_unitary_defect(o));
  for (const auto& o : z_tilde) worst = std::max(worst, hermitian_unitary_defect(o));
  return worst;
}

ProverObservables build_wiesner_observables(const itm::BlackBoxProver& bb, int max_qubits) {
  int lambda = bb.n_width() / 2;
  ProverObservables obs;
  obs.family = Family::Wiesner;
  obs.lambda = lambda;
  obs.b_width = lambda + bb.s_width();
  obs.x_obs.resize(1LL << lambda);
  obs.z_obs.resize(1LL << lambda);
  obs.a_x_obs.resize(1LL << lambda);
  obs.a_z_obs.resize(1LL << lambda);
  std::int64_t calls_before = bb.forward_calls() + bb.inverse_calls();
  for (std::uint64_t c = 0; c < (1ULL << lambda); ++c) {
    Bits cb(c, lambda);
    Mat u_c = bb.challenge_block(cb, max_qubits);
    Mat v_c = on_m2(qsim::hadamard_mask_matrix(cb), bb.s_width()) * u_c;
    // X(c) at challenge c; Z(cbar) at the same challenge: the unchecked
    // complement masks pair up exactly.
    obs.x_obs[c] = v_c.adjoint() * on_m2(qsim::pauli_mask_matrix(qsim::PauliAxis::X, cb),
                                         bb.s_width()) *
                   v_c;
    Bits comp = cb.flipped();
    obs.z_obs[comp.word] =
        v_c.adjoint() *
        on_m2(qsim::pauli_mask_matrix(qsim::PauliAxis::Z, comp), bb.s_width()) * v_c;
    obs.a_x_obs[c] = qsim::pauli_mask_matrix(qsim::PauliAxis::X, cb);
    obs.a_z_obs[c] = qsim::pauli_mask_matrix(qsim::PauliAxis::Z, cb);
  }
  obs.prover_calls = bb.forward_calls() + bb.inverse_calls() - calls_before;
  return obs;
}

ProverObservables build_subspace_observables(const itm::BlackBoxProver& bb,
                                             const gf2::Gf2Basis& basis, int max_qubits) {
  int lambda = bb.n_width() - 1;
  ProverObservables obs;
  obs.family = Family::Subspace;
  obs.lambda = lambda;
  obs.b_width = lambda + bb.s_width();
  obs.basis = basis;
  std::int64_t calls_before = bb.forward_calls() + bb.inverse_calls();
  Mat v0 = bb.challenge_block(Bits(0, 1), max_qubits);
  Mat v1 = on_m2(qsim::hadamard_mask_matrix(Bits::ones(lambda)), bb.s_width()) *
           bb.challenge_block(Bits(1, 1), max_qubits);
  auto inv = basis.m.inverse();
  if (!inv) throw std::invalid_argument("build_subspace_observables: dependent basis");
  obs.x_obs.resize(1LL << lambda);
  obs.z_obs.resize(1LL << lambda);
  obs.x_tilde.resize(1LL << lambda);
  obs.z_tilde.resize(1LL << lambda);
  obs.a_x_obs.resize(1LL << lambda);
  obs.a_z_obs.resize(1LL << lambda);
  for (std::uint64_t m = 0; m < (1ULL << lambda); ++m) {
    Bits mask(m, lambda);
    obs.x_obs[m] = v1.adjoint() *
                   on_m2(qsim::pauli_mask_matrix(qsim::PauliAxis::X, mask), bb.s_width()) * v1;
    obs.z_obs[m] = v0.adjoint() *
                   on_m2(qsim::pauli_mask_matrix(qsim::PauliAxis::Z, mask), bb.s_width()) * v0;
    obs.a_x_obs[m] = qsim::pauli_mask_matrix(qsim::PauliAxis::X, mask);
    obs.a_z_obs[m] = qsim::pauli_mask_matrix(qsim::PauliAxis::Z, mask);
  }
  // Xtilde(a') = X(W^dag a') = X(M^{-1} a'), likewise for Z.
  for (std::uint64_t m = 0; m < (1ULL << lambda); ++m) {
    Bits relabeled = inv->matvec(Bits(m, lambda));
    obs.x_tilde[m] = obs.x_obs[relabeled.word];
    obs.z_tilde[m] = obs.z_obs[relabeled.word];
  }
  obs.prover_calls = bb.forward_calls() + bb.inverse_calls() - calls_before;
  return obs;
}

ProverObservables exact_pauli_observables(int lambda) {
  ProverObservables obs;
  obs.family = Family::Wiesner;
  obs.lambda = lambda;
  obs.b_width = 2 * lambda;  // an answer register in front of lambda witness qubits
  std::int64_t d = 1LL << lambda;
  obs.x_obs.resize(d);
  obs.z_obs.resize(d);
  obs.a_x_obs.resize(d);
  obs.a_z_obs.resize(d);
  for (std::uint64_t m = 0; m < static_cast<std::uint64_t>(d); ++m) {
    Bits mask(m, lambda);
    Mat xm = qsim::pauli_mask_matrix(qsim::PauliAxis::X, mask);
    Mat zm = qsim::pauli_mask_matrix(qsim::PauliAxis::Z, mask);
    obs.x_obs[m] = qsim::kron(xm, Mat::Identity(d, d));  // sigma on S (high), Id on M2
    obs.z_obs[m] = qsim::kron(zm, Mat::Identity(d, d));
    obs.a_x_obs[m] = xm;
    obs.a_z_obs[m] = zm;
  }
  return obs;
}

std::vector<int> b_qubit_list(const itm::BlackBoxProver& bb, const StateVector& state,
                              Family family) {
  auto n_qubits = state.qubits_of(bb.n_reg());
  int challenge_width = family == Family::Wiesner ? bb.n_width() / 2 : 1;
  std::vector<int> out(n_qubits.begin() + challenge_width, n_qubits.end());
  for (const auto& reg : bb.s_regs()) {
    auto qs = state.qubits_of(reg);
    out.insert(out.end(), qs.begin(), qs.end());
  }
  return out;
}

Correlations estimate_correlations(const ProverObservables& obs, const StateVector& state,
                                   const std::string& a_reg, const std::vector<int>& b_qubits,
                                   MaskDistribution dist, bool tilded) {
  int lambda = obs.lambda;
  if (tilded && obs.x_tilde.empty())
    throw std::invalid_argument("estimate_correlations: no tilded observables");
  auto a_qubits = state.qubits_of(a_reg);

  Mat w;
  if (tilded) w = gf2::w_unitary(*obs.basis, a_reg).matrix;

  auto weight = [&](const Bits& m) -> double {
    switch (dist) {
      case MaskDistribution::Uniform:
        return std::pow(0.5, lambda);
      case MaskDistribution::WeightHalf:
        return m.popcount() == lambda / 2 ? -1.0 : 0.0;  // normalized below
      case MaskDistribution::BiasedQuarter:
        return std::pow(0.25, m.popcount()) * std::pow(0.75, lambda - m.popcount());
    }
    return 0.0;
  };

  double half_count = 0;
  if (dist == MaskDistribution::WeightHalf) {
    for (std::uint64_t m = 0; m < (1ULL << lambda); ++m)
      if (std::popcount(m) == lambda / 2) half_count += 1.0;
  }

  Correlations corr;
  for (std::uint64_t m = 0; m < (1ULL << lambda); ++m) {
    Bits mask(m, lambda);
    double w_m = weight(mask);
    if (w_m < 0) w_m = 1.0 / half_count;
    if (w_m == 0.0) continue;
    for (int which = 0; which < 2; ++which) {
      const Mat& b_op = which == 0 ? (tilded ? obs.z_tilde[m] : obs.z_obs[m])
                                   : (tilded ? obs.x_tilde[m] : obs.x_obs[m]);
      Mat a_op = which == 0 ? obs.a_z_obs[m] : obs.a_x_obs[m];
      if (tilded) a_op = w.adjoint() * a_op * w;
      StateVector tmp = state;
      qsim::apply_dense(tmp, a_op, a_qubits);
      qsim::apply_dense(tmp, b_op, b_qubits);
      double val = state.inner(tmp).real();
      (which == 0 ? corr.z_corr : corr.x_corr) += w_m * val;
    }
  }
  return corr;
}

IsometryPhi build_phi_isometry(const ProverObservables& obs) {
  IsometryPhi phi;
  phi.lambda = obs.lambda;
  phi.b_width = obs.b_width;
  phi.prover_calls = obs.prover_calls;
  std::int64_t bd = 1LL << obs.b_width;
  std::int64_t ad = 1LL << obs.lambda;
  double norm = std::pow(2.0, -obs.lambda / 2.0);
  phi.x_twisted.assign(ad, Mat::Zero(bd, bd));
  phi.z_twisted.assign(ad, Mat::Zero(bd, bd));
  for (std::int64_t ap = 0; ap < ad; ++ap)
    for (std::uint64_t m = 0; m < static_cast<std::uint64_t>(ad); ++m) {
      double sign = std::popcount(m & static_cast<std::uint64_t>(ap)) & 1 ? -norm : norm;
      phi.x_twisted[ap] += sign * obs.x_obs[m];
      phi.z_twisted[ap] += sign * obs.z_obs[m];
    }
  return phi;
}

namespace {

/// G_Z then G_X on (B, A'): G_Z is A'-diagonal; G_X is A'-diagonal in the
/// Hadamard frame.
void apply_phi_factors(const IsometryPhi& phi, StateVector& state,
                       const std::vector<int>& b_qubits, const std::vector<int>& ap_qubits) {
  std::int64_t ad = 1LL << phi.lambda;
  for (std::int64_t ap = 0; ap < ad; ++ap)
    qsim::apply_dense_controlled(state, phi.z_twisted[ap], b_qubits, ap_qubits,
                                 static_cast<std::uint64_t>(ap));
  for (int q : ap_qubits) qsim::apply_h(state, q);
  for (std::int64_t ap = 0; ap < ad; ++ap)
    qsim::apply_dense_controlled(state, phi.x_twisted[ap], b_qubits, ap_qubits,
                                 static_cast<std::uint64_t>(ap));
  for (int q : ap_qubits) qsim::apply_h(state, q);
}

}  // namespace

Mat IsometryPhi::matrix() const {
  std::int64_t bd = 1LL << b_width;
  std::int64_t ad = 1LL << lambda;
  std::int64_t out_dim = bd * ad * ad;
  Mat full = Mat::Zero(out_dim, bd);
  double epr_amp = std::pow(2.0, -lambda / 2.0);
  StateVector scratch =
      StateVector::vacuum({{"B", b_width}, {"Ap", lambda}, {"Bp", lambda}});
  std::vector<int> b_qubits = scratch.qubits_of("B");
  std::vector<int> ap_qubits = scratch.qubits_of("Ap");
  for (std::int64_t col = 0; col < bd; ++col) {
    qsim::Vec& amps = scratch.amplitudes();
    amps.setZero();
    for (std::int64_t x = 0; x < ad; ++x)
      amps[col | (x << b_width) | (x << (b_width + lambda))] = epr_amp;
    apply_phi_factors(*this, scratch, b_qubits, ap_qubits);
    full.col(col) = amps;
  }
  return full;
}

double IsometryPhi::isometry_defect() const {
  Mat m = matrix();
  Mat gram = m.adjoint() * m;
  return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

std::string apply_phi_dense(const IsometryPhi& phi, StateVector& state,
                            const std::vector<int>& b_qubits, const std::string& suffix) {
  if (static_cast<int>(b_qubits.size()) != phi.b_width)
    throw std::invalid_argument("apply_phi_dense: B width mismatch");
  std::string bp = "Bp" + suffix, ap = "Ap" + suffix;
  state.add_register(bp, phi.lambda);
  state.add_register(ap, phi.lambda);
  auto bp_q = state.qubits_of(bp), ap_q = state.qubits_of(ap);
  for (int i = 0; i < phi.lambda; ++i) {
    qsim::apply_h(state, bp_q[i]);
    qsim::apply_cnot(state, bp_q[i], ap_q[i]);
  }
  apply_phi_factors(phi, state, b_qubits, ap_q);
  if (std::abs(state.norm() - 1.0) > 1e-6)
    throw std::logic_error("apply_phi_dense: output not normalized (non-unitary observables?)");
  state.normalize();
  return bp;
}

namespace {

struct CircuitRegs {
  std::vector<int> m1, m2, bp, ap;
};

/// Controlled-Z^B(b) with b read from Bp: writes bbar into the challenge
/// register, runs U, applies the challenge-basis layer, phases sigma_Z(b) on
/// the answer register, undoes the layer and U, and clears the challenge.
void controlled_z_obs(StateVector& state, const itm::BlackBoxProver& bb, const CircuitRegs& r,
                      Family family) {
  if (family == Family::Wiesner) {
    for (size_t i = 0; i < r.bp.size(); ++i) qsim::apply_cnot(state, r.bp[i], r.m1[i]);
    for (int q : r.m1) qsim::apply_x(state, q);
    bb.apply(state, false);
    for (size_t i = 0; i < r.m1.size(); ++i) qsim::apply_ch(state, r.m1[i], r.m2[i]);
    for (size_t i = 0; i < r.bp.size(); ++i) qsim::apply_cz(state, r.bp[i], r.m2[i]);
    for (size_t i = 0; i < r.m1.size(); ++i) qsim::apply_ch(state, r.m1[i], r.m2[i]);
    bb.apply(state, true);
    for (int q : r.m1) qsim::apply_x(state, q);
    for (size_t i = 0; i < r.bp.size(); ++i) qsim::apply_cnot(state, r.bp[i], r.m1[i]);
  } else {
    // subspace: Z observables live on the c = 0 branch
    bb.apply(state, false);
    for (size_t i = 0; i < r.bp.size(); ++i) qsim::apply_cz(state, r.bp[i], r.m2[i]);
    bb.apply(state, true);
  }
}

/// Controlled-X^B(a) with a read from Ap.
void controlled_x_obs(StateVector& state, const itm::BlackBoxProver& bb, const CircuitRegs& r,
                      Family family) {
  if (family == Family::Wiesner) {
    for (size_t i = 0; i < r.ap.size(); ++i) qsim::apply_cnot(state, r.ap[i], r.m1[i]);
    bb.apply(state, false);
    for (size_t i = 0; i < r.m1.size(); ++i) qsim::apply_ch(state, r.m1[i], r.m2[i]);
    for (size_t i = 0; i < r.ap.size(); ++i) qsim::apply_cnot(state, r.ap[i], r.m2[i]);
    for (size_t i = 0; i < r.m1.size(); ++i) qsim::apply_ch(state, r.m1[i], r.m2[i]);
    bb.apply(state, true);
    for (size_t i = 0; i < r.ap.size(); ++i) qsim::apply_cnot(state, r.ap[i], r.m1[i]);
  } else {
    // subspace: X observables live on the c = 1 branch
    qsim::apply_x(state, r.m1[0]);
    bb.apply(state, false);
    for (int q : r.m2) qsim::apply_h(state, q);
    for (size_t i = 0; i < r.ap.size(); ++i) qsim::apply_cnot(state, r.ap[i], r.m2[i]);
    for (int q : r.m2) qsim::apply_h(state, q);
    bb.apply(state, true);
    qsim::apply_x(state, r.m1[0]);
  }
}

}  // namespace

std::string apply_phi_circuit(StateVector& state, const itm::BlackBoxProver& bb, Family family,
                              const std::string& suffix) {
  int lambda = family == Family::Wiesner ? bb.n_width() / 2 : bb.n_width() - 1;
  int challenge_width = family == Family::Wiesner ? lambda : 1;
  std::string bp = "Bp" + suffix, ap = "Ap" + suffix;
  state.add_register(bp, lambda);
  state.add_register(ap, lambda);

  CircuitRegs regs;
  auto n_qubits = state.qubits_of(bb.n_reg());
  regs.m1.assign(n_qubits.begin(), n_qubits.begin() + challenge_width);
  regs.m2.assign(n_qubits.begin() + challenge_width, n_qubits.end());
  regs.bp = state.qubits_of(bp);
  regs.ap = state.qubits_of(ap);

  for (int q : regs.bp) qsim::apply_h(state, q);
  controlled_z_obs(state, bb, regs, family);
  for (int q : regs.bp) qsim::apply_h(state, q);
  for (int q : regs.ap) qsim::apply_h(state, q);
  controlled_x_obs(state, bb, regs, family);
  for (size_t i = 0; i < regs.bp.size(); ++i) qsim::apply_cnot(state, regs.bp[i], regs.ap[i]);
  return bp;
}

std::string extract_wiesner(StateVector& state, const itm::BlackBoxProver& bb, PhiPath path,
                            const std::string& suffix) {
  if (!state.has_register(bb.n_reg())) state.add_register(bb.n_reg(), bb.n_width());
  reset_classical_register(state, bb.n_reg());
  if (path == PhiPath::Circuit) return apply_phi_circuit(state, bb, Family::Wiesner, suffix);
  IsometryPhi phi = build_phi_isometry(build_wiesner_observables(bb));
  return apply_phi_dense(phi, state, b_qubit_list(bb, state, Family::Wiesner), suffix);
}

std::string extract_subspace(StateVector& state, const itm::BlackBoxProver& bb, PhiPath path,
                             const std::string& suffix) {
  if (!state.has_register(bb.n_reg())) state.add_register(bb.n_reg(), bb.n_width());
  reset_classical_register(state, bb.n_reg());
  if (path == PhiPath::Circuit) return apply_phi_circuit(state, bb, Family::Subspace, suffix);
  // Dense path: the un-tilded observables need no basis knowledge (Eq.
  // phi-tildephi: tracing out A' removes the dependence), so build them with
  // the challenge blocks directly.
  int lambda = bb.n_width() - 1;
  ProverObservables obs = build_subspace_observables(
      bb, gf2::Gf2Basis{gf2::Gf2Matrix::identity(lambda)});  // basis only fills the tilded family
  IsometryPhi phi = build_phi_isometry(obs);
  return apply_phi_dense(phi, state, b_qubit_list(bb, state, Family::Subspace), suffix);
}

std::string extract_with_cached_phi(StateVector& state, const itm::BlackBoxProver& bb,
                                    Family family, std::optional<IsometryPhi>& cache,
                                    const std::string& suffix) {
  if (!state.has_register(bb.n_reg())) state.add_register(bb.n_reg(), bb.n_width());
  reset_classical_register(state, bb.n_reg());
  if (!cache) {
    int lambda = family == Family::Wiesner ? bb.n_width() / 2 : bb.n_width() - 1;
    ProverObservables obs =
        family == Family::Wiesner
            ? build_wiesner_observables(bb)
            : build_subspace_observables(bb, gf2::Gf2Basis{gf2::Gf2Matrix::identity(lambda)});
    cache = build_phi_isometry(obs);
  }
  if (cache->b_width != bb.n_width() - (family == Family::Wiesner ? bb.n_width() / 2 : 1) +
                            bb.s_width())
    throw std::invalid_argument("extract_with_cached_phi: cached isometry width mismatch");
  return apply_phi_dense(*cache, state, b_qubit_list(bb, state, family), suffix);
}

}  // namespace poqk::extractor
