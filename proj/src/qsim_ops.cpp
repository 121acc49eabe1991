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

#include "poqk/qsim/ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace poqk::qsim {

namespace {

/// Inserts a 0 bit at each of the (ascending) positions, spreading `r` over
/// the remaining positions. Used to enumerate basis indices with a fixed
/// value on a qubit subset.
std::int64_t expand_index(std::int64_t r, const std::vector<int>& sorted_positions) {
  for (int p : sorted_positions) {
    std::int64_t low = r & ((1LL << p) - 1);
    r = ((r >> p) << (p + 1)) | low;
  }
  return r;
}

std::int64_t scatter_bits(std::int64_t j, const std::vector<int>& qubits) {
  std::int64_t out = 0;
  for (size_t k = 0; k < qubits.size(); ++k)
    if ((j >> k) & 1) out |= 1LL << qubits[k];
  return out;
}

void check_targets(const StateVector& s, const Mat& u, const std::vector<int>& qubits) {
  int k = static_cast<int>(qubits.size());
  if (u.rows() != (1LL << k) || u.cols() != (1LL << k))
    throw std::invalid_argument("apply_dense: matrix dimension mismatch");
  for (int q : qubits)
    if (q < 0 || q >= s.num_qubits()) throw std::invalid_argument("apply_dense: bad qubit");
}

}  // namespace

int DenseOperator::width() const {
  int w = 0;
  while ((1LL << w) < matrix.rows()) ++w;
  if ((1LL << w) != matrix.rows() || matrix.rows() != matrix.cols())
    throw std::invalid_argument("DenseOperator: matrix is not square power-of-two");
  return w;
}

bool DenseOperator::is_unitary(double tol) const {
  Mat d = matrix.adjoint() * matrix - Mat::Identity(matrix.rows(), matrix.cols());
  return d.cwiseAbs().maxCoeff() < tol;
}

bool DenseOperator::is_projector(double tol) const {
  Mat d = matrix * matrix - matrix;
  return d.cwiseAbs().maxCoeff() < tol && (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() < tol;
}

void Povm::validate(double tol) const {
  if (elements.empty()) throw std::invalid_argument("Povm: empty");
  Mat sum = Mat::Zero(elements[0].rows(), elements[0].cols());
  for (const auto& e : elements) {
    if (e.rows() != sum.rows() || e.cols() != sum.cols())
      throw std::invalid_argument("Povm: ragged elements");
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("Povm: non-Hermitian element");
    Eigen::SelfAdjointEigenSolver<Mat> es(e);
    if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("Povm: element not PSD");
    sum += e;
  }
  if ((sum - Mat::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("Povm: incomplete");
}

void apply_dense(StateVector& s, const Mat& u, const std::vector<int>& qubits) {
  check_targets(s, u, qubits);
  int k = static_cast<int>(qubits.size());
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t blocks = s.dim() >> k;
  std::int64_t block_dim = 1LL << k;
  Vec& amps = s.amplitudes();
  // Precompute the scattered offsets once per call.
  std::vector<std::int64_t> offsets(block_dim);
  for (std::int64_t j = 0; j < block_dim; ++j) offsets[j] = scatter_bits(j, qubits);
  if (blocks == 1) {
    Vec in(block_dim);
    for (std::int64_t j = 0; j < block_dim; ++j) in[j] = amps[offsets[j]];
    Vec out = u * in;
    for (std::int64_t j = 0; j < block_dim; ++j) amps[offsets[j]] = out[j];
    return;
  }
  // Gather all blocks into columns and apply one GEMM; memory-bound loops
  // over big operators dominate otherwise.
  Mat in(block_dim, blocks);
  for (std::int64_t r = 0; r < blocks; ++r) {
    std::int64_t base = expand_index(r, sorted);
    for (std::int64_t j = 0; j < block_dim; ++j) in(j, r) = amps[base | offsets[j]];
  }
  Mat out = u * in;
  for (std::int64_t r = 0; r < blocks; ++r) {
    std::int64_t base = expand_index(r, sorted);
    for (std::int64_t j = 0; j < block_dim; ++j) amps[base | offsets[j]] = out(j, r);
  }
}

void apply_dense_controlled(StateVector& s, const Mat& u, const std::vector<int>& qubits,
                            const std::vector<int>& ctrls, std::uint64_t ctrl_value) {
  check_targets(s, u, qubits);
  int k = static_cast<int>(qubits.size());
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t blocks = s.dim() >> k;
  std::int64_t block_dim = 1LL << k;
  Vec& amps = s.amplitudes();
  std::vector<std::int64_t> offsets(block_dim);
  for (std::int64_t j = 0; j < block_dim; ++j) offsets[j] = scatter_bits(j, qubits);
  std::vector<std::int64_t> matched;
  for (std::int64_t r = 0; r < blocks; ++r) {
    std::int64_t base = expand_index(r, sorted);
    std::uint64_t cv = 0;
    for (size_t i = 0; i < ctrls.size(); ++i)
      cv |= (static_cast<std::uint64_t>(base >> ctrls[i]) & 1) << i;
    if (cv == ctrl_value) matched.push_back(base);
  }
  if (matched.empty()) return;
  Mat in(block_dim, static_cast<std::int64_t>(matched.size()));
  for (size_t r = 0; r < matched.size(); ++r)
    for (std::int64_t j = 0; j < block_dim; ++j)
      in(j, static_cast<std::int64_t>(r)) = amps[matched[r] | offsets[j]];
  Mat out = u * in;
  for (size_t r = 0; r < matched.size(); ++r)
    for (std::int64_t j = 0; j < block_dim; ++j)
      amps[matched[r] | offsets[j]] = out(j, static_cast<std::int64_t>(r));
}

void apply_x(StateVector& s, int qubit) {
  Vec& a = s.amplitudes();
  std::int64_t bit = 1LL << qubit;
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if (!(i & bit)) std::swap(a[i], a[i | bit]);
}

void apply_z(StateVector& s, int qubit) {
  Vec& a = s.amplitudes();
  std::int64_t bit = 1LL << qubit;
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if (i & bit) a[i] = -a[i];
}

void apply_h(StateVector& s, int qubit) {
  Vec& a = s.amplitudes();
  std::int64_t bit = 1LL << qubit;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if (!(i & bit)) {
      cx lo = a[i], hi = a[i | bit];
      a[i] = (lo + hi) * inv_sqrt2;
      a[i | bit] = (lo - hi) * inv_sqrt2;
    }
}

void apply_cnot(StateVector& s, int control, int target) {
  Vec& a = s.amplitudes();
  std::int64_t cbit = 1LL << control, tbit = 1LL << target;
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
}

void apply_cz(StateVector& s, int qa, int qb) {
  Vec& a = s.amplitudes();
  std::int64_t ma = 1LL << qa, mb = 1LL << qb;
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if ((i & ma) && (i & mb)) a[i] = -a[i];
}

void apply_ch(StateVector& s, int control, int target) {
  Vec& a = s.amplitudes();
  std::int64_t cbit = 1LL << control, tbit = 1LL << target;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if ((i & cbit) && !(i & tbit)) {
      cx lo = a[i], hi = a[i | tbit];
      a[i] = (lo + hi) * inv_sqrt2;
      a[i | tbit] = (lo - hi) * inv_sqrt2;
    }
}

void apply_x_mask(StateVector& s, const std::vector<int>& qubits, const Bits& mask) {
  if (static_cast<int>(qubits.size()) != mask.width)
    throw std::invalid_argument("apply_x_mask: width mismatch");
  std::int64_t flip = 0;
  for (int i = 0; i < mask.width; ++i)
    if (mask.bit(i)) flip |= 1LL << qubits[i];
  if (!flip) return;
  Vec& a = s.amplitudes();
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if (i < (i ^ flip)) std::swap(a[i], a[i ^ flip]);
}

void apply_z_mask(StateVector& s, const std::vector<int>& qubits, const Bits& mask) {
  if (static_cast<int>(qubits.size()) != mask.width)
    throw std::invalid_argument("apply_z_mask: width mismatch");
  std::int64_t zmask = 0;
  for (int i = 0; i < mask.width; ++i)
    if (mask.bit(i)) zmask |= 1LL << qubits[i];
  if (!zmask) return;
  Vec& a = s.amplitudes();
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if (std::popcount(static_cast<std::uint64_t>(i & zmask)) & 1) a[i] = -a[i];
}

void apply_h_mask(StateVector& s, const std::vector<int>& qubits, const Bits& mask) {
  if (static_cast<int>(qubits.size()) != mask.width)
    throw std::invalid_argument("apply_h_mask: width mismatch");
  for (int i = 0; i < mask.width; ++i)
    if (mask.bit(i)) apply_h(s, qubits[i]);
}

void apply_gate(StateVector& s, const DenseOperator& op) {
  if (!op.is_unitary()) throw std::invalid_argument("apply_gate: non-unitary operator");
  apply_dense(s, op.matrix, s.qubits_of(op.target));
}

void apply_pauli_mask(StateVector& s, const PauliMask& p, const std::string& target) {
  auto q = s.qubits_of(target);
  if (p.axis == PauliAxis::X)
    apply_x_mask(s, q, p.mask);
  else
    apply_z_mask(s, q, p.mask);
}

void hadamard_layer(StateVector& s, const Bits& mask, const std::string& target) {
  apply_h_mask(s, s.qubits_of(target), mask);
}

std::vector<std::pair<Bits, double>> outcome_distribution(const StateVector& s,
                                                          const std::string& target,
                                                          double floor) {
  const Register& r = s.reg(target);
  std::vector<double> probs(1LL << r.width, 0.0);
  const Vec& a = s.amplitudes();
  for (std::int64_t i = 0; i < s.dim(); ++i) {
    double p = std::norm(a[i]);
    if (p > 0.0) probs[(i >> r.offset) & ((1LL << r.width) - 1)] += p;
  }
  std::vector<std::pair<Bits, double>> out;
  for (std::int64_t v = 0; v < static_cast<std::int64_t>(probs.size()); ++v)
    if (probs[v] > floor) out.emplace_back(Bits(static_cast<std::uint64_t>(v), r.width), probs[v]);
  return out;
}

double project_register(StateVector& s, const std::string& target, const Bits& value) {
  const Register& r = s.reg(target);
  if (value.width != r.width) throw std::invalid_argument("project_register: width mismatch");
  Vec& a = s.amplitudes();
  double p = 0.0;
  for (std::int64_t i = 0; i < s.dim(); ++i) {
    std::uint64_t v = (static_cast<std::uint64_t>(i) >> r.offset) & Bits::mask_of(r.width);
    if (v == value.word)
      p += std::norm(a[i]);
    else
      a[i] = 0.0;
  }
  if (p > 1e-300) a /= std::sqrt(p);
  return p;
}

std::pair<int, double> measure_membership(StateVector& s, const std::string& target,
                                          const std::vector<Bits>& allowed, Rng& rng) {
  const Register& r = s.reg(target);
  std::vector<bool> in_set(1LL << r.width, false);
  for (const Bits& b : allowed) {
    if (b.width != r.width) throw std::invalid_argument("measure_membership: width mismatch");
    in_set[b.word] = true;
  }
  Vec& a = s.amplitudes();
  double p_in = 0.0;
  for (std::int64_t i = 0; i < s.dim(); ++i) {
    std::uint64_t v = (static_cast<std::uint64_t>(i) >> r.offset) & Bits::mask_of(r.width);
    if (in_set[v]) p_in += std::norm(a[i]);
  }
  int inside = rng.real() < p_in ? 1 : 0;
  double p = inside ? p_in : 1.0 - p_in;
  for (std::int64_t i = 0; i < s.dim(); ++i) {
    std::uint64_t v = (static_cast<std::uint64_t>(i) >> r.offset) & Bits::mask_of(r.width);
    if (in_set[v] != static_cast<bool>(inside)) a[i] = 0.0;
  }
  if (p > 1e-300) a /= std::sqrt(p);
  return {inside, p};
}

Bits measure_computational(StateVector& s, const std::string& target, Rng& rng) {
  auto dist = outcome_distribution(s, target, 0.0);
  double draw = rng.real();
  double acc = 0.0;
  for (const auto& [bits, p] : dist) {
    acc += p;
    if (draw < acc) {
      project_register(s, target, bits);
      return bits;
    }
  }
  // Float underflow at the tail: take the last outcome.
  project_register(s, target, dist.back().first);
  return dist.back().first;
}

StateVector make_epr_pairs(int k, const std::string& a_name, const std::string& b_name) {
  StateVector s = StateVector::vacuum({{a_name, k}, {b_name, k}});
  Vec& a = s.amplitudes();
  a[0] = 0.0;
  double amp = std::pow(2.0, -k / 2.0);
  for (std::int64_t x = 0; x < (1LL << k); ++x) a[x | (x << k)] = amp;
  return s;
}

std::pair<int, double> povm_measure(StateVector& s, const Povm& povm, Rng& rng) {
  povm.validate();
  auto qubits = s.qubits_of(povm.target);
  std::vector<double> probs(povm.elements.size());
  for (size_t k = 0; k < povm.elements.size(); ++k)
    probs[k] = expectation(s, povm.elements[k], qubits).real();
  double draw = rng.real();
  double acc = 0.0;
  size_t pick = povm.elements.size() - 1;
  for (size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (draw < acc) {
      pick = k;
      break;
    }
  }
  const Mat& e = povm.elements[pick];
  // E^{1/2} update rule; projective elements are their own square root.
  Mat root = DenseOperator{e, povm.target}.is_projector() ? e : psd_sqrt(e);
  apply_dense(s, root, qubits);
  s.normalize();
  return {static_cast<int>(pick), probs[pick]};
}

double fidelity_qubits(const StateVector& s, const Vec& target_pure,
                       const std::vector<int>& qubits) {
  int w = static_cast<int>(qubits.size());
  if (target_pure.size() != (1LL << w))
    throw std::invalid_argument("fidelity: target dimension mismatch");
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t blocks = s.dim() >> w;
  const Vec& a = s.amplitudes();
  double total = 0.0;
  for (std::int64_t rest = 0; rest < blocks; ++rest) {
    std::int64_t base = expand_index(rest, sorted);
    cx ip = 0.0;
    for (std::int64_t j = 0; j < target_pure.size(); ++j)
      ip += std::conj(target_pure[j]) * a[base | scatter_bits(j, qubits)];
    total += std::norm(ip);
  }
  return total;
}

double fidelity(const StateVector& s, const Vec& target_pure, const std::string& on) {
  return fidelity_qubits(s, target_pure, s.qubits_of(on));
}

double fidelity(const StateVector& s, const Vec& target_pure,
                const std::vector<std::string>& on) {
  return fidelity_qubits(s, target_pure, s.qubits_of(on));
}

Mat reduced_density(const StateVector& s, const std::vector<std::string>& keep) {
  std::vector<int> qubits = s.qubits_of(keep);
  int w = static_cast<int>(qubits.size());
  if (w > 13) throw std::invalid_argument("reduced_density: kept registers too wide");
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t blocks = s.dim() >> w;
  std::int64_t d = 1LL << w;
  Mat rho = Mat::Zero(d, d);
  Vec slice(d);
  const Vec& a = s.amplitudes();
  for (std::int64_t rest = 0; rest < blocks; ++rest) {
    std::int64_t base = expand_index(rest, sorted);
    for (std::int64_t j = 0; j < d; ++j) slice[j] = a[base | scatter_bits(j, qubits)];
    rho.noalias() += slice * slice.adjoint();
  }
  return rho;
}

double purity(const Mat& rho) { return (rho * rho).trace().real(); }

cx expectation(const StateVector& s, const Mat& u, const std::vector<int>& qubits) {
  StateVector tmp = s;
  apply_dense(tmp, u, qubits);
  return s.inner(tmp);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Mat pauli_y() {
  Mat m(2, 2);
  m << cx(0, 0), cx(0, -1), cx(0, 1), cx(0, 0);
  return m;
}
Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
Mat hadamard() {
  Mat m(2, 2);
  double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}

Mat pauli_mask_matrix(PauliAxis axis, const Bits& mask) {
  Mat single = axis == PauliAxis::X ? pauli_x() : pauli_z();
  Mat out = Mat::Identity(1, 1);
  // Qubit i is the i-th tensor factor from the least significant side.
  for (int i = 0; i < mask.width; ++i)
    out = kron(mask.bit(i) ? single : Mat::Identity(2, 2), out);
  return out;
}

Mat hadamard_mask_matrix(const Bits& mask) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < mask.width; ++i)
    out = kron(mask.bit(i) ? hadamard() : Mat::Identity(2, 2), out);
  return out;
}

Mat psd_sqrt(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

Mat isometry_completion(const Mat& iso) {
  std::int64_t d = iso.rows();
  std::int64_t k = iso.cols();
  Mat gram = iso.adjoint() * iso;
  if ((gram - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("isometry_completion: columns not orthonormal");
  Mat u = Mat::Zero(d, d);
  u.leftCols(k) = iso;
  std::int64_t filled = k;
  for (std::int64_t e = 0; e < d && filled < d; ++e) {
    Vec cand = Vec::Zero(d);
    cand[e] = 1.0;
    for (std::int64_t j = 0; j < filled; ++j) cand -= u.col(j).dot(cand) * u.col(j);
    double n = cand.norm();
    if (n > 1e-8) u.col(filled++) = cand / n;
  }
  if (filled != d) throw std::logic_error("isometry_completion: completion failed");
  return u;
}

Mat state_prep_unitary(const Vec& target) {
  if (std::abs(target.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("state_prep_unitary: target not normalized");
  return isometry_completion(Mat(target));
}

std::string StateVector::dump_amplitudes_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::int64_t i = 0; i < dim(); ++i) {
    if (i) os << ",";
    os << "[" << amps_[i].real() << "," << amps_[i].imag() << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace poqk::qsim
