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

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "poqk/bits.hpp"

namespace poqk::qsim {

using cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-8;
inline constexpr int kMaxQubits = 26;

struct Register {
  std::string name;
  int offset = 0;
  int width = 0;
};

/// Dense statevector over named, disjoint qubit registers.
///
/// Qubit q corresponds to bit q of the amplitude index (bit 0 = least
/// significant). Registers are laid out register-major in creation order and
/// are little-endian internally: bit i of a register named R lives at global
/// qubit reg(R).offset + i. A value type: copying copies amplitudes.
class StateVector {
 public:
  StateVector() = default;

  /// |0...0> over the given layout.
  static StateVector vacuum(const std::vector<std::pair<std::string, int>>& layout) {
    StateVector s;
    int off = 0;
    for (const auto& [name, w] : layout) {
      s.regs_.push_back({name, off, w});
      off += w;
    }
    s.check_qubit_budget(off);
    s.amps_ = Vec::Zero(1LL << off);
    s.amps_[0] = 1.0;
    return s;
  }

  int num_qubits() const {
    int n = 0;
    for (const auto& r : regs_) n += r.width;
    return n;
  }
  std::int64_t dim() const { return amps_.size(); }
  const Vec& amplitudes() const { return amps_; }
  Vec& amplitudes() { return amps_; }
  const std::vector<Register>& registers() const { return regs_; }

  bool has_register(const std::string& name) const {
    for (const auto& r : regs_)
      if (r.name == name) return true;
    return false;
  }
  const Register& reg(const std::string& name) const {
    for (const auto& r : regs_)
      if (r.name == name) return r;
    throw std::invalid_argument("StateVector: no register named " + name);
  }
  /// Global qubit indices of a register, in little-endian register order.
  std::vector<int> qubits_of(const std::string& name) const {
    const Register& r = reg(name);
    std::vector<int> q(r.width);
    for (int i = 0; i < r.width; ++i) q[i] = r.offset + i;
    return q;
  }
  /// Concatenated qubit indices of several registers.
  std::vector<int> qubits_of(const std::vector<std::string>& names) const {
    std::vector<int> q;
    for (const auto& n : names) {
      auto qs = qubits_of(n);
      q.insert(q.end(), qs.begin(), qs.end());
    }
    return q;
  }

  /// Appends a fresh register initialized to |0...0> at the high end.
  void add_register(const std::string& name, int width) {
    if (has_register(name))
      throw std::invalid_argument("StateVector: duplicate register " + name);
    int n = num_qubits();
    check_qubit_budget(n + width);
    regs_.push_back({name, n, width});
    Vec bigger = Vec::Zero(1LL << (n + width));
    bigger.head(amps_.size()) = amps_;
    amps_ = std::move(bigger);
  }

  void rename_register(const std::string& from, const std::string& to) {
    for (auto& r : regs_)
      if (r.name == from) {
        r.name = to;
        return;
      }
    throw std::invalid_argument("StateVector: no register named " + from);
  }

  /// Tensor product; `other`'s registers land above this state's.
  StateVector tensor(const StateVector& other) const {
    StateVector out;
    out.regs_ = regs_;
    int n = num_qubits();
    for (const auto& r : other.regs_) out.regs_.push_back({r.name, r.offset + n, r.width});
    out.check_qubit_budget(n + other.num_qubits());
    out.amps_ = Vec::Zero(dim() * other.dim());
    for (std::int64_t j = 0; j < other.dim(); ++j)
      if (other.amps_[j] != cx(0.0, 0.0))
        out.amps_.segment(j * dim(), dim()) = other.amps_[j] * amps_;
    return out;
  }

  double norm() const { return amps_.norm(); }
  void normalize() { amps_ /= amps_.norm(); }

  /// Extracts the register value encoded in a basis-state index.
  Bits value_in(std::int64_t index, const Register& r) const {
    return Bits((static_cast<std::uint64_t>(index) >> r.offset) & Bits::mask_of(r.width),
                r.width);
  }

  cx inner(const StateVector& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("StateVector::inner: dim mismatch");
    return amps_.dot(other.amps_);  // Eigen dot conjugates the left argument
  }

  /// Debug dump: JSON array of [re, im] pairs in layout order.
  std::string dump_amplitudes_json() const;

 private:
  void check_qubit_budget(int n) const {
    if (n > kMaxQubits)
      throw std::invalid_argument("StateVector: qubit budget exceeded (" + std::to_string(n) +
                                  " > " + std::to_string(kMaxQubits) + ")");
  }

  Vec amps_;
  std::vector<Register> regs_;
};

}  // namespace poqk::qsim
