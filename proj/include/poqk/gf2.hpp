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

#include <optional>
#include <vector>

#include "poqk/bits.hpp"
#include "poqk/qsim/ops.hpp"
#include "poqk/rng.hpp"

namespace poqk::gf2 {

/// Square GF(2) matrix, stored column-major: col[j] packs column j.
struct Gf2Matrix {
  int n = 0;
  std::vector<std::uint64_t> cols;

  static Gf2Matrix identity(int n);
  Bits matvec(const Bits& x) const;
  Gf2Matrix transpose() const;
  int rank() const;
  std::optional<Gf2Matrix> inverse() const;
  bool operator==(const Gf2Matrix& o) const = default;
};

/// Basis z_1..z_lambda of Z_2^lambda; column j of the matrix is z_{j+1}.
struct Gf2Basis {
  Gf2Matrix m;

  int lambda() const { return m.n; }
  Bits vector(int j) const { return Bits(m.cols[j], m.n); }
  /// W|x> = |x_1 z_1 + ... + x_lambda z_lambda>, i.e. the matvec.
  Bits combine(const Bits& coords) const { return m.matvec(coords); }
};

/// Row-reduced span of generators inside Z_2^lambda.
struct Subspace {
  int lambda = 0;
  std::vector<std::uint64_t> generators;  // row echelon, nonzero, independent

  int dim() const { return static_cast<int>(generators.size()); }
};

Subspace make_subspace(int lambda, const std::vector<Bits>& gens);
bool member(const Bits& v, const Subspace& s);
/// Orthogonal complement {y : y.x = 0 for all x in the span}.
Subspace complement(const Subspace& s);
/// All 2^dim elements (small spaces only).
std::vector<Bits> enumerate(const Subspace& s);

/// Uniform over invertible lambda x lambda GF(2) matrices, by rejection.
Gf2Basis random_invertible_basis(int lambda, Rng& rng);

/// Permutation unitary W with W|x> = |sum_i x_i z_i>.
qsim::DenseOperator w_unitary(const Gf2Basis& basis, const std::string& target);
qsim::DenseOperator w_unitary_inverse(const Gf2Basis& basis, const std::string& target);

/// Packs/unpacks a basis as lambda^2 oracle-output bits (column-major).
std::uint64_t encode_basis(const Gf2Basis& b);
Gf2Basis decode_basis(std::uint64_t bits, int lambda);

}  // namespace poqk::gf2
