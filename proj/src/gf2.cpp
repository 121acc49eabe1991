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

#include "poqk/gf2.hpp"

#include <algorithm>

namespace poqk::gf2 {

namespace {

/// Row echelon form of a list of packed row vectors; returns pivot rows.
std::vector<std::uint64_t> echelon(std::vector<std::uint64_t> rows, int lambda) {
  std::vector<std::uint64_t> out;
  for (int bit = lambda - 1; bit >= 0; --bit) {
    std::uint64_t mask = 1ULL << bit;
    auto it = std::find_if(rows.begin(), rows.end(), [&](std::uint64_t r) { return r & mask; });
    if (it == rows.end()) continue;
    std::uint64_t pivot = *it;
    rows.erase(it);
    for (auto& r : rows)
      if (r & mask) r ^= pivot;
    for (auto& r : out)
      if (r & mask) r ^= pivot;
    out.push_back(pivot);
  }
  return out;
}

}  // namespace

Gf2Matrix Gf2Matrix::identity(int n) {
  Gf2Matrix m;
  m.n = n;
  m.cols.resize(n);
  for (int j = 0; j < n; ++j) m.cols[j] = 1ULL << j;
  return m;
}

Bits Gf2Matrix::matvec(const Bits& x) const {
  if (x.width != n) throw std::invalid_argument("Gf2Matrix::matvec: width mismatch");
  std::uint64_t acc = 0;
  for (int j = 0; j < n; ++j)
    if (x.bit(j)) acc ^= cols[j];
  return Bits(acc, n);
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t;
  t.n = n;
  t.cols.assign(n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if ((cols[j] >> i) & 1) t.cols[i] |= 1ULL << j;
  return t;
}

int Gf2Matrix::rank() const {
  auto rows = echelon(cols, n);  // rank(A) = rank(A^T)
  return static_cast<int>(rows.size());
}

std::optional<Gf2Matrix> Gf2Matrix::inverse() const {
  // Gauss-Jordan on [A | I] with columns treated as vectors of A^T; work on
  // rows of the actual matrix instead for clarity.
  Gf2Matrix t = transpose();  // rows of the matrix, packed
  std::vector<std::uint64_t> a = t.cols;
  std::vector<std::uint64_t> inv(n);
  for (int i = 0; i < n; ++i) inv[i] = 1ULL << i;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if ((a[r] >> col) & 1) {
        pivot = r;
        break;
      }
    if (pivot < 0) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < n; ++r)
      if (r != col && ((a[r] >> col) & 1)) {
        a[r] ^= a[col];
        inv[r] ^= inv[col];
      }
  }
  // inv now holds rows of A^{-1}; convert back to column-major.
  Gf2Matrix result;
  result.n = n;
  result.cols.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((inv[i] >> j) & 1) result.cols[j] |= 1ULL << i;
  return result;
}

Subspace make_subspace(int lambda, const std::vector<Bits>& gens) {
  std::vector<std::uint64_t> rows;
  for (const auto& g : gens) {
    if (g.width != lambda) throw std::invalid_argument("make_subspace: width mismatch");
    rows.push_back(g.word);
  }
  Subspace s;
  s.lambda = lambda;
  s.generators = echelon(rows, lambda);
  return s;
}

bool member(const Bits& v, const Subspace& s) {
  if (v.width != s.lambda) throw std::invalid_argument("member: width mismatch");
  std::uint64_t x = v.word;
  for (std::uint64_t g : s.generators) {
    std::uint64_t lead = std::uint64_t(1) << (63 - std::countl_zero(g));
    if (x & lead) x ^= g;
  }
  return x == 0;
}

Subspace complement(const Subspace& s) {
  // Nullspace of the generator matrix: solve G y = 0 for all generators G.
  int n = s.lambda;
  std::vector<std::uint64_t> rows = s.generators;
  std::vector<int> pivot_col(rows.size());
  std::vector<bool> is_pivot(n, false);
  // generators are already in echelon form with distinct leading bits
  for (size_t i = 0; i < rows.size(); ++i) {
    pivot_col[i] = 63 - std::countl_zero(rows[i]);
    is_pivot[pivot_col[i]] = true;
  }
  std::vector<Bits> basis;
  for (int free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::uint64_t y = 1ULL << free_col;
    for (size_t i = 0; i < rows.size(); ++i) {
      // back-substitute: pivot variable = parity of free part of the row
      if (std::popcount(rows[i] & y) & 1) y ^= 1ULL << pivot_col[i];
    }
    basis.emplace_back(y, n);
  }
  return make_subspace(n, basis);
}

std::vector<Bits> enumerate(const Subspace& s) {
  if (s.dim() > 20) throw std::invalid_argument("enumerate: subspace too large");
  std::vector<Bits> out;
  out.reserve(1ULL << s.dim());
  for (std::uint64_t c = 0; c < (1ULL << s.dim()); ++c) {
    std::uint64_t v = 0;
    for (int j = 0; j < s.dim(); ++j)
      if ((c >> j) & 1) v ^= s.generators[j];
    out.emplace_back(v, s.lambda);
  }
  return out;
}

Gf2Basis random_invertible_basis(int lambda, Rng& rng) {
  while (true) {
    Gf2Matrix m;
    m.n = lambda;
    m.cols.resize(lambda);
    for (int j = 0; j < lambda; ++j) m.cols[j] = rng.bits(lambda).word;
    if (m.rank() == lambda) return Gf2Basis{m};
  }
}

qsim::DenseOperator w_unitary(const Gf2Basis& basis, const std::string& target) {
  int n = basis.lambda();
  if (basis.m.rank() != n) throw std::invalid_argument("w_unitary: dependent basis");
  qsim::Mat w = qsim::Mat::Zero(1LL << n, 1LL << n);
  for (std::int64_t x = 0; x < (1LL << n); ++x) {
    Bits image = basis.combine(Bits(static_cast<std::uint64_t>(x), n));
    w(static_cast<std::int64_t>(image.word), x) = 1.0;
  }
  return {w, target};
}

qsim::DenseOperator w_unitary_inverse(const Gf2Basis& basis, const std::string& target) {
  auto inv = basis.m.inverse();
  if (!inv) throw std::invalid_argument("w_unitary_inverse: dependent basis");
  return w_unitary(Gf2Basis{*inv}, target);
}

std::uint64_t encode_basis(const Gf2Basis& b) {
  int n = b.lambda();
  if (n * n > 64) throw std::invalid_argument("encode_basis: too wide");
  std::uint64_t out = 0;
  for (int j = 0; j < n; ++j) out |= b.m.cols[j] << (j * n);
  return out;
}

Gf2Basis decode_basis(std::uint64_t bits, int lambda) {
  Gf2Matrix m;
  m.n = lambda;
  m.cols.resize(lambda);
  for (int j = 0; j < lambda; ++j) m.cols[j] = (bits >> (j * lambda)) & Bits::mask_of(lambda);
  return Gf2Basis{m};
}

}  // namespace poqk::gf2
