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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "poqk/gf2.hpp"

using namespace poqk;
using namespace poqk::gf2;

namespace {

/// Exhaustive span oracle: v in span(gens) iff some subset XOR equals v.
bool brute_member(const Bits& v, const std::vector<Bits>& gens) {
  size_t k = gens.size();
  for (std::uint64_t c = 0; c < (1ULL << k); ++c) {
    std::uint64_t acc = 0;
    for (size_t j = 0; j < k; ++j)
      if ((c >> j) & 1) acc ^= gens[j].word;
    if (acc == v.word) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("random_invertible_basis: lambda=1 is always {1}") {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    Gf2Basis b = random_invertible_basis(1, rng);
    CHECK(b.m.cols[0] == 1);
  }
}

TEST_CASE("random_invertible_basis: uniform over GL(2,2)") {
  Rng rng(42);
  std::map<std::uint64_t, int> counts;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    Gf2Basis b = random_invertible_basis(2, rng);
    counts[encode_basis(b)]++;
  }
  CHECK(counts.size() == 6);  // |GL(2,2)| = 6
  for (const auto& [enc, n] : counts) {
    double freq = static_cast<double>(n) / samples;
    CHECK(std::abs(freq - 1.0 / 6.0) < 0.01);
  }
}

TEST_CASE("random_invertible_basis: full rank always") {
  Rng rng(7);
  for (int lambda = 1; lambda <= 6; ++lambda)
    for (int i = 0; i < 50; ++i) CHECK(random_invertible_basis(lambda, rng).m.rank() == lambda);
}

TEST_CASE("member basics") {
  Subspace s = make_subspace(4, {Bits(0b0011, 4), Bits(0b0101, 4)});
  CHECK(member(Bits::zeros(4), s));
  CHECK(member(Bits(0b0011, 4), s));
  CHECK(member(Bits(0b0101, 4), s));
  CHECK(member(Bits(0b0110, 4), s));
  CHECK(!member(Bits(0b0001, 4), s));
}

TEST_CASE("member agrees with exhaustive span oracle at lambda=4") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Bits> gens;
    int k = 1 + static_cast<int>(rng.below(3));
    for (int j = 0; j < k; ++j) gens.push_back(rng.bits(4));
    Subspace s = make_subspace(4, gens);
    for (std::uint64_t v = 0; v < 16; ++v)
      CHECK(member(Bits(v, 4), s) == brute_member(Bits(v, 4), gens));
  }
}

TEST_CASE("member linearity property") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int lambda = 2 + static_cast<int>(rng.below(5));
    std::vector<Bits> gens;
    for (int j = 0; j < lambda / 2 + 1; ++j) gens.push_back(rng.bits(lambda));
    Subspace s = make_subspace(lambda, gens);
    auto elems = enumerate(s);
    for (size_t i = 0; i < elems.size(); ++i)
      for (size_t j = 0; j < elems.size(); ++j) CHECK(member(elems[i] ^ elems[j], s));
  }
}

TEST_CASE("complement") {
  // complement of the full space is {0}
  Subspace full = make_subspace(3, {Bits(1, 3), Bits(2, 3), Bits(4, 3)});
  Subspace c = complement(full);
  CHECK(c.dim() == 0);

  // complement twice returns the original span
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    int lambda = 2 + static_cast<int>(rng.below(5));
    std::vector<Bits> gens;
    for (int j = 0; j < 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(lambda))); ++j)
      gens.push_back(rng.bits(lambda));
    Subspace s = make_subspace(lambda, gens);
    Subspace cc = complement(complement(s));
    CHECK(cc.generators == s.generators);
    CHECK(s.dim() + complement(s).dim() == lambda);
  }

  // lambda=4, dim 2: every pair (a in A, y in A-perp) is orthogonal
  Subspace s = make_subspace(4, {Bits(0b1011, 4), Bits(0b0110, 4)});
  Subspace sp = complement(s);
  CHECK(s.dim() == 2);
  CHECK(sp.dim() == 2);
  for (const Bits& a : enumerate(s))
    for (const Bits& y : enumerate(sp)) CHECK(a.dot(y) == 0);
}

TEST_CASE("w_unitary") {
  // standard basis -> identity
  Gf2Basis std_basis{Gf2Matrix::identity(3)};
  auto w = w_unitary(std_basis, "q");
  CHECK((w.matrix - qsim::Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);

  // lambda=2, z_1=11, z_2=01 (bit i of the packed column is coordinate i)
  Gf2Matrix m;
  m.n = 2;
  m.cols = {0b11, 0b10};
  Gf2Basis b{m};
  auto w2 = w_unitary(b, "q").matrix;
  // |10> in bitstring-notation = index 1 (bit 0 set) -> |11> = index 3
  CHECK(w2(3, 1) == qsim::cx(1.0, 0.0));
  // |01> = index 2 -> |01> ... z_2 = (0,1) = index 2
  CHECK(w2(2, 2) == qsim::cx(1.0, 0.0));
  // |11> = index 3 -> z_1+z_2 = (1,0) = index 1
  CHECK(w2(1, 3) == qsim::cx(1.0, 0.0));

  // permutation: real 0/1 entries, W^T W = I
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Gf2Basis rb = random_invertible_basis(3, rng);
    qsim::Mat wm = w_unitary(rb, "q").matrix;
    CHECK((wm.transpose() * wm - qsim::Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);
    for (Eigen::Index i = 0; i < wm.rows(); ++i)
      for (Eigen::Index j = 0; j < wm.cols(); ++j) {
        double re = wm(i, j).real();
        CHECK((re == 0.0 || re == 1.0));
        CHECK(wm(i, j).imag() == 0.0);
      }
  }

  Gf2Matrix dep;
  dep.n = 2;
  dep.cols = {0b11, 0b11};
  CHECK_THROWS(w_unitary(Gf2Basis{dep}, "q"));
}

TEST_CASE("w_unitary inverse composes to identity up to lambda=6") {
  Rng rng(21);
  for (int lambda = 1; lambda <= 6; ++lambda) {
    Gf2Basis b = random_invertible_basis(lambda, rng);
    qsim::Mat w = w_unitary(b, "q").matrix;
    qsim::Mat wi = w_unitary_inverse(b, "q").matrix;
    CHECK((w * wi - qsim::Mat::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("theta-masked subsets of a basis stay independent") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    int lambda = 4;
    Gf2Basis b = random_invertible_basis(lambda, rng);
    // theta of weight lambda/2
    Bits theta(0b0101, 4);
    std::vector<Bits> sub;
    for (int j = 0; j < lambda; ++j)
      if (theta.bit(j)) sub.push_back(b.vector(j));
    CHECK(make_subspace(lambda, sub).dim() == lambda / 2);
  }
}

TEST_CASE("encode/decode basis round trip") {
  Rng rng(23);
  for (int lambda = 1; lambda <= 6; ++lambda)
    for (int i = 0; i < 10; ++i) {
      Gf2Basis b = random_invertible_basis(lambda, rng);
      CHECK(decode_basis(encode_basis(b), lambda).m == b.m);
    }
}

TEST_CASE("matrix inverse and transpose") {
  Rng rng(29);
  for (int lambda = 1; lambda <= 6; ++lambda)
    for (int i = 0; i < 20; ++i) {
      Gf2Basis b = random_invertible_basis(lambda, rng);
      auto inv = b.m.inverse();
      REQUIRE(inv.has_value());
      // M * M^{-1} = I checked through matvec on all basis vectors
      for (int j = 0; j < lambda; ++j) {
        Bits e(1ULL << j, lambda);
        CHECK(b.m.matvec(inv->matvec(e)) == e);
      }
      // transpose flips the dot pairing: (Mx).y = x.(M^T y)
      Bits x = rng.bits(lambda), y = rng.bits(lambda);
      CHECK(b.m.matvec(x).dot(y) == x.dot(b.m.transpose().matvec(y)));
    }
}
