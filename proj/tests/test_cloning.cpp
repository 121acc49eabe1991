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

#include "poqk/cloning.hpp"

using namespace poqk;
using namespace poqk::cloning;

namespace {

/// Brute-force per-qubit joint-pass value for a channel: both clones must
/// return the encoded bit when measured in the encoding basis.
double brute_force_joint_pass(const CloneChannel& ch) {
  double total = 0.0;
  for (int theta = 0; theta < 2; ++theta)
    for (int v = 0; v < 2; ++v) {
      qsim::Vec s(2);
      double r = 1.0 / std::sqrt(2.0);
      if (theta == 0)
        s << (v == 0 ? 1 : 0), (v == 0 ? 0 : 1);
      else
        s << r, (v == 0 ? r : -r);
      // Lambda(|s><s|) via Kraus, then project both qubits onto s
      qsim::Mat rho_out = qsim::Mat::Zero(4, 4);
      for (const auto& k : ch.kraus()) rho_out += (k * s) * (k * s).adjoint();
      qsim::Vec target(4);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) target[a | (b << 1)] = s[a] * s[b];
      total += (target.adjoint() * rho_out * target).real()(0, 0) / 4.0;
    }
  return total;
}

}  // namespace

TEST_CASE("measure-and-resend channel: TP, value 5/8 by brute force") {
  CloneChannel ch = measure_resend_cloner();
  CHECK(ch.tp_defect() < 1e-12);
  CHECK(ch.psd_defect() < 1e-12);
  CHECK(per_qubit_joint_pass(ch) == doctest::Approx(5.0 / 8.0));
  CHECK(brute_force_joint_pass(ch) == doctest::Approx(5.0 / 8.0));
}

TEST_CASE("optimal cloner fixture: value 0.75 within 1e-3, trace preserving") {
  CloneChannel ch = load_optimal_cloner();
  CHECK(ch.tp_defect() < 1e-8);
  CHECK(ch.psd_defect() < 1e-8);
  CHECK(std::abs(per_qubit_joint_pass(ch) - 0.75) < 1e-3);
  CHECK(std::abs(ch.achieved_value - per_qubit_joint_pass(ch)) < 1e-6);
  // Kraus reconstruction reproduces the value
  CHECK(brute_force_joint_pass(ch) == doctest::Approx(per_qubit_joint_pass(ch)));
}

TEST_CASE("channel application matches the Choi prediction on a bill") {
  // single-qubit bill |+>: joint pass of the two copies under Ver
  CloneChannel ch = measure_resend_cloner();
  qsim::StateVector s = qsim::StateVector::vacuum({{"bill", 1}});
  qsim::apply_h(s, 0);  // |+> = money state for v=0, theta=1
  apply_clone_channel(s, ch, "bill", "copy", "env");
  qsim::Vec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  // Pr[both clones pass] = <++|Lambda(|+><+|)|++> = 1/4 for measure-resend
  qsim::Vec plusplus(4);
  plusplus << 0.5, 0.5, 0.5, 0.5;
  double joint = qsim::fidelity(s, plusplus, std::vector<std::string>{"bill", "copy"});
  CHECK(joint == doctest::Approx(0.25));
}

TEST_CASE("no-cloning game: honest-on-two-copies sanity fixture wins always") {
  GameRow row = run_no_cloning_game(2, CloningStrategy::honest_two_bills(), 200, 11);
  CHECK(row.win_rate == doctest::Approx(1.0));
}

TEST_CASE("no-cloning game: trivial split win rate matches brute force") {
  // B submits |0...0>: its verification passes with probability
  // E_{v,theta} |<0|$_{v,theta}>|^2, computed here exhaustively; A passes
  // always with the genuine bill.
  int lambda = 3;
  double expected = 0.0;
  for (std::uint64_t vv = 0; vv < (1ULL << lambda); ++vv)
    for (std::uint64_t tt = 0; tt < (1ULL << lambda); ++tt) {
      qsim::Vec money = wiesner::money_vector({Bits(vv, lambda), Bits(tt, lambda)});
      expected += std::norm(money[0]) / std::pow(2.0, 2 * lambda);
    }
  CHECK(expected == doctest::Approx(std::pow(0.5, lambda)));
  GameRow row = run_no_cloning_game(lambda, CloningStrategy::trivial_split(), 20000, 17);
  CHECK(row.ci_lo <= expected);
  CHECK(expected <= row.ci_hi);
}

TEST_CASE("no-cloning game: measure-and-resend hits (5/8)^lambda at lambda=2") {
  double expected = std::pow(5.0 / 8.0, 2);
  GameRow row = run_no_cloning_game(
      2, CloningStrategy::per_qubit(measure_resend_cloner(), "measure_resend"), 10000, 23);
  double sigma = std::sqrt(expected * (1 - expected) / row.trials);
  CHECK(std::abs(row.win_rate - expected) < 3 * sigma + 1e-9);
}

TEST_CASE("no-cloning game: the optimal cloner hits (3/4)^lambda at lambda=2") {
  double expected = std::pow(0.75, 2);
  GameRow row = run_no_cloning_game(
      2, CloningStrategy::per_qubit(load_optimal_cloner(), "optimal"), 10000, 29);
  double sigma = std::sqrt(expected * (1 - expected) / row.trials);
  CHECK(std::abs(row.win_rate - expected) < 3 * sigma + 1e-9);
  CHECK(row.bound == doctest::Approx(expected));
}

TEST_CASE("cloning guardrail: implemented strategies stay below (3/4)^lambda + 3 sigma") {
  for (int lambda : {2, 3}) {
    double bound = std::pow(0.75, lambda);
    for (const auto& strategy :
         {CloningStrategy::trivial_split(),
          CloningStrategy::per_qubit(measure_resend_cloner(), "measure_resend"),
          CloningStrategy::per_qubit(load_optimal_cloner(), "optimal")}) {
      GameRow row = run_no_cloning_game(lambda, strategy, 4000, 31 + lambda);
      double sigma = std::sqrt(bound * (1 - bound) / row.trials);
      CHECK(row.win_rate <= bound + 3 * sigma);
    }
  }
}

TEST_CASE("nondestructive detector: honest prover is destructive at lambda=1") {
  // generic bill: v=0, theta=1 (|+>); the standard-basis challenge collapses it
  qsim::StateVector init = qsim::StateVector::vacuum({{"W", 1}, {"N", 2}});
  qsim::apply_h(init, 0);
  auto prover = wiesner::honest_prover(1, "W");
  auto verifier = wiesner::verifier_v2_with_secret({Bits(0, 1), Bits(1, 1)});
  auto report = nondestructive_check(prover, verifier, init, 1e-9);
  CHECK(!report.is_nondestructive);
  CHECK(report.max_damage > 0.001);  // replay fidelity < 0.999
}

TEST_CASE("nondestructive detector: witness-ignoring fixed prover is clean") {
  qsim::StateVector init = qsim::StateVector::vacuum({{"W", 2}, {"N", 4}});
  qsim::apply_h(init, 0);
  auto prover = wiesner::fixed_beta_prover(2, Bits(0b01, 2));
  auto verifier = wiesner::verifier_v2_with_secret({Bits(0b01, 2), Bits(0b10, 2)});
  auto report = nondestructive_check(prover, verifier, init, 1e-9);
  CHECK(report.is_nondestructive);
  CHECK(report.transcript_deterministic);
  CHECK(report.max_damage < 1e-9);
}

TEST_CASE("nondestructive detector: a unitary-only prover reports no damage") {
  // applies X to its witness each run and answers a fixed string: the
  // interaction is unitary even though the witness changes
  int lambda = 2;
  itm::GateProgram prog;
  prog.gates.push_back(itm::g_x(2 * lambda));
  for (int i = 0; i < lambda; ++i) prog.gates.push_back(itm::g_x(lambda + i));
  wiesner::ProverInstance prover{itm::QuantumMachineSpec{2 * lambda, lambda, {prog}}, {"W"}};
  qsim::StateVector init = qsim::StateVector::vacuum({{"W", lambda}, {"N", 2 * lambda}});
  qsim::apply_h(init, 0);
  auto verifier = wiesner::verifier_v2_with_secret({Bits(0b11, 2), Bits(0b00, 2)});
  auto report = nondestructive_check(prover, verifier, init, 1e-9);
  CHECK(report.is_nondestructive);
  CHECK(report.max_damage < 1e-9);
}

TEST_CASE("response signature of a nondestructive prover") {
  int lambda = 2;
  Bits beta(0b10, 2);
  auto prover = wiesner::fixed_beta_prover(lambda, beta);
  qsim::StateVector init = qsim::StateVector::vacuum({{"N", 2 * lambda}});
  auto verifier = wiesner::verifier_v2_with_secret({Bits(0b01, 2), Bits(0b10, 2)});
  auto signature = learn_response_signature(prover, verifier, init, lambda);
  CHECK(signature.size() == 4);
  for (const auto& [u, reply] : signature) CHECK(reply.slice(lambda, lambda) == beta);
}

TEST_CASE("pok-to-money adversary: two genuine bills give double acceptance") {
  int accepted = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    auto out = pok_to_money_adversary(2, SplitKind::TwoGenuineBills, Rng::child_seed(51, t));
    REQUIRE(out.agree_match);
    if (out.accept_first && out.accept_second) ++accepted;
  }
  CHECK(static_cast<double>(accepted) / trials >= 0.99);
  CHECK(DoubleVerification::delta0 == doctest::Approx((2.0 - std::sqrt(3.0)) / 2.0));
}

TEST_CASE("pok-to-money adversary: bill-and-nothing split stays within the game's win rate") {
  int lambda = 2;
  const int trials = 2000;
  int accepted = 0;
  for (int t = 0; t < trials; ++t) {
    auto out = pok_to_money_adversary(lambda, SplitKind::BillAndNothing, Rng::child_seed(77, t));
    if (out.accept_first && out.accept_second) ++accepted;
  }
  double double_rate = static_cast<double>(accepted) / trials;
  // B's extracted register approximates |0...0>, which Ver accepts with
  // probability E_theta[|<0|$(v,theta)>|^2]; compare against the trivial
  // split game, which bounds this adversary
  GameRow game = run_no_cloning_game(lambda, CloningStrategy::trivial_split(), 4000, 91);
  // note: the trivial-split B answers measurement outcomes of |0...0>, the
  // same distribution, so the rates agree within joint CI
  double sigma = std::sqrt(game.win_rate * (1 - game.win_rate) *
                           (1.0 / trials + 1.0 / game.trials));
  CHECK(std::abs(double_rate - game.win_rate) < 4 * sigma + 0.02);
}

TEST_CASE("sequential amplification: fresh bills pass every round") {
  auto row = sequential_amplification(2, AmplificationProver::FreshBills, 3, 300, 5);
  CHECK(row.overall_pass == doctest::Approx(1.0));
  for (double p : row.per_round_pass) CHECK(p == doctest::Approx(1.0));
}

TEST_CASE("sequential amplification: fixed-beta prover rounds are i.i.d.") {
  int lambda = 2, n = 3;
  auto row = sequential_amplification(lambda, AmplificationProver::FixedBeta, n, 20000, 13);
  // per-round rate (3/4)^lambda; overall its cube
  double r = std::pow(0.75, lambda);
  for (double p : row.per_round_pass) {
    double sigma = std::sqrt(r * (1 - r) / row.trials);
    CHECK(std::abs(p - r) < 4 * sigma);
  }
  double overall = std::pow(r, n);
  double sigma = std::sqrt(overall * (1 - overall) / row.trials);
  CHECK(std::abs(row.overall_pass - overall) < 4 * sigma);
}

TEST_CASE("sequential amplification: the bill-reusing prover decays geometrically") {
  // Round 1 verifies the bill it actually holds (pass 1); every later round
  // verifies a fresh independent id, and a witness uncorrelated with the
  // round's secret passes with exactly E_{c,theta}[(1/2)^{|s|}] regardless
  // of its state (checked positions compare an independent uniform v).
  int lambda = 2, n = 3;
  double per_round = 0.0;
  for (std::uint64_t c = 0; c < 4; ++c)
    for (std::uint64_t t = 0; t < 4; ++t)
      per_round +=
          std::pow(0.5, wiesner::check_mask(Bits(c, 2), Bits(t, 2)).popcount()) / 16.0;
  CHECK(per_round == doctest::Approx(9.0 / 16.0));
  double exact = std::pow(per_round, n - 1);  // geometric decay

  auto row = sequential_amplification(lambda, AmplificationProver::ReuseBill, n, 20000, 3);
  CHECK(row.per_round_pass[0] == doctest::Approx(1.0));
  for (int r = 1; r < n; ++r) {
    double sigma = std::sqrt(per_round * (1 - per_round) / row.trials);
    CHECK(std::abs(row.per_round_pass[r] - per_round) < 4 * sigma);
  }
  double sigma = std::sqrt(exact * (1 - exact) / row.trials);
  CHECK(std::abs(row.overall_pass - exact) < 4 * sigma + 1e-9);
}
