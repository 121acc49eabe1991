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

#include "poqk/aap.hpp"

#include <cmath>

namespace poqk::aap {

std::string role_name(Role r) {
  switch (r) {
    case Role::I: return "I";
    case Role::P: return "P";
    case Role::V: return "V";
  }
  return "?";
}

Bits RandomOracleTable::query(const Bits& arg) {
  if (arg.width != in_len_) throw std::invalid_argument("RandomOracleTable: bad query width");
  auto it = table_.find(arg.word);
  if (it != table_.end()) return Bits(it->second, out_len_);
  std::uint64_t x = seed_ ^ (arg.word * 0xd1342543de82ef95ULL);
  std::uint64_t value = splitmix64(x) & Bits::mask_of(out_len_);
  table_[arg.word] = value;
  return Bits(value, out_len_);
}

void RandomOracleTable::define(const Bits& arg, const Bits& value) {
  if (arg.width != in_len_ || value.width != out_len_)
    throw std::invalid_argument("RandomOracleTable: bad define width");
  auto it = table_.find(arg.word);
  if (it != table_.end() && it->second != value.word)
    throw std::logic_error("RandomOracleTable: entry already sampled");
  table_[arg.word] = value.word;
}

AgreeResult run_agree_phase(MoneyScenario& sc, const Protocol& protocol) {
  AgreeResult res;
  res.aux = protocol.input_gen(sc);
  auto claim = protocol.p1(sc, res.aux);
  if (!claim) return res;  // P1 returned bot
  res.transcript.messages.push_back({itm::Sender::Prover, claim->message});
  // V1: check the claimed identifier through the public oracle.
  OracleReply pub = sc.oracle(Role::V, "public", claim->message);
  if (pub.is_bot()) return res;
  Bits x_v = claim->message;
  if (!claim->x_p || !(*claim->x_p == x_v)) return res;
  res.ok = true;
  res.x = x_v;
  return res;
}

CompletenessOutcome run_completeness_experiment(MoneyScenario& sc, const Protocol& protocol) {
  CompletenessOutcome out;
  AgreeResult agree = run_agree_phase(sc, protocol);
  out.agree = agree.ok ? 1 : 0;
  if (!agree.ok) return out;
  out.x = agree.x;

  itm::BlackBoxProver prover = protocol.p2(sc, agree.x, agree.aux);
  itm::ClassicalMachineSpec verifier = protocol.v2(sc, agree.x);
  if (!sc.state().has_register("N")) sc.state().add_register("N", prover.n_width());
  std::vector<Bits> tape;
  auto res = itm::run_interaction(verifier, tape, prover.spec_for_executor(), sc.state(), "N",
                                  prover.s_regs(), sc.rng());
  out.prove = res.verdict;
  return out;
}

SoundnessOutcome run_soundness_experiment(const ScenarioFactory& factory,
                                          const Protocol& protocol, const Extractor& extractor,
                                          int trials, std::uint64_t seed) {
  SoundnessOutcome out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    auto sc = factory(Rng::child_seed(seed, static_cast<std::uint64_t>(t)));
    AgreeResult agree = run_agree_phase(*sc, protocol);
    if (!agree.ok) {
      ++out.agree_failures;
      continue;
    }
    out.x = agree.x;
    itm::BlackBoxProver prover = protocol.p2(*sc, agree.x, agree.aux);
    std::string extracted = extractor(*sc, prover, agree);
    out.prover_calls += prover.forward_calls() + prover.inverse_calls();
    out.r_accepts += sc->proof_relation(agree.x, extracted);
  }
  return out;
}

WilsonInterval wilson(int successes, int trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 95%
  double n = trials, p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2 * n)) / denom;
  double half = (z / denom) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

PassStats estimate_pass_probability(const ScenarioFactory& factory, const Protocol& protocol,
                                    int trials, std::uint64_t seed) {
  PassStats stats;
  stats.trials = trials;
  for (int t = 0; t < trials; ++t) {
    auto sc = factory(Rng::child_seed(seed, static_cast<std::uint64_t>(t)));
    auto out = run_completeness_experiment(*sc, protocol);
    stats.agree += out.agree;
    stats.pass += out.prove;
  }
  return stats;
}

SecurityRow estimate_security(const ScenarioFactory& factory, const Protocol& protocol,
                              const Extractor& extractor, int trials, std::uint64_t seed) {
  SecurityRow row;
  row.prover = protocol.prover_name;
  row.seed = seed;
  row.trials = trials;
  {
    auto sc = factory(seed);
    row.scenario = sc->name();
    row.lambda = sc->lambda();
  }
  PassStats pass = estimate_pass_probability(factory, protocol, trials, seed);
  row.p_hat = pass.p_hat();
  auto pci = wilson(pass.pass, pass.agree);
  row.p_ci_lo = pci.lo;
  row.p_ci_hi = pci.hi;

  // Disjoint child-seed stream for the extraction trials.
  std::uint64_t ext_stream = seed ^ 0x517cc1b727220a95ULL;
  SoundnessOutcome sound =
      run_soundness_experiment(factory, protocol, extractor, trials, splitmix64(ext_stream));
  int accepted = sound.r_accepts + sound.agree_failures;
  row.delta_hat = 1.0 - sound.r_acceptance();
  auto dci = wilson(trials - accepted, trials);
  row.delta_ci_lo = dci.lo;
  row.delta_ci_hi = dci.hi;
  row.prover_calls = sound.prover_calls;
  return row;
}

}  // namespace poqk::aap
