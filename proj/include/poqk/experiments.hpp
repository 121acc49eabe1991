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

#include "poqk/cloning.hpp"
#include "poqk/report.hpp"
#include "poqk/subspace.hpp"

namespace poqk::experiments {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Documented dense-simulation caps per experiment family.
int lambda_cap(const std::string& experiment, const std::string& phi_path);

wiesner::ProverFamilySpec parse_prover(const nlohmann::ordered_json& config, int lambda);

aap::ScenarioFactory make_factory(const std::string& scenario, int lambda,
                                  const std::string& mode);
aap::Protocol make_protocol(const std::string& scenario,
                            const wiesner::ProverFamilySpec& family);
aap::Extractor make_extractor(const std::string& scenario, const std::string& phi_path);

/// Runs the experiment described by a config object:
///   {scenario, experiment, lambda, trials, seed, mode?, prover?, grid?,
///    strategy?, n_reps?, phi_path?, kappa?, tolerance?, output?}
/// Deterministic for fixed config. Throws ConfigError on invalid configs.
report::Report run_experiment(const nlohmann::ordered_json& config);

}  // namespace poqk::experiments
