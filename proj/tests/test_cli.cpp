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

// End-to-end checks of the CLI binary (path passed as argv[1]).

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace {

std::string g_cli;
std::filesystem::path g_dir;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string out_file = (g_dir / "cmd_out.txt").string();
  std::string cmd = "POQK_OUT_DIR=" + g_dir.string() + " " + g_cli + " " + args + " > " +
                    out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("mint-demo and verify-demo") {
  auto mint = run_cli("mint-demo --lambda 2 --seed 7");
  CHECK(mint.exit_code == 0);
  CHECK(mint.output.find("secret v:") != std::string::npos);
  CHECK(mint.output.find("bill amplitudes:") != std::string::npos);

  auto mint_sub = run_cli("mint-demo --scenario subspace --lambda 2 --seed 7");
  CHECK(mint_sub.exit_code == 0);
  CHECK(mint_sub.output.find("basis:") != std::string::npos);

  auto verify = run_cli("verify-demo --lambda 3 --seed 5");
  CHECK(verify.exit_code == 0);
  CHECK(verify.output.find("genuine bill: accepted") != std::string::npos);
  CHECK(verify.output.find("corrupted bill: rejected") != std::string::npos);
}

TEST_CASE("experiment run writes CSV and JSON; replay reproduces byte-identically") {
  write_file(g_dir / "cfg.json",
             R"({"scenario":"wiesner","experiment":"completeness","lambda":2,"mode":"purified",
                 "prover":{"kind":"honest"},"trials":60,"seed":42,"kappa":0.9,"output":"rep1"})");
  auto run = run_cli("experiment run " + (g_dir / "cfg.json").string());
  REQUIRE(run.exit_code == 0);
  std::string csv = read_file(g_dir / "rep1.csv");
  CHECK(csv.find("p_hat") != std::string::npos);
  CHECK(csv.find("wiesner,honest,2,42,60,1,") != std::string::npos);

  auto replay = run_cli("experiment replay " + (g_dir / "rep1.json").string());
  CHECK(replay.exit_code == 0);
  CHECK(replay.output.find("replay OK") != std::string::npos);

  // the CSV bodies of two runs agree except for the timestamp line
  auto run2 = run_cli("experiment run " + (g_dir / "cfg.json").string() + " --output rep2");
  REQUIRE(run2.exit_code == 0);
  std::string csv2 = read_file(g_dir / "rep2.csv");
  auto strip_ts = [](std::string s) {
    size_t a = s.find("# timestamp");
    size_t b = s.find('\n', a);
    return s.substr(0, a) + s.substr(b + 1);
  };
  CHECK(strip_ts(csv) == strip_ts(csv2));
}

TEST_CASE("tampered report is detected; seed override is flagged") {
  write_file(g_dir / "cfg_t.json",
             R"({"scenario":"wiesner","experiment":"cloning-game","lambda":2,
                 "strategy":"trivial_split","trials":500,"seed":9,"output":"game"})");
  auto run = run_cli("experiment run " + (g_dir / "cfg_t.json").string());
  REQUIRE(run.exit_code == 0);

  nlohmann::ordered_json rep;
  {
    std::ifstream in(g_dir / "game.json");
    in >> rep;
  }
  // tamper with win_rate (column 4)
  nlohmann::ordered_json tampered = rep;
  tampered["rows"][0][4] = "0.999";
  write_file(g_dir / "tampered.json", tampered.dump(1));
  auto bad = run_cli("experiment replay " + (g_dir / "tampered.json").string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("MISMATCH") != std::string::npos);

  auto overridden = run_cli("experiment replay " + (g_dir / "game.json").string() +
                            " --seed --seed-value 1234");
  CHECK(overridden.output.find("non-replay comparison") != std::string::npos);
}

TEST_CASE("config errors exit with code 2") {
  write_file(g_dir / "bad1.json", R"({"scenario":"wiesner","experiment":"completeness"})");
  CHECK(run_cli("experiment run " + (g_dir / "bad1.json").string()).exit_code == 2);

  write_file(g_dir / "bad2.json",
             R"({"scenario":"wiesner","experiment":"completeness","lambda":9,
                 "trials":10,"seed":1})");
  CHECK(run_cli("experiment run " + (g_dir / "bad2.json").string()).exit_code == 2);

  write_file(g_dir / "bad3.json",
             R"({"scenario":"subspace","experiment":"completeness","lambda":3,
                 "trials":10,"seed":1})");
  CHECK(run_cli("experiment run " + (g_dir / "bad3.json").string()).exit_code == 2);

  write_file(g_dir / "bad4.json",
             R"({"scenario":"wiesner","experiment":"extraction-sweep","lambda":5,
                 "trials":10,"seed":1})");
  CHECK(run_cli("experiment run " + (g_dir / "bad4.json").string()).exit_code == 2);

  CHECK(run_cli("experiment run " + (g_dir / "missing.json").string()).exit_code == 2);
}

TEST_CASE("small extraction sweep emits monotone mu_hat and a fitted constant") {
  write_file(g_dir / "sweep.json",
             R"({"scenario":"wiesner","experiment":"extraction-sweep","lambda":1,
                 "prover":{"kind":"depolarizing"},"grid":[0.0,0.5],"trials":40,"seed":3,
                 "output":"sweep"})");
  auto run = run_cli("experiment run " + (g_dir / "sweep.json").string());
  REQUIRE(run.exit_code == 0);
  std::string csv = read_file(g_dir / "sweep.csv");
  CHECK(csv.find("fitted_C") != std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  double prev_mu = -1.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("scenario", 0) == 0) continue;
    // columns: scenario,prover,lambda,q,p_hat,mu_hat,...
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c <= 5; ++c) std::getline(cells, cell, ',');
    double mu = std::stod(cell);
    CHECK(mu >= prev_mu - 1e-12);
    prev_mu = mu;
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("amplification and nondestructive-scan experiments run") {
  write_file(g_dir / "amp.json",
             R"({"scenario":"wiesner","experiment":"amplification","lambda":2,"n_reps":2,
                 "prover":{"kind":"fresh_bills"},"trials":50,"seed":2,"output":"amp"})");
  REQUIRE(run_cli("experiment run " + (g_dir / "amp.json").string()).exit_code == 0);
  std::string amp_csv = read_file(g_dir / "amp.csv");
  CHECK(amp_csv.find("overall,1") != std::string::npos);

  write_file(g_dir / "nd.json",
             R"({"scenario":"wiesner","experiment":"nondestructive-scan","lambda":1,
                 "prover":{"kind":"honest"},"trials":1,"seed":2,"output":"nd"})");
  REQUIRE(run_cli("experiment run " + (g_dir / "nd.json").string()).exit_code == 0);
  std::string nd = read_file(g_dir / "nd.csv");
  CHECK(nd.find("wiesner,honest,1,0,") != std::string::npos);  // nondeterministic transcripts

  write_file(g_dir / "nd2.json",
             R"({"scenario":"wiesner","experiment":"nondestructive-scan","lambda":1,
                 "prover":{"kind":"fixed_beta","beta":"0"},"trials":1,"seed":2,"output":"nd2"})");
  REQUIRE(run_cli("experiment run " + (g_dir / "nd2.json").string()).exit_code == 0);
  std::string nd2 = read_file(g_dir / "nd2.csv");
  CHECK(nd2.find(",1\n") != std::string::npos);  // flagged nondestructive
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-poqk_cli>\n");
    return 1;
  }
  g_cli = argv[1];
  g_dir = std::filesystem::temp_directory_path() / "poqk_cli_test";
  std::filesystem::create_directories(g_dir);
  doctest::Context ctx;
  return ctx.run();
}
