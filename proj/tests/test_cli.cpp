/*
 Copyright 2026 The lipsol Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lipsol/cli.hpp"

namespace fs = std::filesystem;
using lipsol::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome lipsol_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / "lipsol_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

void check_golden(const std::vector<std::string> &args, const std::string &file) {
  const auto res = lipsol_run(args);
  CHECK(res.code == 0);
  CHECK(res.err.empty());
  const std::string expected = slurp(fs::path(LIPSOL_GOLDEN_DIR) / file);
  REQUIRE_FALSE(expected.empty());
  CHECK(res.out == expected);
}

} // namespace

TEST_CASE("golden: socp at the origin of example2") {
  check_golden({"solve", "--problem", "example2", "--x", "0,0", "--method", "socp"},
               "solve_example2_socp.json");
  const auto j = nlohmann::json::parse(lipsol_run({"solve", "--problem", "example2", "--x", "0,0",
                                                   "--method", "socp"}).out);
  CHECK(j.at("u") == nlohmann::json::array({1.0, 0.0}));
  CHECK(j.at("radius") == 1.0);
}

TEST_CASE("golden: exact QP at x = 0 of example1") {
  check_golden({"solve", "--problem", "example1", "--x", "0", "--method", "qp"},
               "solve_example1_qp.json");
  const auto j = nlohmann::json::parse(
      lipsol_run({"solve", "--problem", "example1", "--x", "0", "--method", "qp"}).out);
  CHECK(j.at("u")[0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.at("u")[1].get<double>() == 0.0);
  CHECK(j.at("active_set") == nlohmann::json::array({1, 2}));
}

TEST_CASE("golden: robinson regularity with the analytic-center provider") {
  const std::vector<std::string> args{"lipschitz", "--problem", "robinson", "--provider",
                                      "analytic_center", "--steps", "1e-2,1e-3", "--method",
                                      "socp,qp"};
  check_golden(args, "lipschitz_robinson_analytic_center.json");
  const auto j = nlohmann::json::parse(slurp(fs::path(LIPSOL_GOLDEN_DIR) /
                                             "lipschitz_robinson_analytic_center.json"));
  CHECK(j.at("reports")[0].at("method") == "socp");
  CHECK(j.at("reports")[0].at("verdict") == "lipschitz_stable");
  CHECK(j.at("reports")[1].at("method") == "qp_oracle");
  CHECK(j.at("reports")[1].at("verdict") == "diverging");
}

TEST_CASE("list prints the registry") {
  const auto res = lipsol_run({"list"});
  CHECK(res.code == 0);
  const auto j = nlohmann::json::parse(res.out);
  REQUIRE(j.size() == 3);
  CHECK(j[2].at("name") == "robinson");
  CHECK(j[2].at("p") == 12);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(lipsol_run({}).code == 1);
  CHECK(lipsol_run({"solve", "--problem", "example2", "--x", "0,0", "--bogus"}).code == 1);
  CHECK(lipsol_run({"solve", "--problem", "example2", "--x", "0,0", "--method", "lp"}).code == 1);
  CHECK(lipsol_run({"solve", "--problem", "example2", "--x", "0,zero"}).code == 1);
  CHECK(lipsol_run({"solve", "--problem", "nope", "--x", "0"}).code == 1);
  const auto steiner =
      lipsol_run({"solve", "--problem", "robinson", "--x", "0,0", "--provider", "steiner"});
  CHECK(steiner.code == 1);
  CHECK(steiner.err.find("--samples") != std::string::npos);
  CHECK(steiner.out.empty());
}

TEST_CASE("solver and assumption errors exit with 2") {
  CHECK(lipsol_run({"solve", "--problem", "example2", "--x", "5,0"}).code == 2);

  const fs::path file = scratch("bad_pif.json");
  std::ofstream(file) << R"({
    "name": "bad", "n": 1, "m": 1, "p": 2,
    "domain": {"lower": [-1], "upper": [1]},
    "A": [["1"], ["-1"]], "b": ["1", "1"], "pi_des": ["0"], "pi_f": ["3"]
  })";
  const auto res = lipsol_run({"solve", "--problem", file.string(), "--x", "0"});
  CHECK(res.code == 2);
  CHECK(res.err.find("constraint 1") != std::string::npos);
}

TEST_CASE("output is byte-identical across runs and seeded") {
  const std::vector<std::string> args{"solve",    "--problem", "robinson", "--x",
                                      "0.1,-0.2", "--provider", "steiner", "--samples", "200"};
  const auto a = lipsol_run(args);
  const auto b = lipsol_run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  auto seeded = args;
  seeded.insert(seeded.end(), {"--seed", "7"});
  const auto c = lipsol_run(seeded);
  CHECK(c.out != a.out);

  ::setenv("LIPSOL_SEED", "7", 1);
  const auto from_env = lipsol_run(args);
  auto explicit_zero = args;
  explicit_zero.insert(explicit_zero.end(), {"--seed", "0"});
  const auto overridden = lipsol_run(explicit_zero);
  ::unsetenv("LIPSOL_SEED");
  CHECK(from_env.out == c.out);
  CHECK(overridden.out == a.out);
}

TEST_CASE("sweep writes CSV to the output path") {
  const fs::path file = scratch("sweep.csv");
  fs::remove(file);
  const auto res = lipsol_run({"sweep", "--problem", "example1", "--steps", "0.5", "--method",
                               "socp,qp", "--output", file.string()});
  CHECK(res.code == 0);
  CHECK(res.out.empty());
  std::istringstream in(slurp(file));
  std::string header;
  std::getline(in, header);
  CHECK(header == "x_1,socp_u_1,socp_u_2,socp_residual,socp_status,"
                  "qp_oracle_u_1,qp_oracle_u_2,qp_oracle_residual,qp_oracle_status");
  std::size_t rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  CHECK(rows == 9);

  const auto workers = lipsol_run({"sweep", "--problem", "example2", "--steps", "0.5", "--method",
                                   "socp,qcqp,qp", "--workers", "3"});
  const auto single = lipsol_run({"sweep", "--problem", "example2", "--steps", "0.5", "--method",
                                  "socp,qcqp,qp"});
  CHECK(workers.out == single.out);
}

TEST_CASE("compare and simulate subcommands") {
  const auto cmp = lipsol_run({"compare", "--problem", "example2", "--steps", "0.5"});
  CHECK(cmp.code == 0);
  const auto j = nlohmann::json::parse(cmp.out);
  CHECK(j.at("methods").size() >= 1);
  CHECK(j.at("methods")[0].at("min_gap").get<double>() >= -1e-7);

  const auto sim = lipsol_run({"simulate", "--problem", "example1", "--dynamics", "u1 - 2",
                               "--controller", "qp", "--x0", "0.5", "--dt", "0.25", "--T", "0.5"});
  CHECK(sim.code == 0);
  CHECK(sim.out.rfind("t,x_1,u_1,u_2,status\n", 0) == 0);
  CHECK(lipsol_run({"simulate", "--problem", "example1", "--controller", "socp", "--x0", "0.5"})
            .code == 1); // dynamics missing
}
