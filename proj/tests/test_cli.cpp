// Copyright 2026 The qho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qho/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qho");
  std::ostringstream o, e;
  Run r;
  r.code = qho::cli::run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

// Scratch directory, removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qho_cli_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("gap report json") {
  unsetenv(qho::cli::kOutputDirEnv);
  const auto r = run({"gap"});
  REQUIRE(r.code == qho::cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["tool"] == "qho");
  CHECK(j["command"] == "gap");
  CHECK(j["seed"] == 12345);
  CHECK(j.contains("tool_version"));
  CHECK(j["dim"] == 200);
  CHECK(j["regime"] == "exact");
  CHECK(j["gap_value"].get<double>() == 0.625);
  CHECK(j["off_diag_analytic"][0].get<double>() == 0.625);
  CHECK(j["diagonal_numeric"].get<double>() ==
        doctest::Approx(0.9113300998).epsilon(1e-9));
  CHECK(j["diagonal_lower"].get<double>() ==
        doctest::Approx(0.869014874195551728).epsilon(1e-14));
  CHECK(j["condition_value"].get<double>() ==
        doctest::Approx(1.43841036226).epsilon(1e-10));
  // Summary goes to stderr when the report is on stdout.
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("gap in the undetermined regime and csv") {
  const auto r = run({"gap", "--nu", "0.8", "--r", "0.05", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# tool: qho\n", 0) == 0);
  CHECK(r.out.find("regime,undetermined") != std::string::npos);
  CHECK(r.out.find("field,value") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"gap", "--nu", "0.6", "--r", "0.4"},
           {"region", "--steps", "6"},
           {"evolve", "--t", "2", "--dim", "30"},
           {"equivalence", "--parity", "odd"}}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("region csv") {
  const auto r = run({"region", "--nu-min", "0.3", "--nu-max", "0.9",
                      "--steps", "4"});
  REQUIRE(r.code == 0);
  const auto golden = slurp(fs::path(QHO_TEST_DATA_DIR) / "region_small.csv");
  REQUIRE_FALSE(golden.empty());
  CHECK(r.out == golden);

  const auto ls = lines_of(r.out);
  std::size_t header = 0;
  while (header < ls.size() && ls[header][0] == '#') ++header;
  REQUIRE(header < ls.size());
  CHECK(ls[header] == "nu,r_star,r_sufficient,r_figure1,residual,status");
  CHECK(ls.size() == header + 5);
  CHECK(ls[header + 2].rfind("0.5,0.4634149167287", 0) == 0);
  CHECK(ls.back().find("bracket_extended") != std::string::npos);
}

TEST_CASE("region svg") {
  TempDir tmp;
  const auto csv = tmp.path / "reg.csv";
  const auto r = run({"region", "--steps", "8", "--svg", "--out", csv.string()});
  REQUIRE(r.code == 0);
  // Only the human summary reaches stdout.
  CHECK(r.out.find("wrote") != std::string::npos);
  CHECK(r.out.find("nu,r_star") == std::string::npos);
  CHECK(fs::exists(csv));
  const auto svg = slurp(tmp.path / "reg.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("width=\"800\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("region argument errors") {
  CHECK(run({"region", "--steps", "0"}).code == qho::cli::kInvalidInput);
  CHECK(run({"region", "--nu-min", "0.9", "--nu-max", "0.2"}).code ==
        qho::cli::kInvalidInput);
  CHECK(run({"region", "--nu-max", "1.0"}).code == qho::cli::kInvalidInput);
}

TEST_CASE("evolve") {
  SUBCASE("ground state relaxes") {
    const auto r = run({"evolve", "--t", "1", "--sample-every", "0.5", "--dim",
                        "30", "--diag-columns", "2"});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    std::size_t h = 0;
    while (ls[h][0] == '#') ++h;
    CHECK(ls[h] ==
          "t,trace_distance,weighted_hs_norm,boundary_occupancy,diag_0,diag_1");
    CHECK(ls.size() == h + 4);
    // Ground state vs invariant diag (3/4, 3/16, ...): distance 1/4.
    CHECK(ls[h + 1].rfind("0,0.25,", 0) == 0);
  }
  SUBCASE("invariant initial state stays put") {
    const auto r = run({"evolve", "--initial", "invariant", "--t", "1",
                        "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["trace_distance"].size() == j["t"].size());
    for (const auto& v : j["trace_distance"]) CHECK(v.get<double>() <= 1e-12);
  }
  SUBCASE("truncation overflow") {
    const auto r = run({"evolve", "--dim", "4", "--t", "1"});
    CHECK(r.code == qho::cli::kNumericalFailure);
    CHECK(r.err.find("tail_tol") != std::string::npos);
  }
  SUBCASE("bad initial state") {
    CHECK(run({"evolve", "--initial", "basis:99", "--dim", "30"}).code == 1);
    CHECK(run({"evolve", "--initial", "nonsense"}).code == 1);
    CHECK(run({"evolve", "--dt", "10"}).code == 1);
  }
  SUBCASE("mixture file") {
    TempDir tmp;
    const auto f = tmp.path / "mix.txt";
    std::ofstream(f) << "0 1\n1 3\n";
    const auto r = run({"evolve", "--initial", "mixture:" + f.string(), "--t",
                        "0.5", "--format", "json", "--diag-columns", "2"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& s0 = j["diag"][0];
    CHECK(s0[0].get<double>() == doctest::Approx(0.25));
    CHECK(s0[1].get<double>() == doctest::Approx(0.75));
    std::ofstream(f) << "0 -1\n";
    CHECK(run({"evolve", "--initial", "mixture:" + f.string()}).code == 1);
    CHECK(run({"evolve", "--initial", "mixture:" + (tmp.path / "none").string()})
              .code == 1);
  }
}

TEST_CASE("transient parameters are rejected") {
  for (const char* cmd : {"gap", "evolve"}) {
    const auto r = run({cmd, "--nu", "1"});
    CHECK(r.code == qho::cli::kInvalidInput);
    CHECK(r.err.find("transient") != std::string::npos);
  }
}

TEST_CASE("equivalence") {
  for (const char* parity : {"even", "odd"}) {
    const auto r = run({"equivalence", "--parity", parity});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["proportionality_constant"].get<double>() ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(j["max_residual"].get<double>() <= 1e-12);
    CHECK(j["parity"] == parity);
  }
  CHECK(run({"equivalence", "--parity", "even", "--r", "1"}).code == 1);
  CHECK(run({"equivalence", "--parity", "sideways"}).code == 1);
  CHECK(run({"equivalence"}).code == 1);
}

TEST_CASE("selftest") {
  const auto ok = run({"selftest", "--quick"});
  CHECK(ok.code == qho::cli::kOk);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const auto bad = run({"selftest", "--quick", "--inject-fault"});
  CHECK(bad.code == qho::cli::kSelfTestFailure);
  CHECK(bad.out.find("FAIL 16 kernel_exactness") != std::string::npos);
  const auto j = nlohmann::json::parse(
      run({"selftest", "--quick", "--format", "json"}).out);
  CHECK(j["criteria"].size() == 17);
}

TEST_CASE("output directory from the environment") {
  TempDir tmp;
  setenv(qho::cli::kOutputDirEnv, tmp.path.string().c_str(), 1);
  const auto r = run({"gap", "--dim", "60"});
  unsetenv(qho::cli::kOutputDirEnv);
  REQUIRE(r.code == 0);
  CHECK(r.out.find('{') == std::string::npos);
  const auto body = slurp(tmp.path / "gap.json");
  CHECK(nlohmann::json::parse(body)["dim"] == 60);
}

TEST_CASE("parse errors and help") {
  CHECK(run({"gap", "--bogus"}).code == qho::cli::kInvalidInput);
  CHECK(run({"gap", "--format", "xml"}).code == qho::cli::kInvalidInput);
  CHECK(run({"gap", "--m-max", "2"}).code == qho::cli::kInvalidInput);
  CHECK(run({"gap", "--r", "-1"}).code == qho::cli::kInvalidInput);
  CHECK(run({}).code == qho::cli::kInvalidInput);
  CHECK(run({"--help"}).code == qho::cli::kOk);
  CHECK(run({"--version"}).code == qho::cli::kOk);
}
