#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"
#include "ffmop/error.hpp"
#include "run_record.hpp"
#include "spec_io.hpp"

using namespace ffmop;
using namespace ffmop::cli;

namespace {
int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "ffmop");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream sink;
  auto* old_out = std::cout.rdbuf(sink.rdbuf());
  auto* old_err = std::cerr.rdbuf(sink.rdbuf());
  int code = run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("fnv1a digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  RunRecord a, b;
  a.command = b.command = "ffconv add";
  a.config = json::parse(R"({"n": 2, "p": [1, 0, 1], "q": [0, 1]})");
  b.config = json::parse(R"({"q": [0, 1], "p": [1, 0, 1], "n": 2})");
  CHECK(a.digest() == b.digest());
  b.config["n"] = 3;
  CHECK(a.digest() != b.digest());
  a.seed = 7;
  auto j = a.to_json();
  CHECK(j["seed"] == 7);
  CHECK(j["digest"] == a.digest());
}

TEST_CASE("spec JSON round-trip") {
  for (const AnySpec& s : {AnySpec{specs::jue(1, 3, 2)}, AnySpec{specs::gamma_product({0, 0.5})}, AnySpec{specs::be1(1, 0.5, 1)},
                           AnySpec{specs::gaussian_lue_mixture()}}) {
    json j = spec_to_json(s);
    CHECK(spec_to_json(spec_from_json(j)) == j);
  }
  json bad = spec_to_json(AnySpec{specs::lue(0)});
  bad["s0"] = 1.0;
  CHECK_THROWS_AS(spec_from_json(bad), DomainError);
  bad = spec_to_json(AnySpec{specs::lue(0)});
  bad["extra"] = 1;
  CHECK_THROWS_AS(spec_from_json(bad), DomainError);
  bad = spec_to_json(AnySpec{specs::lue(0)});
  bad["terms"][0]["d1"] = 2;
  CHECK_THROWS_AS(spec_from_json(bad), DomainError);
  Poly p{1, -2, 0.5};
  CHECK(poly_from_json(poly_to_json(p)) == p);
  CHECK_THROWS_AS(parse_json_text("{", "spec"), DomainError);
}

TEST_CASE("command exit codes") {
  CHECK(run_args({"ffconv", "add", "--n", "2", "--p", "[-1,0,1]", "--q", "[-1,0,1]"}) == kExitOk);
  CHECK(run_args({"ffconv", "mul", "--n", "2", "--p", "[-1,0,1]"}) == kExitUsage);
  CHECK(run_args({"nonsense"}) == kExitUsage);
  CHECK(run_args({"rmt", "ecp", "--model", "ev(sum(gue(2),gue(3)))", "--samples", "10", "--seed", "1"}) == kExitUsage);
  CHECK(run_args({"mop", "ratio-check", "--broken", "--n", "3"}) == kExitVerification);
  CHECK(run_args({"verify", "--only", "nothing"}) == kExitUsage);
  CHECK(run_args({"verify", "--only", "validators"}) == kExitOk);
}

TEST_CASE("mop build rejects an invalid spec by clause") {
  std::string path = "ffmop_unit_bad_spec.json";
  {
    json j = spec_to_json(AnySpec{specs::lue(-1.5)});
    std::ofstream(path) << j.dump();
  }
  CHECK(run_args({"mop", "build", "--weights", path, "--n", "2"}) == kExitUsage);
  std::remove(path.c_str());
}

TEST_CASE("ecp output files are reproducible and parse back") {
  std::string f1 = "ffmop_unit_ecp1.json", f2 = "ffmop_unit_ecp2.json";
  std::vector<std::string> base{"rmt", "ecp", "--model", "ev(gue(2))", "--samples", "3000", "--seed", "5"};
  auto a1 = base, a2 = base;
  a1.insert(a1.end(), {"--threads", "1", "--out", f1});
  a2.insert(a2.end(), {"--threads", "2", "--out", f2});
  REQUIRE(run_args(a1) == kExitOk);
  REQUIRE(run_args(a2) == kExitOk);
  std::string s1 = read_file(f1), s2 = read_file(f2);
  CHECK(s1 == s2);
  json j = json::parse(s1);
  CHECK(j.is_object());
  std::remove(f1.c_str());
  std::remove(f2.c_str());
}
