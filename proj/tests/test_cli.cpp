#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "interp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"regioncli"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  return interp::cli_main(static_cast<int>(argv.size()), argv.data());
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("check: classical passes, strengthened rejects the operator counterexample") {
  CHECK(run({"check", "fixtures/example38.json", "--class", "op-monotone", "--mu", "0", "--L",
             "1"}) == 0);
  CHECK(run({"check", "fixtures/example38.json", "--class", "op-monotone", "--mu", "0", "--L",
             "1", "--strengthened"}) == 1);
}

TEST_CASE("check: empty or missing files are usage errors") {
  {
    std::ofstream out("cli_empty.json");
  }
  CHECK(run({"check", "cli_empty.json", "--class", "op-monotone"}) == 2);
  std::remove("cli_empty.json");
  CHECK(run({"check", "no_such_file.json", "--class", "op-monotone"}) == 2);
}

TEST_CASE("unknown flags exit with the usage code") {
  CHECK(run({"check", "fixtures/example38.json", "--class", "op-monotone", "--bogus"}) == 2);
  CHECK(run({"nonsense"}) == 2);
}

TEST_CASE("figure subcommand renders an SVG") {
  CHECK(run({"figure", "1", "--grid", "24", "--out", "cli_fig1.svg"}) == 0);
  REQUIRE(file_exists("cli_fig1.svg"));
  std::ifstream in("cli_fig1.svg");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("</svg>") != std::string::npos);
  std::remove("cli_fig1.svg");
}

TEST_CASE("region subcommand consumes a spec file") {
  {
    std::ofstream out("cli_region_spec.json");
    out << R"({
      "dataset": {"kind": "function", "d": 1, "samples": [
        {"x": [0], "f": 0, "g": [1]},
        {"x": [1], "f": 0, "g": [0], "free": ["g[0]", "f"]}
      ]},
      "range1": [-0.5, 2.5], "range2": [0.5, 2.5], "resolution": [16, 16],
      "conditions": [{"class": "smooth-convex-alpha", "L": 1, "alpha": 0}]})";
  }
  CHECK(run({"region", "cli_region_spec.json", "--format", "csv", "--out", "cli_region.csv"}) ==
        0);
  CHECK(file_exists("cli_region.csv"));
  std::remove("cli_region_spec.json");
  std::remove("cli_region.csv");
}

TEST_CASE("sdp subcommand reports infeasibility of the counterexample") {
  CHECK(run({"sdp", "fixtures/example38.json", "--class", "op-monotone", "--mu", "0", "--L",
             "1", "--max-iter", "4000"}) == 1);
}

TEST_CASE("oracle subcommand agrees on a small batch") {
  CHECK(run({"oracle", "--class", "op-lipschitz", "--trials", "12", "--seed", "3"}) == 0);
}

TEST_CASE("bounds subcommand emits the closed forms") {
  CHECK(run({"bounds", "--N", "1", "--x", "0,0", "--gx", "0,0", "--fx", "0", "--y", "1,0",
             "--gy", "0.6,0.374165738677394", "--L", "1"}) == 0);
}
