// Exercises the installed binary's flag surface and exit-code contract.
// Usage: test_cli <path-to-cliffgrad-binary>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string g_cli;
int g_failures = 0;

int run(const std::string& args, std::string* out = nullptr) {
  const std::string path = "test_cli_out.txt";
  const std::string cmd =
      "\"" + g_cli + "\" " + args + " > " + path + " 2> test_cli_err.txt";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    *out = os.str();
  }
  return status == -1 ? -1 : WEXITSTATUS(status);
}

void expect(bool ok, const std::string& what) {
  if (!ok) {
    std::fprintf(stderr, "FAIL: %s\n", what.c_str());
    ++g_failures;
  }
}

void expect_exit(const std::string& args, int want) {
  const int got = run(args);
  if (got != want) {
    std::fprintf(stderr, "FAIL: '%s' exited %d, expected %d\n", args.c_str(),
                 got, want);
    ++g_failures;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <cliffgrad binary>\n");
    return 2;
  }
  g_cli = argv[1];

  // quadratic expression on the unit right triangle: the mean ratio is the
  // gradient (1, 1) at the shared quotient midpoint (1/2, 1/2)
  std::string out;
  expect(run("grad --field \"x1*x1 + x2\" --simplex \"0,0;1,0;0,1\"", &out) ==
             0,
         "grad quadratic exits 0");
  expect(out.find("r_mean: 1 1") != std::string::npos,
         "grad quadratic reports (1, 1), got: " + out);
  expect(out.find("field evaluations: 4") != std::string::npos,
         "grad reports 2n evaluations");

  expect(run("grad --field linear:2,-3 --simplex \"0,0;1,0;0,1\"", &out) == 0,
         "grad linear exits 0");
  expect(out.find("r_mean: 2 -3") != std::string::npos,
         "grad linear reports the gradient, got: " + out);

  // JSON flavour round-trips the same numbers
  expect(run("grad --field linear:2,-3 --simplex \"0,0;1,0;0,1\" --json",
             &out) == 0,
         "grad --json exits 0");
  expect(out.find("\"r\": [2, -3]") != std::string::npos,
         "grad --json payload, got: " + out);

  // simplex from a file
  {
    std::ofstream f("test_cli_simplex.txt");
    f << "0,0;1,0;0,1\n";
  }
  expect(run("grad --field linear:2,-3 --simplex @test_cli_simplex.txt",
             &out) == 0,
         "grad reads @file simplex specs");

  // exit-code contract
  expect_exit("grad --field linear:2,-3 --simplex \"0,0;1,1;2,2\"", 2);
  expect_exit("grad --field schwarz --simplex \"0.93,0;0.99,0.2;0.99,-0.2\"",
              3);  // mirrored point lands outside |x1| <= 1
  expect_exit("grad --field \"x1 + * 2\" --simplex \"0,0;1,0;0,1\"", 4);
  expect_exit("grad --field \"linear:1,2,3\" --simplex \"0,0;1,0;0,1\"", 4);
  expect_exit("grad --no-such-flag", 4);
  expect_exit("converge --field sin-exp --h-max 1e-4 --h-min 1e-1", 4);
  expect_exit("converge --field \"x1*x2\" --center 0,0", 4);  // no gradient
  expect_exit("detcheck --k 20", 4);
  expect_exit("meshgrad --mesh no_such_file.json", 4);
  expect_exit("schwarz", 0);
  expect_exit("detcheck --k 8 --trials 200 --seed 3", 0);

  // converge writes identical bytes to --out and stdout
  expect(run("converge --field sin-exp --family regular --center 0,0 "
             "--h-max 1e-1 --h-min 1e-3 --per-decade 3 --format json",
             &out) == 0,
         "converge json exits 0");
  expect(out.find("\"command\": \"converge\"") != std::string::npos,
         "converge json payload");
  const std::string piped = out;
  expect(run("converge --field sin-exp --family regular --center 0,0 "
             "--h-max 1e-1 --h-min 1e-3 --per-decade 3 --format json "
             "--out test_cli_sweep.json") == 0,
         "converge --out exits 0");
  {
    std::ifstream in("test_cli_sweep.json", std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    expect(os.str() == piped, "stdout and --out bytes agree");
  }

  // tabulated mesh falls back to the naive estimator with a marker
  {
    std::ofstream mesh("test_cli_mesh.json");
    mesh << R"({"dimension": 2,
 "vertices": [[0,0],[1,0],[1,1],[0,1]],
 "cells": [[0,1,2],[0,2,3]],
 "values": [0.0, 2.0, -1.0, -3.0]})";
  }
  expect(run("meshgrad --mesh test_cli_mesh.json --format csv", &out) == 0,
         "tabulated meshgrad exits 0");
  expect(out.find("naive (no mirror samples)") != std::string::npos,
         "tabulated meshgrad marks the estimator, got: " + out);

  // both values and field present is a config error
  {
    std::ofstream mesh("test_cli_mesh_bad.json");
    mesh << R"({"dimension": 2,
 "vertices": [[0,0],[1,0],[0,1]],
 "cells": [[0,1,2]],
 "values": [0, 1, 2],
 "field": "x1"})";
  }
  expect_exit("meshgrad --mesh test_cli_mesh_bad.json", 4);

  if (g_failures) {
    std::fprintf(stderr, "%d CLI checks failed\n", g_failures);
    return 1;
  }
  std::printf("all CLI checks passed\n");
  return 0;
}
