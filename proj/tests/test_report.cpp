#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cliffgrad/errors.hpp"
#include "cliffgrad/report.hpp"

using namespace cliffgrad;

namespace {

SweepReport sample_sweep() {
  SweepReport report;
  report.field = "sin-exp";
  report.family = "regular";
  report.center = {0.0, 0.0};
  report.seed = 42;
  auto fam = SimplexFamily::regular(2, VecN{0, 0});
  report.rows = convergence_sweep(sin_exp_field(), fam,
                                  scale_grid(1e-1, 1e-3, 3));
  return report;
}

}  // namespace

TEST_CASE("mesh json parsing and validation") {
  const char* good = R"({
    "dimension": 2,
    "vertices": [[0,0],[1,0],[1,1],[0,1]],
    "cells": [[0,1,2],[0,2,3]],
    "field": "2*x1 - 3*x2"
  })";
  MeshFile mf = parse_mesh_json(good);
  CHECK(mf.mesh.dim == 2);
  CHECK(mf.mesh.vertices.size() == 4);
  CHECK(mf.mesh.cells.size() == 2);
  REQUIRE(mf.field_text.has_value());
  CHECK(!mf.values.has_value());

  const char* tabulated = R"({
    "dimension": 2,
    "vertices": [[0,0],[1,0],[0,1]],
    "cells": [[0,1,2]],
    "values": [0.0, 2.0, -3.0]
  })";
  MeshFile mt = parse_mesh_json(tabulated);
  REQUIRE(mt.values.has_value());
  CHECK(mt.values->size() == 3);

  CHECK_THROWS_AS(parse_mesh_json("not json"), ConfigError);
  CHECK_THROWS_AS(parse_mesh_json(R"({"dimension": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_mesh_json(R"({
    "dimension": 2,
    "vertices": [[0,0],[1,0],[0,1]],
    "cells": [[0,1,2]],
    "values": [1, 2, 3],
    "field": "x1"
  })"),
                  ConfigError);
  CHECK_THROWS_AS(parse_mesh_json(R"({
    "dimension": 2,
    "vertices": [[0,0],[1,0],[0,1]],
    "cells": [[0,1,2]],
    "values": [1, 2]
  })"),
                  ConfigError);
}

TEST_CASE("sweep csv shape and determinism") {
  SweepReport report = sample_sweep();
  const std::string csv = sweep_csv(report);
  CHECK(csv.substr(0, 2) == "h,");
  CHECK(csv.find("err_naive,err_mean,status") != std::string::npos);
  CHECK(csv.find(",ok\n") != std::string::npos);
  // first data row starts with the 17-digit form of h = 0.1, '.' separator
  CHECK(csv.find("\n0.10000000000000001,") != std::string::npos);
  // byte-deterministic across repeated serialisation
  CHECK(sweep_csv(report) == csv);
  CHECK(sweep_csv(sample_sweep()) == csv);
}

TEST_CASE("sweep json round-trips byte-identically") {
  SweepReport report = sample_sweep();
  const std::string text = sweep_json(report);
  SweepReport parsed = parse_sweep_json(text);
  CHECK(sweep_json(parsed) == text);
  CHECK(parsed.rows.size() == report.rows.size());
  CHECK(parsed.seed == report.seed);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    REQUIRE(parsed.rows[i].r_mean.has_value());
    CHECK((*parsed.rows[i].r_mean - *report.rows[i].r_mean).norm() == 0.0);
  }
}

TEST_CASE("mesh report round-trips byte-identically") {
  SimplicialMesh mesh;
  mesh.dim = 2;
  mesh.vertices = {VecN{0, 0}, VecN{1, 0}, VecN{0, 1}, VecN{2, 2},
                   VecN{4, 4}};
  mesh.cells = {{0, 1, 2}, {0, 3, 4}};
  MeshReport report{"square.json", false,
                    mesh_gradients(mesh, linear_field(VecN{2, -3}, 1.0))};
  CHECK(report.cells[1].status == "degenerate");
  const std::string text = mesh_json(report);
  MeshReport parsed = parse_mesh_report_json(text);
  CHECK(mesh_json(parsed) == text);

  const std::string csv = mesh_csv(report);
  CHECK(csv.find("estimator,status") != std::string::npos);
  CHECK(csv.find("degenerate") != std::string::npos);
  CHECK(csv.find("mean") != std::string::npos);
}

TEST_CASE("tabulated mesh reports carry the naive marker") {
  SimplicialMesh mesh;
  mesh.dim = 2;
  mesh.vertices = {VecN{0, 0}, VecN{1, 0}, VecN{0, 1}};
  mesh.cells = {{0, 1, 2}};
  MeshReport report{"tri.json", true,
                    mesh_gradients(mesh, std::vector<double>{0, 2, -3})};
  CHECK(mesh_csv(report).find("naive (no mirror samples)") !=
        std::string::npos);
  CHECK(mesh_json(report).find("naive (no mirror samples)") !=
        std::string::npos);
}

TEST_CASE("significant digit formatting") {
  CHECK(format_sig(0.5, 17) == "0.5");
  CHECK(format_sig(1.0 / 3.0, 17) == "0.33333333333333331");
  CHECK(format_sig(1.0 / 3.0, 12) == "0.333333333333");
  CHECK(format_sig(-1234.5, 12) == "-1234.5");
}

TEST_CASE("schwarz demo report text") {
  const std::string text = schwarz_report_text(schwarz_demo());
  CHECK(text.find("beta = alpha^2") != std::string::npos);
  CHECK(text.find("-1/2") != std::string::npos);
  CHECK(text.find("z = 1") != std::string::npos);
  CHECK(text.find("orthogonal") != std::string::npos);
  CHECK(text.find("overall: PASS") != std::string::npos);
  // six verdict lines, all passing
  std::size_t count = 0;
  for (std::size_t at = text.find("verdict: PASS"); at != std::string::npos;
       at = text.find("verdict: PASS", at + 1)) {
    ++count;
  }
  CHECK(count == 6);
}
