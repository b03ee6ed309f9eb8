#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cliffgrad/field.hpp"
#include "cliffgrad/gradlab.hpp"

namespace cliffgrad {

// Fixed-width significant-digit formatting. 17 digits round-trip a double
// exactly; 12 keep human tables readable.
std::string format_sig(double v, int digits);

// Parsed mesh document. Exactly one of `values` / `field_text` may be
// present for gradient runs.
struct MeshFile {
  SimplicialMesh mesh;
  std::optional<std::vector<double>> values;
  std::optional<std::string> field_text;
};

// Loads the JSON mesh schema {dimension, vertices, cells, values?, field?}.
// Throws ConfigError on schema violations, ShapeError on bad geometry.
MeshFile parse_mesh_json(const std::string& text);
MeshFile load_mesh_file(const std::string& path);

struct SweepReport {
  std::string field;
  std::string family;
  std::vector<double> center;
  std::uint64_t seed = 0;
  std::vector<ConvergenceRow> rows;
};

// RFC-4180-style CSV: header row, '.' decimal separator, no locale,
// byte-deterministic. Columns: h, tau, r_naive_*, r_mean_*, err_naive,
// err_mean, status. Unavailable entries are empty cells.
std::string sweep_csv(const SweepReport& report);

// Canonical JSON document. Numbers are printed with 17 significant digits;
// re-parsing and re-serialising is byte-identical.
std::string sweep_json(const SweepReport& report);
SweepReport parse_sweep_json(const std::string& text);

struct MeshReport {
  std::string source;
  bool naive_only = false;
  std::vector<CellGradient> cells;
};

// Columns: cell, centroid_*, r_*, tau, estimator, status.
std::string mesh_csv(const MeshReport& report);
std::string mesh_json(const MeshReport& report);
MeshReport parse_mesh_report_json(const std::string& text);

// Human-readable demo table with the per-family verdict lines.
std::string schwarz_report_text(const SchwarzDemoReport& report);

}  // namespace cliffgrad
