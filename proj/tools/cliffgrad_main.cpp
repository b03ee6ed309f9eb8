// cliffgrad: simplex-based gradient estimation from the command line.
//
// Subcommands:
//   grad      - one mean-ratio gradient estimate on a given simplex
//   converge  - contraction sweep comparing the naive and mean estimators
//   schwarz   - the three secant-plane families of sqrt(1 - x^2)
//   detcheck  - determinant-as-Clifford-quotient cross-check
//   meshgrad  - per-cell gradients over a JSON mesh
//
// Exit codes: 0 success, 1 verdict failure, 2 degenerate geometry,
// 3 field domain error, 4 config/parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cliffgrad/errors.hpp"
#include "cliffgrad/gradlab.hpp"
#include "cliffgrad/report.hpp"

namespace {

using namespace cliffgrad;

constexpr int kExitVerdict = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitDomain = 3;
constexpr int kExitConfig = 4;

std::vector<double> parse_csv_numbers(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::size_t at = 0;
  while (at <= text.size()) {
    std::size_t next = text.find(',', at);
    if (next == std::string::npos) next = text.size();
    const std::string tok = text.substr(at, next - at);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || (end && *end != '\0')) {
      throw ConfigError("bad number '" + tok + "' in " + what);
    }
    out.push_back(v);
    at = next + 1;
    if (next == text.size()) break;
  }
  if (out.empty()) throw ConfigError("empty coordinate list in " + what);
  return out;
}

VecN parse_point(const std::string& text, const std::string& what) {
  const auto xs = parse_csv_numbers(text, what);
  VecN p(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) p[static_cast<int>(i)] = xs[i];
  return p;
}

// "x,y;x,y;..." inline, or "@path" to read the same text from a file.
Simplex parse_simplex_spec(std::string spec) {
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1), std::ios::binary);
    if (!in) throw ConfigError("cannot open simplex file '" + spec.substr(1) + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    spec = buf.str();
    while (!spec.empty() && (spec.back() == '\n' || spec.back() == '\r')) {
      spec.pop_back();
    }
  }
  std::vector<VecN> vertices;
  std::size_t at = 0;
  while (at <= spec.size()) {
    std::size_t next = spec.find(';', at);
    if (next == std::string::npos) next = spec.size();
    vertices.push_back(parse_point(spec.substr(at, next - at), "simplex"));
    at = next + 1;
    if (next == spec.size()) break;
  }
  return Simplex::from_vertices(std::move(vertices));
}

SimplexFamily make_family(const std::string& kind, const VecN& center,
                          std::uint64_t seed, double aspect) {
  if (kind == "regular") return SimplexFamily::regular(center.dim(), center);
  if (kind == "random-ill-shaped") {
    return SimplexFamily::random_ill_shaped(center.dim(), center, seed, aspect);
  }
  if (kind == "schwarz-linear") {
    return SimplexFamily::schwarz(FamilyKind::kSchwarzLinear, center);
  }
  if (kind == "schwarz-quadratic") {
    return SimplexFamily::schwarz(FamilyKind::kSchwarzQuadratic, center);
  }
  if (kind == "schwarz-cubic") {
    return SimplexFamily::schwarz(FamilyKind::kSchwarzCubic, center);
  }
  throw ConfigError("unknown family '" + kind + "'");
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  out << text;
}

int cmd_grad(const std::string& field_spec, const std::string& simplex_spec,
             bool as_json) {
  Simplex s = parse_simplex_spec(simplex_spec);
  ScalarField field = parse_field_spec(field_spec, s.dim());
  GradientEstimate est = estimate_gradient(field, s);
  if (as_json) {
    std::string out = "{\n  \"command\": \"grad\",\n  \"field\": \"" +
                      field.name() + "\",\n  \"r\": [";
    for (int i = 0; i < est.value.dim(); ++i) {
      out += (i ? ", " : "") + format_sig(est.value[i], 17);
    }
    out += "],\n  \"tau\": " + format_sig(est.simplex_tau, 17) +
           ",\n  \"evaluations\": " + std::to_string(est.evaluations) +
           "\n}\n";
    std::cout << out;
    return 0;
  }
  std::cout << "field: " << field.name() << "\n";
  std::cout << "r_mean:";
  for (int i = 0; i < est.value.dim(); ++i) {
    std::cout << ' ' << format_sig(est.value[i], 12);
  }
  std::cout << "\ntau: " << format_sig(est.simplex_tau, 12) << "\n";
  std::cout << "field evaluations: " << est.evaluations << "\n";
  return 0;
}

int cmd_converge(const std::string& field_spec, const std::string& family_kind,
                 const std::string& center_text, double h_max, double h_min,
                 int per_decade, std::uint64_t seed, double aspect,
                 const std::string& format, const std::string& out_path) {
  const VecN center = parse_point(center_text, "--center");
  ScalarField field = parse_field_spec(field_spec, center.dim());
  SimplexFamily family = make_family(family_kind, center, seed, aspect);
  SweepReport report;
  report.field = field.name();
  report.family = family.name();
  report.center = center.components();
  report.seed = seed;
  report.rows =
      convergence_sweep(field, family, scale_grid(h_max, h_min, per_decade));
  if (format == "csv") {
    write_output(sweep_csv(report), out_path);
  } else if (format == "json") {
    write_output(sweep_json(report), out_path);
  } else {
    throw ConfigError("unknown format '" + format + "'");
  }
  return 0;
}

int cmd_schwarz() {
  SchwarzDemoReport report = schwarz_demo();
  std::cout << schwarz_report_text(report);
  return report.all_pass ? 0 : kExitVerdict;
}

int cmd_detcheck(int k, int trials, std::uint64_t seed) {
  DetCheckReport report = det_check(k, trials, seed);
  std::cout << "k = " << report.k << ", trials = " << report.trials
            << ", seed = " << report.seed << "\n";
  std::cout << "max relative deviation from the elimination oracle: "
            << format_sig(report.max_rel_dev, 6) << "\n";
  const bool pass = report.max_rel_dev <= 1e-10;
  std::cout << (pass ? "PASS" : "FAIL") << " (tolerance 1e-10)\n";
  return pass ? 0 : kExitVerdict;
}

int cmd_meshgrad(const std::string& mesh_path, const std::string& format,
                 const std::string& out_path) {
  MeshFile mf = load_mesh_file(mesh_path);
  MeshReport report;
  report.source = mesh_path;
  if (mf.field_text) {
    ScalarField field = parse_field_spec(*mf.field_text, mf.mesh.dim);
    report.naive_only = false;
    report.cells = mesh_gradients(mf.mesh, field);
  } else if (mf.values) {
    report.naive_only = true;
    report.cells = mesh_gradients(mf.mesh, *mf.values);
  } else {
    throw ConfigError("mesh file needs 'field' or 'values' for gradients");
  }
  if (format == "csv") {
    write_output(mesh_csv(report), out_path);
  } else if (format == "json") {
    write_output(mesh_json(report), out_path);
  } else {
    throw ConfigError("unknown format '" + format + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinate-free simplex gradient estimation"};
  app.require_subcommand(1);

  std::string field_spec, simplex_spec, center_text = "0,0";
  std::string family_kind = "regular", format = "csv", out_path, mesh_path;
  double h_max = 1e-1, h_min = 1e-4, aspect = 100.0;
  int per_decade = 4, det_k = 3, det_trials = 1000;
  std::uint64_t seed = 1;
  bool as_json = false;

  auto* grad = app.add_subcommand("grad", "gradient estimate on one simplex");
  grad->add_option("--field", field_spec, "builtin spec or expression")
      ->required();
  grad->add_option("--simplex", simplex_spec,
                   "vertices 'x,y;x,y;...' or @file")
      ->required();
  grad->add_flag("--json", as_json, "emit JSON instead of text");

  auto* converge =
      app.add_subcommand("converge", "contraction sweep of both estimators");
  converge->add_option("--field", field_spec, "builtin spec with a gradient")
      ->required();
  converge->add_option("--family", family_kind,
                       "regular | random-ill-shaped | schwarz-linear | "
                       "schwarz-quadratic | schwarz-cubic");
  converge->add_option("--center", center_text, "contraction point");
  converge->add_option("--h-max", h_max, "largest scale");
  converge->add_option("--h-min", h_min, "smallest scale");
  converge->add_option("--per-decade", per_decade, "grid points per decade");
  converge->add_option("--seed", seed, "seed for random families");
  converge->add_option("--aspect", aspect, "ill-shapedness factor");
  converge->add_option("--format", format, "csv | json");
  converge->add_option("--out", out_path, "output file (default stdout)");

  app.add_subcommand("schwarz",
                     "secant-plane paradox families of sqrt(1 - x^2)");

  auto* detcheck =
      app.add_subcommand("detcheck", "determinant quotient cross-check");
  detcheck->add_option("--k", det_k, "matrix size, 1..8");
  detcheck->add_option("--trials", det_trials, "random matrices");
  detcheck->add_option("--seed", seed, "rng seed");

  auto* meshgrad = app.add_subcommand("meshgrad", "per-cell mesh gradients");
  meshgrad->add_option("--mesh", mesh_path, "mesh JSON file")->required();
  meshgrad->add_option("--format", format, "csv | json");
  meshgrad->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("grad")) {
      return cmd_grad(field_spec, simplex_spec, as_json);
    }
    if (app.got_subcommand("converge")) {
      return cmd_converge(field_spec, family_kind, center_text, h_max, h_min,
                          per_decade, seed, aspect, format, out_path);
    }
    if (app.got_subcommand("schwarz")) {
      return cmd_schwarz();
    }
    if (app.got_subcommand("detcheck")) {
      return cmd_detcheck(det_k, det_trials, seed);
    }
    if (app.got_subcommand("meshgrad")) {
      return cmd_meshgrad(mesh_path, format, out_path);
    }
  } catch (const DegenerateSimplex& e) {
    std::cerr << "degenerate simplex: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const DegenerateInput& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const DomainError& e) {
    std::cerr << "field domain error: " << e.what();
    if (!e.point.empty()) {
      std::cerr << " at (";
      for (std::size_t i = 0; i < e.point.size(); ++i) {
        std::cerr << (i ? ", " : "") << format_sig(e.point[i], 12);
      }
      std::cerr << ")";
    }
    std::cerr << "\n";
    return kExitDomain;
  } catch (const MissingSample& e) {
    std::cerr << "missing sample: " << e.what() << "\n";
    return kExitDomain;
  } catch (const SyntaxError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
