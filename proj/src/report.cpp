#include "cliffgrad/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cliffgrad/errors.hpp"

namespace cliffgrad {

namespace {

using nlohmann::json;

constexpr int kJsonDigits = 17;
constexpr int kTableDigits = 12;

void append_number(std::string& out, double v, int digits = kJsonDigits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  out += buf;
}

void append_vec(std::string& out, const std::vector<double>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    append_number(out, xs[i]);
  }
  out += ']';
}

void append_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
}

std::vector<double> vec_components(const std::optional<VecN>& v) {
  return v ? v->components() : std::vector<double>{};
}

std::string row_status(const ConvergenceRow& row) {
  if (row.naive_status == "ok" && row.mean_status == "ok") return "ok";
  if (row.naive_status == "degenerate") return "degenerate";
  if (row.naive_status != "ok") return "domain-error";
  return "mean-" + row.mean_status;
}

VecN vec_from_json(const json& arr, const char* what) {
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(std::string(what) + ": expected a coordinate array");
  }
  VecN v(static_cast<int>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ConfigError(std::string(what) + ": non-numeric coordinate");
    }
    v[static_cast<int>(i)] = arr[i].get<double>();
  }
  return v;
}

}  // namespace

std::string format_sig(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

MeshFile parse_mesh_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mesh file: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("mesh file: expected an object");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) {
    throw ConfigError("mesh file: missing integer 'dimension'");
  }
  MeshFile out;
  out.mesh.dim = doc["dimension"].get<int>();
  if (out.mesh.dim < 1 || out.mesh.dim > kMaxDim) {
    throw ConfigError("mesh file: dimension outside [1, " +
                      std::to_string(kMaxDim) + "]");
  }
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw ConfigError("mesh file: missing 'vertices' array");
  }
  for (const auto& row : doc["vertices"]) {
    VecN v = vec_from_json(row, "mesh vertex");
    if (v.dim() != out.mesh.dim) {
      throw ConfigError("mesh file: vertex dimension mismatch");
    }
    out.mesh.vertices.push_back(std::move(v));
  }
  if (!doc.contains("cells") || !doc["cells"].is_array()) {
    throw ConfigError("mesh file: missing 'cells' array");
  }
  for (const auto& row : doc["cells"]) {
    if (!row.is_array()) throw ConfigError("mesh file: cell is not an array");
    std::vector<int> cell;
    for (const auto& idx : row) {
      if (!idx.is_number_integer()) {
        throw ConfigError("mesh file: non-integer cell index");
      }
      cell.push_back(idx.get<int>());
    }
    out.mesh.cells.push_back(std::move(cell));
  }
  if (doc.contains("values") && !doc["values"].is_null()) {
    if (!doc["values"].is_array()) {
      throw ConfigError("mesh file: 'values' must be an array");
    }
    std::vector<double> values;
    for (const auto& v : doc["values"]) {
      if (!v.is_number()) throw ConfigError("mesh file: non-numeric value");
      values.push_back(v.get<double>());
    }
    if (values.size() != out.mesh.vertices.size()) {
      throw ConfigError("mesh file: one value per vertex required");
    }
    out.values = std::move(values);
  }
  if (doc.contains("field") && !doc["field"].is_null()) {
    if (!doc["field"].is_string()) {
      throw ConfigError("mesh file: 'field' must be a string");
    }
    out.field_text = doc["field"].get<std::string>();
  }
  if (out.values && out.field_text) {
    throw ConfigError("mesh file: supply either 'values' or 'field', not both");
  }
  return out;
}

MeshFile load_mesh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mesh_json(buf.str());
}

std::string sweep_csv(const SweepReport& report) {
  const int dim = report.center.empty()
                      ? (report.rows.empty() || !report.rows.front().r_mean
                             ? 0
                             : report.rows.front().r_mean->dim())
                      : static_cast<int>(report.center.size());
  std::string out = "h,tau";
  for (int i = 1; i <= dim; ++i) out += ",r_naive_x" + std::to_string(i);
  for (int i = 1; i <= dim; ++i) out += ",r_mean_x" + std::to_string(i);
  out += ",err_naive,err_mean,status\n";
  for (const ConvergenceRow& row : report.rows) {
    append_number(out, row.h);
    out += ',';
    append_number(out, row.tau);
    for (int i = 0; i < dim; ++i) {
      out += ',';
      if (row.r_naive) append_number(out, (*row.r_naive)[i]);
    }
    for (int i = 0; i < dim; ++i) {
      out += ',';
      if (row.r_mean) append_number(out, (*row.r_mean)[i]);
    }
    out += ',';
    if (row.r_naive) append_number(out, row.err_naive);
    out += ',';
    if (row.r_mean) append_number(out, row.err_mean);
    out += ',';
    out += row_status(row);
    out += '\n';
  }
  return out;
}

std::string sweep_json(const SweepReport& report) {
  std::string out = "{\n  \"command\": \"converge\",\n  \"field\": ";
  append_string(out, report.field);
  out += ",\n  \"family\": ";
  append_string(out, report.family);
  out += ",\n  \"center\": ";
  append_vec(out, report.center);
  out += ",\n  \"seed\": " + std::to_string(report.seed);
  out += ",\n  \"rows\": [";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ConvergenceRow& row = report.rows[i];
    out += i ? ",\n    {" : "\n    {";
    out += "\"h\": ";
    append_number(out, row.h);
    out += ", \"tau\": ";
    append_number(out, row.tau);
    out += ", \"r_naive\": ";
    if (row.r_naive) {
      append_vec(out, vec_components(row.r_naive));
    } else {
      out += "null";
    }
    out += ", \"r_mean\": ";
    if (row.r_mean) {
      append_vec(out, vec_components(row.r_mean));
    } else {
      out += "null";
    }
    out += ", \"err_naive\": ";
    if (row.r_naive) {
      append_number(out, row.err_naive);
    } else {
      out += "null";
    }
    out += ", \"err_mean\": ";
    if (row.r_mean) {
      append_number(out, row.err_mean);
    } else {
      out += "null";
    }
    out += ", \"naive_status\": ";
    append_string(out, row.naive_status);
    out += ", \"mean_status\": ";
    append_string(out, row.mean_status);
    out += '}';
  }
  out += "\n  ]\n}\n";
  return out;
}

SweepReport parse_sweep_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep report: ") + e.what());
  }
  SweepReport out;
  out.field = doc.at("field").get<std::string>();
  out.family = doc.at("family").get<std::string>();
  out.center = doc.at("center").get<std::vector<double>>();
  out.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& jrow : doc.at("rows")) {
    ConvergenceRow row;
    row.h = jrow.at("h").get<double>();
    row.tau = jrow.at("tau").get<double>();
    if (!jrow.at("r_naive").is_null()) {
      row.r_naive = vec_from_json(jrow["r_naive"], "sweep row");
      row.err_naive = jrow.at("err_naive").get<double>();
    }
    if (!jrow.at("r_mean").is_null()) {
      row.r_mean = vec_from_json(jrow["r_mean"], "sweep row");
      row.err_mean = jrow.at("err_mean").get<double>();
    }
    row.naive_status = jrow.at("naive_status").get<std::string>();
    row.mean_status = jrow.at("mean_status").get<std::string>();
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

std::string estimator_name(bool naive_only) {
  return naive_only ? "naive (no mirror samples)" : "mean";
}

}  // namespace

std::string mesh_csv(const MeshReport& report) {
  const int dim =
      report.cells.empty() ? 0 : report.cells.front().centroid.dim();
  std::string out = "cell";
  for (int i = 1; i <= dim; ++i) out += ",centroid_x" + std::to_string(i);
  for (int i = 1; i <= dim; ++i) out += ",r_x" + std::to_string(i);
  out += ",tau,estimator,status\n";
  for (const CellGradient& cell : report.cells) {
    out += std::to_string(cell.cell);
    for (int i = 0; i < dim; ++i) {
      out += ',';
      append_number(out, cell.centroid[i]);
    }
    for (int i = 0; i < dim; ++i) {
      out += ',';
      if (cell.gradient) append_number(out, (*cell.gradient)[i]);
    }
    out += ',';
    append_number(out, cell.tau);
    out += ',';
    out += estimator_name(cell.naive_only);
    out += ',';
    out += cell.status;
    out += '\n';
  }
  return out;
}

std::string mesh_json(const MeshReport& report) {
  std::string out = "{\n  \"command\": \"meshgrad\",\n  \"source\": ";
  append_string(out, report.source);
  out += ",\n  \"estimator\": ";
  append_string(out, estimator_name(report.naive_only));
  out += ",\n  \"rows\": [";
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const CellGradient& cell = report.cells[i];
    out += i ? ",\n    {" : "\n    {";
    out += "\"cell\": " + std::to_string(cell.cell);
    out += ", \"centroid\": ";
    append_vec(out, cell.centroid.components());
    out += ", \"r\": ";
    if (cell.gradient) {
      append_vec(out, cell.gradient->components());
    } else {
      out += "null";
    }
    out += ", \"tau\": ";
    append_number(out, cell.tau);
    out += ", \"status\": ";
    append_string(out, cell.status);
    out += '}';
  }
  out += "\n  ]\n}\n";
  return out;
}

MeshReport parse_mesh_report_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mesh report: ") + e.what());
  }
  MeshReport out;
  out.source = doc.at("source").get<std::string>();
  out.naive_only =
      doc.at("estimator").get<std::string>() != "mean";
  for (const auto& jrow : doc.at("rows")) {
    CellGradient cell{jrow.at("cell").get<int>(),
                      vec_from_json(jrow.at("centroid"), "mesh row"),
                      {},
                      jrow.at("tau").get<double>(),
                      jrow.at("status").get<std::string>(),
                      out.naive_only};
    if (!jrow.at("r").is_null()) {
      cell.gradient = vec_from_json(jrow["r"], "mesh row");
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

std::string schwarz_report_text(const SchwarzDemoReport& report) {
  std::ostringstream os;
  os << "Secant planes of f(x, y) = sqrt(1 - x^2) through (0,0), "
        "(-alpha, beta), (alpha, beta)\n";
  for (const SchwarzFamilyResult& fam : report.families) {
    os << "\nfamily " << fam.label << "\n";
    os << "  alpha          r_f.e2         |r_f|          |r_mean|\n";
    for (const ConvergenceRow& row : fam.rows) {
      os << "  " << format_sig(row.h, 6);
      const std::string coeff =
          row.r_naive ? format_sig((*row.r_naive)[1], kTableDigits) : "-";
      const std::string naive =
          row.r_naive ? format_sig(row.r_naive->norm(), kTableDigits) : "-";
      const std::string mean =
          row.r_mean ? format_sig(row.r_mean->norm(), kTableDigits) : "-";
      os << "  " << coeff;
      for (std::size_t pad = coeff.size(); pad < 13; ++pad) os << ' ';
      os << "  " << naive;
      for (std::size_t pad = naive.size(); pad < 13; ++pad) os << ' ';
      os << "  " << mean << "\n";
    }
    os << "  verdict: " << (fam.naive_verdict ? "PASS" : "FAIL") << " -- "
       << fam.verdict_text << "\n";
    os << "  verdict: " << (fam.mean_verdict ? "PASS" : "FAIL")
       << " -- mean secant plane -> tangent plane (|r_mean| = "
       << format_sig(fam.final_mean_norm, 3) << " at alpha = "
       << format_sig(fam.rows.back().h, 3) << ")\n";
  }
  os << "\noverall: " << (report.all_pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace cliffgrad
