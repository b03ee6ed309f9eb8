#include "cliffgrad/gradlab.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>
#include <utility>

#include "cliffgrad/errors.hpp"
#include "cliffgrad/reflections.hpp"

namespace cliffgrad {

namespace {

constexpr double kFamilyRadiusFactor = 0.1;  // vertex radius per unit scale

std::vector<VecN> regular_simplex_shape(int dim) {
  // Helmert coordinates of the n+1 centred unit vectors of R^{n+1}: pairwise
  // equidistant, centroid zero. Scaled to the unit circumsphere afterwards.
  std::vector<VecN> verts;
  verts.reserve(static_cast<std::size_t>(dim + 1));
  const double scale = std::sqrt((dim + 1.0) / dim);
  for (int i = 1; i <= dim + 1; ++i) {
    VecN v(dim);
    for (int k = 1; k <= dim; ++k) {
      const double denom = std::sqrt(static_cast<double>(k) * (k + 1));
      double c = 0.0;
      if (i <= k) {
        c = 1.0 / denom;
      } else if (i == k + 1) {
        c = -static_cast<double>(k) / denom;
      }
      v[k - 1] = c * scale;
    }
    verts.push_back(v);
  }
  // fixed rotation in the (e1, e2) plane so nothing stays axis-aligned
  if (dim >= 2) {
    const double ang = 0.4;
    const double cs = std::cos(ang), sn = std::sin(ang);
    for (VecN& v : verts) {
      const double x = v[0], y = v[1];
      v[0] = cs * x - sn * y;
      v[1] = sn * x + cs * y;
    }
  }
  return verts;
}

VecN ball_point(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    VecN p(dim);
    for (int i = 0; i < dim; ++i) p[i] = u(rng);
    if (p.norm_sq() <= 1.0) return p;
  }
}

double shape_quality(const Simplex& s) {
  double fact = 1.0;
  for (int i = 2; i <= s.dim(); ++i) fact *= i;
  return std::fabs(s.tau()) * fact / std::pow(s.diameter(), s.dim());
}

}  // namespace

SimplexFamily::SimplexFamily(std::string name, FamilyKind kind, VecN center,
                             std::function<Simplex(double)> gen)
    : name_(std::move(name)),
      kind_(kind),
      center_(std::move(center)),
      gen_(std::move(gen)) {}

Simplex SimplexFamily::at_scale(double h) const {
  if (!(h > 0.0)) throw ConfigError("simplex family: scale must be positive");
  return gen_(h);
}

SimplexFamily SimplexFamily::regular(int dim, VecN center) {
  if (center.dim() != dim) throw ShapeError("regular family: center dimension");
  auto shape = regular_simplex_shape(dim);
  auto gen = [shape, center](double h) {
    std::vector<VecN> vs;
    vs.reserve(shape.size());
    for (const VecN& v : shape) {
      vs.push_back(center + (kFamilyRadiusFactor * h) * v);
    }
    return Simplex::from_vertices(std::move(vs));
  };
  return SimplexFamily("regular", FamilyKind::kRegular, std::move(center),
                       std::move(gen));
}

SimplexFamily SimplexFamily::schwarz(FamilyKind kind, VecN center) {
  if (center.dim() != 2) throw ShapeError("schwarz families live in E_2");
  int power = 0;
  std::string name;
  switch (kind) {
    case FamilyKind::kSchwarzLinear:
      power = 1;
      name = "schwarz-linear";
      break;
    case FamilyKind::kSchwarzQuadratic:
      power = 2;
      name = "schwarz-quadratic";
      break;
    case FamilyKind::kSchwarzCubic:
      power = 3;
      name = "schwarz-cubic";
      break;
    default:
      throw ConfigError("SimplexFamily::schwarz: not a schwarz kind");
  }
  auto gen = [center, power](double alpha) {
    const double beta = std::pow(alpha, power);
    return Simplex::from_vertices({center,
                                   center + VecN{-alpha, beta},
                                   center + VecN{alpha, beta}});
  };
  return SimplexFamily(std::move(name), kind, std::move(center),
                       std::move(gen));
}

SimplexFamily SimplexFamily::random_ill_shaped(int dim, VecN center,
                                               std::uint64_t seed,
                                               double aspect) {
  if (center.dim() != dim) {
    throw ShapeError("ill-shaped family: center dimension");
  }
  if (!(aspect >= 1.0)) {
    throw ConfigError("ill-shaped family: aspect must be >= 1");
  }
  // Draw one ill-shaped unit-scale simplex, then contract it self-similarly:
  // the whole family shares its (bad) shape, so the sweep sees a clean rate
  // instead of per-scale shape noise.
  std::mt19937_64 rng(seed);
  std::vector<VecN> shape;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<VecN> pts;
    for (int i = 0; i <= dim; ++i) pts.push_back(ball_point(rng, dim));
    VecN axis = ball_point(rng, dim);
    while (axis.norm() < 0.1) axis = ball_point(rng, dim);
    axis *= 1.0 / axis.norm();
    for (VecN& p : pts) {
      p -= ((1.0 - 1.0 / aspect) * dot(p, axis)) * axis;
    }
    Simplex s = Simplex::from_vertices(pts);
    // degenerate (not merely ill-conditioned) draws are rejected
    if (shape_quality(s) > 1e-8) {
      shape = std::move(pts);
      break;
    }
  }
  if (shape.empty()) {
    throw DegenerateSimplex("ill-shaped family: could not draw a usable shape");
  }
  auto gen = [shape, center](double h) {
    std::vector<VecN> vs;
    vs.reserve(shape.size());
    for (const VecN& p : shape) {
      vs.push_back(center + (kFamilyRadiusFactor * h) * p);
    }
    return Simplex::from_vertices(std::move(vs));
  };
  return SimplexFamily("random-ill-shaped", FamilyKind::kRandomIllShaped,
                       std::move(center), std::move(gen));
}

GradientEstimate estimate_gradient(const ScalarField& field, const Simplex& s) {
  if (s.dim() != field.dim()) {
    throw ShapeError("estimate_gradient: field/simplex dimension mismatch");
  }
  SampledSimplex sampled = SampledSimplex::from_field(s, field);
  const Multivector q = geometric_product(mean_multi_difference(sampled),
                                          invert_blade(s.delta()));
  GradientEstimate out{mean_ratio(sampled), s.tau(),
                       sampled.chain().min_diff_norm(),
                       q.norm_except_grade(1), 2 * s.dim()};
  return out;
}

std::vector<double> scale_grid(double h_max, double h_min,
                               int points_per_decade) {
  if (!(h_max > h_min) || !(h_min > 0.0)) {
    throw ConfigError("scale grid: need h_max > h_min > 0");
  }
  if (points_per_decade < 2) {
    throw ConfigError("scale grid: need at least 2 points per decade");
  }
  const double decades = std::log10(h_max / h_min);
  const int steps = std::max(1, static_cast<int>(
                                    std::ceil(decades * points_per_decade)));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps + 1));
  const double l0 = std::log10(h_max);
  const double l1 = std::log10(h_min);
  for (int i = 0; i <= steps; ++i) {
    out.push_back(std::pow(10.0, l0 + (l1 - l0) * i / steps));
  }
  out.front() = h_max;
  out.back() = h_min;
  return out;
}

std::vector<ConvergenceRow> convergence_sweep(
    const ScalarField& field, const SimplexFamily& family,
    const std::vector<double>& scales) {
  if (!field.has_analytic_gradient()) {
    throw ConfigError("convergence sweep needs a field with an analytic "
                      "gradient ('" + field.name() + "' has none)");
  }
  if (field.dim() != family.dim()) {
    throw ShapeError("convergence sweep: field/family dimension mismatch");
  }
  const VecN grad0 = field.analytic_gradient(family.center());
  std::vector<ConvergenceRow> rows(scales.size());

  auto run_row = [&](int idx) {
    const double h = scales[static_cast<std::size_t>(idx)];
    ConvergenceRow row;
    row.h = h;
    const Simplex s = family.at_scale(h);
    row.tau = s.tau();
    if (s.degenerate()) {
      row.naive_status = row.mean_status = "degenerate";
      rows[static_cast<std::size_t>(idx)] = std::move(row);
      return;
    }
    std::vector<double> values;
    bool vertices_ok = true;
    for (const VecN& v : s.vertices()) {
      const EvalResult r = field.evaluate(v);
      if (!r.ok()) {
        vertices_ok = false;
        break;
      }
      values.push_back(r.value);
    }
    if (!vertices_ok) {
      row.naive_status = row.mean_status = "domain-error";
      rows[static_cast<std::size_t>(idx)] = std::move(row);
      return;
    }
    row.r_naive = secant_ratio(SampledSimplex::from_values(s, values));
    row.err_naive = (*row.r_naive - grad0).norm();

    MirrorChain chain = build_mirror_chain(s);
    std::vector<double> mirror_values;
    bool mirrors_ok = true;
    for (const VecN& m : chain.mirrored) {
      const EvalResult r = field.evaluate(m);
      if (!r.ok()) {
        mirrors_ok = false;
        break;
      }
      mirror_values.push_back(r.value);
    }
    if (!mirrors_ok) {
      row.mean_status = "domain-error";
    } else {
      row.r_mean = mean_ratio(SampledSimplex::from_values_with_mirrors(
          s, values, std::move(mirror_values)));
      row.err_mean = (*row.r_mean - grad0).norm();
    }
    rows[static_cast<std::size_t>(idx)] = std::move(row);
  };

  parallel_for_index(static_cast<int>(scales.size()), worker_thread_count(),
                     run_row);
  return rows;
}

std::optional<double> fit_loglog_slope(const std::vector<ConvergenceRow>& rows,
                                       double floor) {
  std::vector<std::pair<double, double>> pts;
  for (const ConvergenceRow& row : rows) {
    if (row.mean_status != "ok" || !row.r_mean) continue;
    if (row.err_mean <= floor) continue;
    pts.emplace_back(std::log10(row.h), std::log10(row.err_mean));
  }
  if (pts.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SchwarzDemoReport schwarz_demo() {
  const ScalarField field = schwarz_field();
  const VecN origin{0.0, 0.0};
  const std::vector<double> alphas = scale_grid(0.2, 1e-3, 4);

  SchwarzDemoReport report;
  report.all_pass = true;
  struct Spec {
    FamilyKind kind;
    const char* label;
  };
  const Spec specs[] = {
      {FamilyKind::kSchwarzLinear, "beta = alpha"},
      {FamilyKind::kSchwarzQuadratic, "beta = alpha^2"},
      {FamilyKind::kSchwarzCubic, "beta = alpha^3"},
  };
  for (const Spec& spec : specs) {
    SimplexFamily family = SimplexFamily::schwarz(spec.kind, origin);
    SchwarzFamilyResult res;
    res.label = spec.label;
    res.kind = spec.kind;
    res.rows = convergence_sweep(field, family, alphas);
    const ConvergenceRow& last = res.rows.back();
    res.final_coeff = last.r_naive ? (*last.r_naive)[1] : 0.0;
    res.final_naive_norm = last.r_naive ? last.r_naive->norm() : 0.0;
    res.final_mean_norm = last.r_mean ? last.r_mean->norm() : 0.0;
    switch (spec.kind) {
      case FamilyKind::kSchwarzLinear:
        res.naive_verdict = last.r_naive && res.final_naive_norm <= 1e-3;
        res.verdict_text =
            "secant plane -> z = 1, the tangent plane z=1 at (0,0,1)";
        break;
      case FamilyKind::kSchwarzQuadratic:
        res.naive_verdict =
            last.r_naive && std::fabs(res.final_coeff + 0.5) <= 1e-3;
        res.verdict_text =
            "secant plane -> z = 1 - 1/2 y (limit coefficient -1/2), "
            "not tangent";
        break;
      default:
        res.naive_verdict = last.r_naive && res.final_naive_norm >= 100.0;
        res.verdict_text =
            "secant plane -> y = 0, orthogonal to the tangent plane";
        break;
    }
    res.mean_verdict = last.r_mean && res.final_mean_norm <= 1e-6;
    report.all_pass =
        report.all_pass && res.naive_verdict && res.mean_verdict;
    report.families.push_back(std::move(res));
  }
  return report;
}

namespace {

void check_mesh(const SimplicialMesh& mesh) {
  if (mesh.dim < 1 || mesh.dim > kMaxDim) {
    throw ShapeError("mesh: bad dimension");
  }
  for (const VecN& v : mesh.vertices) {
    if (v.dim() != mesh.dim) throw ShapeError("mesh: vertex dimension");
  }
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& cell = mesh.cells[c];
    if (static_cast<int>(cell.size()) != mesh.dim + 1) {
      throw ShapeError("mesh: cell " + std::to_string(c) + " needs " +
                       std::to_string(mesh.dim + 1) + " vertices");
    }
    for (int idx : cell) {
      if (idx < 0 || idx >= static_cast<int>(mesh.vertices.size())) {
        throw ShapeError("mesh: cell " + std::to_string(c) +
                         " references vertex " + std::to_string(idx));
      }
    }
  }
}

Simplex cell_simplex(const SimplicialMesh& mesh, std::size_t c) {
  std::vector<VecN> vs;
  vs.reserve(mesh.cells[c].size());
  for (int idx : mesh.cells[c]) {
    vs.push_back(mesh.vertices[static_cast<std::size_t>(idx)]);
  }
  return Simplex::from_vertices(std::move(vs));
}

}  // namespace

std::vector<CellGradient> mesh_gradients(const SimplicialMesh& mesh,
                                         const ScalarField& field) {
  check_mesh(mesh);
  if (field.dim() != mesh.dim) {
    throw ShapeError("mesh_gradients: field dimension mismatch");
  }
  std::vector<CellGradient> out(mesh.cells.size(),
                                CellGradient{0, VecN(mesh.dim), {}, 0.0, "", false});
  auto run_cell = [&](int c) {
    const Simplex s = cell_simplex(mesh, static_cast<std::size_t>(c));
    CellGradient cg{c, s.centroid(), {}, s.tau(), "ok", false};
    if (s.degenerate()) {
      cg.status = "degenerate";
    } else {
      try {
        cg.gradient = estimate_gradient(field, s).value;
      } catch (const DomainError&) {
        cg.status = "domain-error";
      }
    }
    out[static_cast<std::size_t>(c)] = std::move(cg);
  };
  parallel_for_index(static_cast<int>(mesh.cells.size()),
                     worker_thread_count(), run_cell);
  return out;
}

std::vector<CellGradient> mesh_gradients(const SimplicialMesh& mesh,
                                         const std::vector<double>& values) {
  check_mesh(mesh);
  if (values.size() != mesh.vertices.size()) {
    throw ShapeError("mesh_gradients: one value per vertex required");
  }
  std::vector<CellGradient> out(mesh.cells.size(),
                                CellGradient{0, VecN(mesh.dim), {}, 0.0, "", true});
  auto run_cell = [&](int c) {
    const Simplex s = cell_simplex(mesh, static_cast<std::size_t>(c));
    CellGradient cg{c, s.centroid(), {}, s.tau(), "ok", true};
    if (s.degenerate()) {
      cg.status = "degenerate";
    } else {
      std::vector<double> cell_values;
      for (int idx : mesh.cells[static_cast<std::size_t>(c)]) {
        cell_values.push_back(values[static_cast<std::size_t>(idx)]);
      }
      cg.gradient =
          secant_ratio(SampledSimplex::from_values(s, std::move(cell_values)));
    }
    out[static_cast<std::size_t>(c)] = std::move(cg);
  };
  parallel_for_index(static_cast<int>(mesh.cells.size()),
                     worker_thread_count(), run_cell);
  return out;
}

DetCheckReport det_check(int k, int trials, std::uint64_t seed) {
  if (k < 1 || k > 8) throw ConfigError("det_check: k must be in [1, 8]");
  if (trials < 1) throw ConfigError("det_check: trials must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // Elimination-based reference, independent of the Clifford route.
  auto det_elim = [k](std::vector<std::vector<double>> m) {
    double det = 1.0;
    for (int col = 0; col < k; ++col) {
      int pivot = col;
      for (int r = col + 1; r < k; ++r) {
        if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
      }
      if (m[pivot][col] == 0.0) return 0.0;
      if (pivot != col) {
        std::swap(m[pivot], m[col]);
        det = -det;
      }
      det *= m[col][col];
      for (int r = col + 1; r < k; ++r) {
        const double f = m[r][col] / m[col][col];
        for (int c = col; c < k; ++c) m[r][c] -= f * m[col][c];
      }
    }
    return det;
  };

  DetCheckReport report{k, trials, seed, 0.0};
  for (int t = 0; t < trials; ++t) {
    std::vector<VecN> rows;
    std::vector<std::vector<double>> m;
    double reference = 0.0;
    // resample near-singular draws: the comparison needs a meaningful
    // relative scale, not a conditioning stress test
    do {
      rows.clear();
      m.clear();
      for (int r = 0; r < k; ++r) {
        VecN v(k);
        for (int c = 0; c < k; ++c) v[c] = u(rng);
        rows.push_back(v);
        m.push_back(v.components());
      }
      reference = det_elim(m);
    } while (std::fabs(reference) < 1e-2);
    const double got = det_via_quotient(rows);
    report.max_rel_dev = std::max(
        report.max_rel_dev, std::fabs(got - reference) / std::fabs(reference));
  }
  return report;
}

int worker_thread_count() {
  const char* env = std::getenv("CLIFFGRAD_THREADS");
  if (!env || !*env) return 1;
  const long n = std::strtol(env, nullptr, 10);
  if (n < 1) return 1;
  return static_cast<int>(std::min<long>(n, 64));
}

void parallel_for_index(int count, int threads,
                        const std::function<void(int)>& fn) {
  if (count <= 0) return;
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace cliffgrad
