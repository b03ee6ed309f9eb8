#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cliffgrad/field.hpp"
#include "cliffgrad/quotients.hpp"
#include "cliffgrad/simplex.hpp"

namespace cliffgrad {

enum class FamilyKind {
  kRegular,
  kSchwarzLinear,     // b = (-a, a),   c = (a, a)
  kSchwarzQuadratic,  // b = (-a, a^2), c = (a, a^2)
  kSchwarzCubic,      // b = (-a, a^3), c = (a, a^3)
  kRandomIllShaped,
};

// A family of simplices contracting to `center` as the scale h drops to 0.
// Generators keep every vertex within h/10 of the center, so the scale reads
// as the diameter of the shrinking neighbourhood rather than of the simplex.
class SimplexFamily {
 public:
  static SimplexFamily regular(int dim, VecN center);
  static SimplexFamily schwarz(FamilyKind kind, VecN center);
  // One ill-shaped simplex drawn from `seed` (vertices in a ball, squashed
  // by `aspect` along a random direction), then contracted self-similarly.
  static SimplexFamily random_ill_shaped(int dim, VecN center,
                                         std::uint64_t seed,
                                         double aspect = 100.0);

  const std::string& name() const { return name_; }
  FamilyKind kind() const { return kind_; }
  const VecN& center() const { return center_; }
  int dim() const { return center_.dim(); }
  Simplex at_scale(double h) const;

 private:
  SimplexFamily(std::string name, FamilyKind kind, VecN center,
                std::function<Simplex(double)> gen);

  std::string name_;
  FamilyKind kind_;
  VecN center_;
  std::function<Simplex(double)> gen_;
};

struct GradientEstimate {
  VecN value;              // mean ratio
  double simplex_tau;
  double chain_min_diff;   // smallest |abar_i - a_i|
  double residual_grades;  // off-grade-1 residual of the quotient route
  int evaluations;         // field evaluations used (2n)
};

// Mean-ratio gradient estimate with diagnostics. Exactly 2n field
// evaluations: n+1 vertices and n-1 mirrored points. Throws
// DegenerateSimplex or DomainError (carrying the offending point).
GradientEstimate estimate_gradient(const ScalarField& field, const Simplex& s);

struct ConvergenceRow {
  double h = 0.0;
  double tau = 0.0;
  std::optional<VecN> r_naive;
  std::optional<VecN> r_mean;
  std::string naive_status = "ok";  // ok | degenerate | domain-error
  std::string mean_status = "ok";
  double err_naive = 0.0;  // meaningful only when r_naive is set
  double err_mean = 0.0;
};

// Decreasing geometric grid from h_max to h_min.
std::vector<double> scale_grid(double h_max, double h_min,
                               int points_per_decade);

// One row per scale, comparing both estimators against the field's analytic
// gradient at the family's center. Per-row failures become row markers;
// the sweep itself never aborts. Requires an analytic gradient.
std::vector<ConvergenceRow> convergence_sweep(const ScalarField& field,
                                              const SimplexFamily& family,
                                              const std::vector<double>& scales);

// Least-squares slope of log10(err_mean) against log10(h), ignoring rows
// whose error sits at the rounding floor. Returns nullopt when every row is
// at the floor (already converged).
std::optional<double> fit_loglog_slope(const std::vector<ConvergenceRow>& rows,
                                       double floor = 1e-13);

struct SchwarzFamilyResult {
  std::string label;            // e.g. "beta = alpha^2"
  FamilyKind kind;
  std::vector<ConvergenceRow> rows;
  double final_coeff;           // r_f . e2 at the smallest alpha
  double final_naive_norm;
  double final_mean_norm;
  bool naive_verdict;           // the family's expected naive behaviour
  bool mean_verdict;            // |rbar| <= 1e-6 at the smallest alpha
  std::string verdict_text;
};

struct SchwarzDemoReport {
  std::vector<SchwarzFamilyResult> families;
  bool all_pass = false;
};

// Contracts the three secant-plane families of f = sqrt(1 - x1^2) through
// (0,0), (-alpha, beta), (alpha, beta) down to alpha = 1e-3 and checks:
// beta = alpha   -> plane z = 1 (tangent), naive coefficient -> 0;
// beta = alpha^2 -> plane z = 1 - y/2, coefficient -> -1/2 (not tangent);
// beta = alpha^3 -> |r_f| blows up (plane turns orthogonal);
// in all three the mean ratio stays at the true gradient 0.
SchwarzDemoReport schwarz_demo();

struct SimplicialMesh {
  int dim = 0;
  std::vector<VecN> vertices;
  std::vector<std::vector<int>> cells;  // n+1 vertex indices each
};

struct CellGradient {
  int cell = 0;
  VecN centroid;
  std::optional<VecN> gradient;
  double tau = 0.0;
  std::string status = "ok";  // ok | degenerate | domain-error
  bool naive_only = false;    // tabulated input: no mirror samples
};

// Independent per-cell estimates; degenerate cells and domain failures are
// flagged rows, not fatal. Throws ShapeError (with cell index) on malformed
// cells.
std::vector<CellGradient> mesh_gradients(const SimplicialMesh& mesh,
                                         const ScalarField& field);

// Tabulated per-vertex values: falls back to the plain secant ratio since
// mirror samples are unavailable, and marks rows naive_only.
std::vector<CellGradient> mesh_gradients(const SimplicialMesh& mesh,
                                         const std::vector<double>& values);

struct DetCheckReport {
  int k = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double max_rel_dev = 0.0;
};

// Compares det_via_quotient with an elimination-based determinant on random
// matrices. Throws ConfigError for k outside [1, 8].
DetCheckReport det_check(int k, int trials, std::uint64_t seed);

// Number of worker threads honouring the CLIFFGRAD_THREADS cap (>= 1).
int worker_thread_count();

// Evaluates fn(i) for i in [0, count) with up to `threads` workers, writing
// each result into its slot; output order matches a serial run.
void parallel_for_index(int count, int threads,
                        const std::function<void(int)>& fn);

}  // namespace cliffgrad
