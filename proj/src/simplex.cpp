#include "cliffgrad/simplex.hpp"

#include <cmath>
#include <utility>

#include "cliffgrad/errors.hpp"

namespace cliffgrad {

namespace {

Blade difference_blade(const std::vector<VecN>& vertices) {
  std::vector<VecN> diffs;
  diffs.reserve(vertices.size() - 1);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    diffs.push_back(vertices[i] - vertices[0]);
  }
  return Blade(std::move(diffs));
}

}  // namespace

Simplex::Simplex(std::vector<VecN> vertices)
    : dim_(vertices.front().dim()),
      vertices_(std::move(vertices)),
      delta_(difference_blade(vertices_)),
      tau_(0.0),
      diameter_(0.0),
      degenerate_(true) {
  const double fact = [&] {
    double f = 1.0;
    for (int i = 2; i <= dim_; ++i) f *= i;
    return f;
  }();
  tau_ = geometric_product(delta_.value(), invert_blade(pseudoscalar(dim_)))
             .scalar_part() /
         fact;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      diameter_ = std::max(diameter_, distance(vertices_[i], vertices_[j]));
    }
  }
  degenerate_ = !(std::fabs(tau_) > kDegeneracyTol * std::pow(diameter_, dim_));
}

Simplex Simplex::from_vertices(std::vector<VecN> vertices) {
  if (vertices.empty()) throw ShapeError("simplex: no vertices");
  const int dim = vertices.front().dim();
  if (static_cast<int>(vertices.size()) != dim + 1) {
    throw ShapeError("simplex: expected " + std::to_string(dim + 1) +
                     " vertices in dimension " + std::to_string(dim) +
                     ", got " + std::to_string(vertices.size()));
  }
  for (const VecN& v : vertices) {
    if (v.dim() != dim) throw ShapeError("simplex: mixed vertex dimensions");
  }
  return Simplex(std::move(vertices));
}

VecN Simplex::centroid() const {
  VecN c(dim_);
  for (const VecN& v : vertices_) c += v;
  return (1.0 / static_cast<double>(vertices_.size())) * c;
}

Blade delta_omitting(const Simplex& s, int i) {
  if (i < 2 || i > s.dim() + 1) {
    throw ShapeError("delta_omitting: vertex index " + std::to_string(i) +
                     " outside [2, " + std::to_string(s.dim() + 1) + "]");
  }
  if (s.degenerate()) {
    throw DegenerateSimplex("delta_omitting: degenerate simplex");
  }
  std::vector<VecN> diffs;
  diffs.reserve(static_cast<std::size_t>(s.dim() - 1));
  for (int j = 2; j <= s.dim() + 1; ++j) {
    if (j == i) continue;
    diffs.push_back(s.vertex(j) - s.vertex(1));
  }
  return Blade(std::move(diffs));
}

}  // namespace cliffgrad
