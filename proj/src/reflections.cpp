#include "cliffgrad/reflections.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "cliffgrad/errors.hpp"

namespace cliffgrad {

AffineFlat::AffineFlat(VecN base_point, std::vector<VecN> dirs)
    : base(std::move(base_point)),
      directions(std::move(dirs)),
      blade(directions) {
  for (const VecN& d : directions) {
    if (d.dim() != base.dim()) {
      throw ShapeError("AffineFlat: direction dimension mismatch");
    }
  }
}

AffineFlat AffineFlat::through_points(const std::vector<VecN>& points) {
  if (points.size() < 2) {
    throw ShapeError("AffineFlat: need at least two points");
  }
  std::vector<VecN> dirs;
  dirs.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    dirs.push_back(points[i] - points[0]);
  }
  return AffineFlat(points[0], std::move(dirs));
}

VecN reflect_vector_in_vector(const VecN& v, const VecN& axis) {
  return reflect_vector_in_blade(v, Blade({axis}));
}

VecN reflect_vector_in_blade(const VecN& v, const Blade& b) {
  if (b.degenerate()) {
    throw DegenerateInput("reflect_vector_in_blade: degenerate blade");
  }
  if (v.dim() != b.dim()) {
    throw ShapeError("reflect_vector_in_blade: dimension mismatch");
  }
  const double sign = (b.grade() % 2 == 0) ? -1.0 : 1.0;
  const Multivector mirrored =
      sign * (b.value() * Multivector::from_vector(v) * invert_blade(b));
  return vector_part_checked(mirrored, 1e-12, "reflect_vector_in_blade");
}

VecN mirror_point_across_flat(const VecN& a, const AffineFlat& flat) {
  if (a.dim() != flat.dim()) {
    throw ShapeError("mirror_point_across_flat: dimension mismatch");
  }
  if (flat.degenerate()) {
    throw DegenerateInput("mirror_point_across_flat: degenerate flat");
  }
  return flat.base + reflect_vector_in_blade(a - flat.base, flat.blade);
}

double MirrorChain::min_diff_norm() const {
  double m = std::numeric_limits<double>::infinity();
  for (const VecN& d : diffs) m = std::min(m, d.norm());
  return m;
}

MirrorChain build_mirror_chain(const Simplex& s) {
  if (s.degenerate()) {
    throw DegenerateSimplex("build_mirror_chain: degenerate simplex");
  }
  const int n = s.dim();
  MirrorChain chain;
  chain.mirrored.reserve(static_cast<std::size_t>(n - 1));
  chain.flat_blades.reserve(static_cast<std::size_t>(n - 1));
  chain.diffs.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n - 1; ++i) {
    std::vector<VecN> flat_points;
    flat_points.reserve(static_cast<std::size_t>(n + 1 - i));
    for (int j = i + 1; j <= n + 1; ++j) flat_points.push_back(s.vertex(j));
    AffineFlat flat = AffineFlat::through_points(flat_points);
    const VecN mirrored = mirror_point_across_flat(s.vertex(i), flat);
    chain.mirrored.push_back(mirrored);
    chain.flat_blades.push_back(flat.blade);
    chain.diffs.push_back(mirrored - s.vertex(i));
  }
  chain.diffs.push_back(s.vertex(n + 1) - s.vertex(n));
  return chain;
}

}  // namespace cliffgrad
