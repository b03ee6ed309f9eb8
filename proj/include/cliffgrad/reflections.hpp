#pragma once

#include <vector>

#include "cliffgrad/multivector.hpp"
#include "cliffgrad/simplex.hpp"

namespace cliffgrad {

// Affine flat through `base` spanned by `directions`, with the wedge of the
// directions cached as a blade. Nondegenerate iff the directions are
// linearly independent.
struct AffineFlat {
  VecN base;
  std::vector<VecN> directions;
  Blade blade;

  AffineFlat(VecN base_point, std::vector<VecN> dirs);
  // Flat through the given points: base = points[0], directions point from it.
  static AffineFlat through_points(const std::vector<VecN>& points);

  int dim() const { return base.dim(); }
  bool degenerate() const { return blade.degenerate(); }
};

// Mirror v across the line spanned by `axis`: v_par - v_perp = axis v axis^-1.
// Preserves norm. Throws DegenerateInput on a near-zero axis.
VecN reflect_vector_in_vector(const VecN& v, const VecN& axis);

// Mirror v across the k-dimensional subspace spanned by the blade's factors:
// (-1)^{k+1} B v B^{-1}. The in-span component survives, the orthogonal
// component flips sign.
VecN reflect_vector_in_blade(const VecN& v, const Blade& b);

// Mirror a point across an affine flat. The midpoint of a and its mirror
// lands on the flat, and the difference is orthogonal to every direction.
VecN mirror_point_across_flat(const VecN& a, const AffineFlat& flat);

// The mirrored points of a simplex: abar_i reflects a_i across the flat
// through a_{i+1}..a_{n+1}, for i = 1..n-1. `diffs` holds abar_i - a_i
// followed by a_{n+1} - a_n; these n vectors are mutually orthogonal and
// their wedge equals 2^{n-1} times the simplex blade.
struct MirrorChain {
  std::vector<VecN> mirrored;     // abar_1 .. abar_{n-1}
  std::vector<Blade> flat_blades; // L_1 .. L_{n-1}
  std::vector<VecN> diffs;        // n vectors

  double min_diff_norm() const;
};

// Throws DegenerateSimplex when |tau| is below tolerance.
MirrorChain build_mirror_chain(const Simplex& s);

}  // namespace cliffgrad
