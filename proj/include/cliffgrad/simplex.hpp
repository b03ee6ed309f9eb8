#pragma once

#include <vector>

#include "cliffgrad/multivector.hpp"

namespace cliffgrad {

// Ordered simplex a_1 ... a_{n+1} in E_n, with its oriented blade
// Delta = (a_2 - a_1) ^ ... ^ (a_{n+1} - a_1), the hyper-volume
// tau = Delta (I_n)^{-1} / n!, and the max pairwise vertex distance.
// Degeneracy is scale-relative: |tau| must exceed kDegeneracyTol * diameter^n.
class Simplex {
 public:
  // Throws ShapeError unless exactly dim+1 vertices of equal dimension.
  static Simplex from_vertices(std::vector<VecN> vertices);

  int dim() const { return dim_; }
  const std::vector<VecN>& vertices() const { return vertices_; }
  // 1-based vertex accessor matching the a_1..a_{n+1} ordering.
  const VecN& vertex(int i) const { return vertices_[static_cast<std::size_t>(i - 1)]; }

  const Blade& delta() const { return delta_; }
  double tau() const { return tau_; }
  double diameter() const { return diameter_; }
  bool degenerate() const { return degenerate_; }
  VecN centroid() const;

 private:
  explicit Simplex(std::vector<VecN> vertices);

  int dim_;
  std::vector<VecN> vertices_;
  Blade delta_;
  double tau_;
  double diameter_;
  bool degenerate_;
};

// The grade-(n-1) blade obtained by wedging the vertex differences
// a_j - a_1 for j = 2..n+1 with j != i. `i` is the 1-based vertex index,
// valid in [2, n+1]. Throws ShapeError on an out-of-range index and
// DegenerateSimplex on a degenerate simplex.
Blade delta_omitting(const Simplex& s, int i);

}  // namespace cliffgrad
