#pragma once

#include <optional>
#include <vector>

#include "cliffgrad/multivector.hpp"
#include "cliffgrad/reflections.hpp"
#include "cliffgrad/simplex.hpp"

namespace cliffgrad {

class ScalarField;  // field.hpp

// A simplex with the scalar samples needed by the difference quotients:
// f at each vertex, and (optionally) the mirror chain together with f at
// each mirrored point. Without mirror data only the plain secant ratio is
// available; the mean-ratio operations throw IncompleteSample.
class SampledSimplex {
 public:
  // Evaluates the field at all n+1 vertices and, when the chain can be
  // built, at the n-1 mirrored points. Throws DomainError (with the point)
  // if any evaluation leaves the field's domain, DegenerateSimplex if the
  // simplex is degenerate.
  static SampledSimplex from_field(const Simplex& s, const ScalarField& f);

  // Tabulated vertex values only; supports just the secant ratio.
  static SampledSimplex from_values(const Simplex& s,
                                    std::vector<double> values);

  // Tabulated vertex values plus values at the chain's mirrored points
  // (in chain order abar_1 .. abar_{n-1}).
  static SampledSimplex from_values_with_mirrors(
      const Simplex& s, std::vector<double> values,
      std::vector<double> mirror_values);

  const Simplex& simplex() const { return simplex_; }
  const std::vector<double>& values() const { return values_; }
  // 1-based: value(i) = f(a_i).
  double value(int i) const { return values_[static_cast<std::size_t>(i - 1)]; }
  bool has_mirror_data() const { return chain_.has_value(); }
  const MirrorChain& chain() const;
  const std::vector<double>& mirror_values() const;

 private:
  SampledSimplex(Simplex s, std::vector<double> values);

  Simplex simplex_;
  std::vector<double> values_;
  std::optional<MirrorChain> chain_;
  std::vector<double> mirror_values_;
};

// Multi-difference pseudo-vector: sum over i = 2..n+1 of
// (-1)^i [f(a_i) - f(a_1)] Delta^i. Pure grade n-1.
Multivector multi_difference(const SampledSimplex& s);

// Secant ratio r_f = multi_difference * Delta^{-1}; the unique vector whose
// hyperplane z = f(a_1) + r_f . (x - a_1) interpolates all n+1 samples.
VecN secant_ratio(const SampledSimplex& s);

// Closed form of the secant ratio for n = 2 as a linear combination of the
// two edge vectors; cross-checks the quotient route. Throws ShapeError
// when dim != 2.
VecN secant_ratio_linear_combination(const SampledSimplex& s);

// Mean multi-difference pseudo-vector built on the mirror chain:
// 2^{1-n} [ sum_i (-1)^{i+1} (f(abar_i) - f(a_i)) Dbar^i
//           + (-1)^{n+1} (f(a_{n+1}) - f(a_n)) Dbar ].
Multivector mean_multi_difference(const SampledSimplex& s);

// Mean ratio as the sum of scalar-over-vector quotients along the chain's
// orthogonal diffs. This is the cheap default route.
VecN mean_ratio(const SampledSimplex& s);

// Mean ratio as mean_multi_difference * Delta^{-1}; algebraically equal to
// mean_ratio and kept as the cross-check route.
VecN mean_ratio_quotient(const SampledSimplex& s);

// Interpolating hyperplane z = anchor_value + ratio . (x - anchor).
struct SecantHyperplane {
  VecN anchor;
  double anchor_value;
  VecN ratio;

  double evaluate(const VecN& x) const {
    return anchor_value + dot(ratio, x - anchor);
  }
};

SecantHyperplane secant_hyperplane(const SampledSimplex& s);       // uses r_f
SecantHyperplane mean_secant_hyperplane(const SampledSimplex& s);  // uses rbar_f

}  // namespace cliffgrad
