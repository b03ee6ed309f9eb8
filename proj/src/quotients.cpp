#include "cliffgrad/quotients.hpp"

#include <cmath>
#include <utility>

#include "cliffgrad/errors.hpp"
#include "cliffgrad/field.hpp"

namespace cliffgrad {

namespace {

void require_nondegenerate(const Simplex& s, const char* who) {
  if (s.degenerate()) {
    throw DegenerateSimplex(std::string(who) + ": degenerate simplex");
  }
}

// Wedge of the chain diffs d_j for j in 1..n-1 with j != skip (0 = none),
// followed by d_n when with_last is set.
Multivector chain_wedge(const MirrorChain& chain, int skip, bool with_last) {
  const int n = static_cast<int>(chain.diffs.size());
  Multivector acc = Multivector::scalar(chain.diffs.front().dim(), 1.0);
  for (int j = 1; j <= n - 1; ++j) {
    if (j == skip) continue;
    acc = wedge(acc, Multivector::from_vector(
                         chain.diffs[static_cast<std::size_t>(j - 1)]));
  }
  if (with_last) {
    acc = wedge(acc, Multivector::from_vector(chain.diffs.back()));
  }
  return acc;
}

}  // namespace

SampledSimplex::SampledSimplex(Simplex s, std::vector<double> values)
    : simplex_(std::move(s)), values_(std::move(values)) {
  if (values_.size() != simplex_.vertices().size()) {
    throw ShapeError("SampledSimplex: expected one value per vertex");
  }
}

SampledSimplex SampledSimplex::from_field(const Simplex& s,
                                          const ScalarField& f) {
  std::vector<double> values;
  values.reserve(s.vertices().size());
  for (const VecN& v : s.vertices()) {
    const EvalResult r = f.evaluate(v);
    if (!r.ok()) throw DomainError(r.error, v.components());
    values.push_back(r.value);
  }
  SampledSimplex out(s, std::move(values));
  out.chain_ = build_mirror_chain(s);
  out.mirror_values_.reserve(out.chain_->mirrored.size());
  for (const VecN& m : out.chain_->mirrored) {
    const EvalResult r = f.evaluate(m);
    if (!r.ok()) throw DomainError(r.error, m.components());
    out.mirror_values_.push_back(r.value);
  }
  return out;
}

SampledSimplex SampledSimplex::from_values(const Simplex& s,
                                           std::vector<double> values) {
  return SampledSimplex(s, std::move(values));
}

SampledSimplex SampledSimplex::from_values_with_mirrors(
    const Simplex& s, std::vector<double> values,
    std::vector<double> mirror_values) {
  SampledSimplex out(s, std::move(values));
  out.chain_ = build_mirror_chain(s);
  if (mirror_values.size() != out.chain_->mirrored.size()) {
    throw ShapeError("SampledSimplex: expected one value per mirrored point");
  }
  out.mirror_values_ = std::move(mirror_values);
  return out;
}

const MirrorChain& SampledSimplex::chain() const {
  if (!chain_) throw IncompleteSample("sampled simplex has no mirror chain");
  return *chain_;
}

const std::vector<double>& SampledSimplex::mirror_values() const {
  if (!chain_) throw IncompleteSample("sampled simplex has no mirror values");
  return mirror_values_;
}

Multivector multi_difference(const SampledSimplex& s) {
  require_nondegenerate(s.simplex(), "multi_difference");
  const int n = s.simplex().dim();
  Multivector acc(n);
  for (int i = 2; i <= n + 1; ++i) {
    const double df = s.value(i) - s.value(1);
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    acc += (sign * df) * delta_omitting(s.simplex(), i).value();
  }
  return acc;
}

VecN secant_ratio(const SampledSimplex& s) {
  require_nondegenerate(s.simplex(), "secant_ratio");
  const Multivector q = geometric_product(
      multi_difference(s), invert_blade(s.simplex().delta()));
  return vector_part_checked(q, 1e-10, "secant_ratio");
}

VecN secant_ratio_linear_combination(const SampledSimplex& s) {
  if (s.simplex().dim() != 2) {
    throw ShapeError("secant_ratio_linear_combination: only defined for n=2");
  }
  require_nondegenerate(s.simplex(), "secant_ratio_linear_combination");
  const VecN db = s.simplex().vertex(2) - s.simplex().vertex(1);
  const VecN dc = s.simplex().vertex(3) - s.simplex().vertex(1);
  const double dfb = s.value(2) - s.value(1);
  const double dfc = s.value(3) - s.value(1);
  const double bb = db.norm_sq();
  const double cc = dc.norm_sq();
  const double bc = dot(db, dc);
  const double denom = bb * cc - bc * bc;
  return ((dfb * cc - dfc * bc) / denom) * db +
         ((dfc * bb - dfb * bc) / denom) * dc;
}

Multivector mean_multi_difference(const SampledSimplex& s) {
  require_nondegenerate(s.simplex(), "mean_multi_difference");
  const MirrorChain& chain = s.chain();
  const std::vector<double>& fm = s.mirror_values();
  const int n = s.simplex().dim();
  Multivector acc(n);
  for (int i = 1; i <= n - 1; ++i) {
    const double df = fm[static_cast<std::size_t>(i - 1)] - s.value(i);
    const double sign = (i % 2 == 1) ? 1.0 : -1.0;
    acc += (sign * df) * chain_wedge(chain, i, /*with_last=*/true);
  }
  const double last_sign = (n % 2 == 1) ? 1.0 : -1.0;
  acc += (last_sign * (s.value(n + 1) - s.value(n))) *
         chain_wedge(chain, 0, /*with_last=*/false);
  return std::ldexp(1.0, 1 - n) * acc;
}

VecN mean_ratio(const SampledSimplex& s) {
  require_nondegenerate(s.simplex(), "mean_ratio");
  const MirrorChain& chain = s.chain();
  const std::vector<double>& fm = s.mirror_values();
  const int n = s.simplex().dim();
  VecN acc(n);
  for (int i = 1; i <= n - 1; ++i) {
    const VecN& d = chain.diffs[static_cast<std::size_t>(i - 1)];
    const double df = fm[static_cast<std::size_t>(i - 1)] - s.value(i);
    acc += df * invert_vector(d);
  }
  acc += (s.value(n + 1) - s.value(n)) * invert_vector(chain.diffs.back());
  return acc;
}

VecN mean_ratio_quotient(const SampledSimplex& s) {
  require_nondegenerate(s.simplex(), "mean_ratio_quotient");
  const Multivector q = geometric_product(
      mean_multi_difference(s), invert_blade(s.simplex().delta()));
  return vector_part_checked(q, 1e-10, "mean_ratio_quotient");
}

SecantHyperplane secant_hyperplane(const SampledSimplex& s) {
  return {s.simplex().vertex(1), s.value(1), secant_ratio(s)};
}

SecantHyperplane mean_secant_hyperplane(const SampledSimplex& s) {
  return {s.simplex().vertex(1), s.value(1), mean_ratio(s)};
}

}  // namespace cliffgrad
