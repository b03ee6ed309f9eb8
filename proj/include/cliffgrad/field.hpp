#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cliffgrad/multivector.hpp"

namespace cliffgrad {

// Outcome of a field evaluation. Domain violations are values, not
// exceptions, so sweep drivers can record "outside the domain" rows.
struct EvalResult {
  double value = 0.0;
  std::string error;  // empty when the point is inside the domain

  bool ok() const { return error.empty(); }
  static EvalResult of(double v) { return {v, {}}; }
  static EvalResult domain(std::string what) { return {0.0, std::move(what)}; }
};

// Parsed arithmetic expression over variables x1..xn with functions
// sin, cos, exp, log, sqrt, abs. Precedence: ^ (right-assoc), unary -,
// * /, + -. Evaluation never traps: domain violations come back as
// EvalResult errors naming the offending subexpression.
class Expression {
 public:
  struct Node;

  // Throws SyntaxError (with byte offset) or UnknownIdentifier.
  static Expression parse(std::string_view source, int dim);

  int dim() const { return dim_; }
  std::string print() const;
  EvalResult evaluate(const VecN& p) const;
  bool operator==(const Expression& other) const;  // structural equality

 private:
  Expression(int dim, std::shared_ptr<const Node> root)
      : dim_(dim), root_(std::move(root)) {}

  int dim_;
  std::shared_ptr<const Node> root_;
};

enum class FieldKind { kBuiltin, kExpression, kTabulated };

// Scalar function of n variables. Evaluation is pure and deterministic;
// fields are immutable and freely shareable.
class ScalarField {
 public:
  using EvalFn = std::function<EvalResult(const VecN&)>;
  using GradFn = std::function<VecN(const VecN&)>;

  ScalarField(std::string name, int dim, FieldKind kind, EvalFn eval,
              GradFn gradient = nullptr);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  FieldKind kind() const { return kind_; }

  // Throws ShapeError on a dimension mismatch; MissingSample may escape
  // from tabulated fields.
  EvalResult evaluate(const VecN& p) const;

  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }
  VecN analytic_gradient(const VecN& p) const;

 private:
  std::string name_;
  int dim_;
  FieldKind kind_;
  EvalFn eval_;
  GradFn grad_;
};

// f(x) = sqrt(1 - x1^2) on [-1,1] x R, with its analytic gradient.
ScalarField schwarz_field();

// f(x) = g . x + c.
ScalarField linear_field(VecN g, double c = 0.0);

// f(x) = x^T Q x / 2 with Q symmetrised; gradient Q x.
ScalarField quadratic_field(std::vector<std::vector<double>> q);

// f(x) = sin(x1) exp(x2).
ScalarField sin_exp_field();

// Named defaults of every builtin family.
std::vector<ScalarField> builtin_catalog();

// Field backed by point samples keyed by exact coordinates (matched to a
// 1e-12 tolerance). Queries off the support throw MissingSample rather
// than interpolating.
ScalarField tabulated_field(int dim,
                            std::vector<std::pair<VecN, double>> samples);

ScalarField field_from_expression(const Expression& e);

// CLI-style field spec: a builtin name ("schwarz", "sin-exp",
// "linear:2,-3", "quadratic:1,0;0,1") or else expression text.
// Throws ConfigError when a builtin spec is malformed or its dimension
// does not match.
ScalarField parse_field_spec(const std::string& spec, int dim);

}  // namespace cliffgrad
