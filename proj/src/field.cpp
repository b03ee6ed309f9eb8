#include "cliffgrad/field.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "cliffgrad/errors.hpp"

namespace cliffgrad {

namespace {

const char* const kFunctions[] = {"sin", "cos", "exp", "log", "sqrt", "abs"};
constexpr int kFunctionCount = 6;

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

struct Expression::Node {
  enum class Op { kNumber, kVariable, kNegate, kAdd, kSub, kMul, kDiv, kPow, kCall };

  Op op;
  double number = 0.0;
  int var = 0;  // 0-based
  int fn = -1;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::kNumber;
  n->number = v;
  return n;
}

NodePtr make_var(int idx) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVariable;
  n->var = idx;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(int fn, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = Op::kCall;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

class Parser {
 public:
  Parser(std::string source, int dim) : src_(std::move(source)), dim_(dim) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_space();
    if (at_ < src_.size()) {
      throw SyntaxError(at_, "unexpected character '" +
                                 std::string(1, src_[at_]) + "'");
    }
    return e;
  }

 private:
  void skip_space() {
    while (at_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[at_]))) {
      ++at_;
    }
  }

  char peek() {
    skip_space();
    return at_ < src_.size() ? src_[at_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++at_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+')) {
        lhs = make_binary(Op::kAdd, lhs, term());
      } else if (consume('-')) {
        lhs = make_binary(Op::kSub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (consume('*')) {
        lhs = make_binary(Op::kMul, lhs, unary());
      } else if (consume('/')) {
        lhs = make_binary(Op::kDiv, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (consume('-')) return make_unary(Op::kNegate, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (consume('^')) return make_binary(Op::kPow, base, unary());
    return base;
  }

  NodePtr atom() {
    const char c = peek();
    if (c == '(') {
      ++at_;
      NodePtr inner = expression();
      if (!consume(')')) throw SyntaxError(at_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return identifier();
    }
    throw SyntaxError(at_, "expected a number, variable, function or '('");
  }

  NodePtr number() {
    const char* start = src_.c_str() + at_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) throw SyntaxError(at_, "malformed number");
    at_ += static_cast<std::size_t>(end - start);
    return make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = at_;
    while (at_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[at_])) ||
            src_[at_] == '_')) {
      ++at_;
    }
    const std::string name = src_.substr(start, at_ - start);
    for (int f = 0; f < kFunctionCount; ++f) {
      if (name == kFunctions[f]) {
        if (!consume('(')) {
          throw SyntaxError(at_, "expected '(' after '" + name + "'");
        }
        NodePtr arg = expression();
        if (!consume(')')) throw SyntaxError(at_, "expected ')'");
        return make_call(f, arg);
      }
    }
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      }
      if (digits) {
        const long idx = std::strtol(name.c_str() + 1, nullptr, 10);
        if (idx < 1 || idx > dim_) {
          throw UnknownIdentifier(
              start, "variable '" + name + "' outside x1..x" +
                         std::to_string(dim_));
        }
        return make_var(static_cast<int>(idx - 1));
      }
    }
    throw UnknownIdentifier(start, "unknown identifier '" + name + "'");
  }

  std::string src_;
  int dim_;
  std::size_t at_ = 0;
};

// Precedence levels for printing: higher binds tighter.
int prec(const Node& n) {
  switch (n.op) {
    case Op::kAdd:
    case Op::kSub:
      return 1;
    case Op::kMul:
    case Op::kDiv:
      return 2;
    case Op::kNegate:
      return 3;
    case Op::kPow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const Node& n, int min_prec, std::string& out) {
  const bool parens = prec(n) < min_prec;
  if (parens) out += '(';
  switch (n.op) {
    case Op::kNumber:
      out += fmt_number(n.number);
      break;
    case Op::kVariable:
      out += 'x';
      out += std::to_string(n.var + 1);
      break;
    case Op::kNegate:
      out += '-';
      print_node(*n.a, 3, out);
      break;
    case Op::kAdd:
      print_node(*n.a, 1, out);
      out += " + ";
      print_node(*n.b, 2, out);
      break;
    case Op::kSub:
      print_node(*n.a, 1, out);
      out += " - ";
      print_node(*n.b, 2, out);
      break;
    case Op::kMul:
      print_node(*n.a, 2, out);
      out += "*";
      print_node(*n.b, 3, out);
      break;
    case Op::kDiv:
      print_node(*n.a, 2, out);
      out += "/";
      print_node(*n.b, 3, out);
      break;
    case Op::kPow:
      print_node(*n.a, 5, out);
      out += "^";
      print_node(*n.b, 3, out);
      break;
    case Op::kCall:
      out += kFunctions[n.fn];
      out += '(';
      print_node(*n.a, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

std::string subexpr_text(const Node& n) {
  std::string s;
  print_node(n, 0, s);
  return s;
}

bool eval_node(const Node& n, const VecN& p, double& out, std::string& err) {
  switch (n.op) {
    case Op::kNumber:
      out = n.number;
      return true;
    case Op::kVariable:
      out = p[n.var];
      return true;
    case Op::kNegate: {
      double a;
      if (!eval_node(*n.a, p, a, err)) return false;
      out = -a;
      return true;
    }
    case Op::kCall: {
      double a;
      if (!eval_node(*n.a, p, a, err)) return false;
      switch (n.fn) {
        case 0: out = std::sin(a); break;
        case 1: out = std::cos(a); break;
        case 2: out = std::exp(a); break;
        case 3:
          if (a <= 0.0) {
            err = "log of a non-positive argument in '" + subexpr_text(n) + "'";
            return false;
          }
          out = std::log(a);
          break;
        case 4:
          if (a < 0.0) {
            err = "sqrt of a negative argument in '" + subexpr_text(n) + "'";
            return false;
          }
          out = std::sqrt(a);
          break;
        default: out = std::fabs(a); break;
      }
      if (!std::isfinite(out)) {
        err = "non-finite value in '" + subexpr_text(n) + "'";
        return false;
      }
      return true;
    }
    default: {
      double a, b;
      if (!eval_node(*n.a, p, a, err)) return false;
      if (!eval_node(*n.b, p, b, err)) return false;
      switch (n.op) {
        case Op::kAdd: out = a + b; break;
        case Op::kSub: out = a - b; break;
        case Op::kMul: out = a * b; break;
        case Op::kDiv:
          if (b == 0.0) {
            err = "division by zero in '" + subexpr_text(n) + "'";
            return false;
          }
          out = a / b;
          break;
        default: out = std::pow(a, b); break;
      }
      if (!std::isfinite(out)) {
        err = "non-finite value in '" + subexpr_text(n) + "'";
        return false;
      }
      return true;
    }
  }
}

bool nodes_equal(const Node& x, const Node& y) {
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::kNumber:
      return x.number == y.number;
    case Op::kVariable:
      return x.var == y.var;
    case Op::kNegate:
      return nodes_equal(*x.a, *y.a);
    case Op::kCall:
      return x.fn == y.fn && nodes_equal(*x.a, *y.a);
    default:
      return nodes_equal(*x.a, *y.a) && nodes_equal(*x.b, *y.b);
  }
}

}  // namespace

Expression Expression::parse(std::string_view source, int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw ShapeError("Expression::parse: bad dimension");
  }
  Parser p(std::string(source), dim);
  return Expression(dim, p.run());
}

std::string Expression::print() const { return subexpr_text(*root_); }

EvalResult Expression::evaluate(const VecN& p) const {
  if (p.dim() != dim_) {
    throw ShapeError("Expression::evaluate: dimension mismatch");
  }
  double v = 0.0;
  std::string err;
  if (!eval_node(*root_, p, v, err)) return EvalResult::domain(err);
  return EvalResult::of(v);
}

bool Expression::operator==(const Expression& other) const {
  return dim_ == other.dim_ && nodes_equal(*root_, *other.root_);
}

ScalarField::ScalarField(std::string name, int dim, FieldKind kind,
                         EvalFn eval, GradFn gradient)
    : name_(std::move(name)),
      dim_(dim),
      kind_(kind),
      eval_(std::move(eval)),
      grad_(std::move(gradient)) {}

EvalResult ScalarField::evaluate(const VecN& p) const {
  if (p.dim() != dim_) {
    throw ShapeError("ScalarField::evaluate: dimension mismatch on '" + name_ +
                     "'");
  }
  return eval_(p);
}

VecN ScalarField::analytic_gradient(const VecN& p) const {
  if (!grad_) {
    throw ConfigError("field '" + name_ + "' has no analytic gradient");
  }
  if (p.dim() != dim_) {
    throw ShapeError("ScalarField::analytic_gradient: dimension mismatch");
  }
  return grad_(p);
}

ScalarField schwarz_field() {
  return ScalarField(
      "schwarz", 2, FieldKind::kBuiltin,
      [](const VecN& p) {
        const double x = p[0];
        if (std::fabs(x) > 1.0) {
          return EvalResult::domain("sqrt(1 - x1^2) undefined at |x1| > 1");
        }
        return EvalResult::of(std::sqrt(1.0 - x * x));
      },
      [](const VecN& p) {
        const double x = p[0];
        return VecN{-x / std::sqrt(1.0 - x * x), 0.0};
      });
}

ScalarField linear_field(VecN g, double c) {
  const int dim = g.dim();
  return ScalarField(
      "linear", dim, FieldKind::kBuiltin,
      [g, c](const VecN& p) { return EvalResult::of(dot(g, p) + c); },
      [g](const VecN&) { return g; });
}

ScalarField quadratic_field(std::vector<std::vector<double>> q) {
  const int dim = static_cast<int>(q.size());
  for (const auto& row : q) {
    if (static_cast<int>(row.size()) != dim) {
      throw ShapeError("quadratic_field: matrix is not square");
    }
  }
  // symmetrise once so the gradient is exactly Q x
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double s = 0.5 * (q[i][j] + q[j][i]);
      q[i][j] = s;
      q[j][i] = s;
    }
  }
  auto apply = [q, dim](const VecN& p) {
    VecN out(dim);
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s += q[i][j] * p[j];
      out[i] = s;
    }
    return out;
  };
  return ScalarField(
      "quadratic", dim, FieldKind::kBuiltin,
      [apply](const VecN& p) { return EvalResult::of(0.5 * dot(p, apply(p))); },
      apply);
}

ScalarField sin_exp_field() {
  return ScalarField(
      "sin-exp", 2, FieldKind::kBuiltin,
      [](const VecN& p) {
        return EvalResult::of(std::sin(p[0]) * std::exp(p[1]));
      },
      [](const VecN& p) {
        const double e = std::exp(p[1]);
        return VecN{std::cos(p[0]) * e, std::sin(p[0]) * e};
      });
}

std::vector<ScalarField> builtin_catalog() {
  return {schwarz_field(), linear_field(VecN{2.0, -3.0}, 1.0),
          quadratic_field({{1.0, 0.25}, {0.25, 0.5}}), sin_exp_field()};
}

ScalarField tabulated_field(int dim,
                            std::vector<std::pair<VecN, double>> samples) {
  for (const auto& [p, v] : samples) {
    (void)v;
    if (p.dim() != dim) throw ShapeError("tabulated_field: sample dimension");
  }
  auto lookup = [dim, samples = std::move(samples)](const VecN& q) {
    for (const auto& [p, v] : samples) {
      bool match = true;
      for (int i = 0; i < dim; ++i) {
        if (std::fabs(p[i] - q[i]) >
            1e-12 * std::max(1.0, std::fabs(p[i]))) {
          match = false;
          break;
        }
      }
      if (match) return EvalResult::of(v);
    }
    std::ostringstream os;
    os << "no sample at (";
    for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << q[i];
    os << ")";
    throw MissingSample(os.str());
  };
  return ScalarField("tabulated", dim, FieldKind::kTabulated,
                     std::move(lookup));
}

ScalarField field_from_expression(const Expression& e) {
  return ScalarField(e.print(), e.dim(), FieldKind::kExpression,
                     [e](const VecN& p) { return e.evaluate(p); });
}

namespace {

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t next = text.find(',', at);
    if (next == std::string::npos) next = text.size();
    const std::string tok = text.substr(at, next - at);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || (end && *end != '\0')) {
      throw ConfigError("bad number '" + tok + "' in " + what);
    }
    out.push_back(v);
    at = next + 1;
  }
  if (out.empty()) throw ConfigError("empty number list in " + what);
  return out;
}

}  // namespace

ScalarField parse_field_spec(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (head == "schwarz" || head == "sin-exp" || head == "sinexp") {
    if (dim != 2) {
      throw ConfigError("field '" + head + "' is two-dimensional");
    }
    return head == "schwarz" ? schwarz_field() : sin_exp_field();
  }
  if (head == "linear") {
    auto gs = parse_number_list(args, "linear field spec");
    if (static_cast<int>(gs.size()) != dim) {
      throw ConfigError("linear field spec needs " + std::to_string(dim) +
                        " components");
    }
    VecN g(dim);
    for (int i = 0; i < dim; ++i) g[i] = gs[static_cast<std::size_t>(i)];
    return linear_field(g);
  }
  if (head == "quadratic") {
    if (args.empty()) {
      throw ConfigError("quadratic field spec needs rows 'a,b;c,d'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t at = 0;
    while (at <= args.size()) {
      std::size_t next = args.find(';', at);
      if (next == std::string::npos) next = args.size();
      rows.push_back(
          parse_number_list(args.substr(at, next - at), "quadratic row"));
      at = next + 1;
    }
    if (static_cast<int>(rows.size()) != dim) {
      throw ConfigError("quadratic field spec needs " + std::to_string(dim) +
                        " rows");
    }
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != dim) {
        throw ConfigError("quadratic row length mismatch");
      }
    }
    return quadratic_field(std::move(rows));
  }
  return field_from_expression(Expression::parse(spec, dim));
}

}  // namespace cliffgrad
