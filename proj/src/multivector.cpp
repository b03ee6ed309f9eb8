#include "cliffgrad/multivector.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cliffgrad/errors.hpp"

namespace cliffgrad {

namespace {

void check_dim(int dim, const char* who) {
  if (dim < 1 || dim > kMaxDim) {
    throw ShapeError(std::string(who) + ": dimension " + std::to_string(dim) +
                     " outside [1, " + std::to_string(kMaxDim) + "]");
  }
}

void check_same_dim(int a, int b, const char* who) {
  if (a != b) {
    throw ShapeError(std::string(who) + ": dimension mismatch (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

// Sign of the basis-blade product e_A e_B in Cl(n,0,0): parity of the number
// of index swaps needed to bring the concatenation into canonical order.
int reorder_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (unsigned x = a >> 1; x != 0; x >>= 1) {
    swaps += std::popcount(x & b);
  }
  return (swaps & 1) ? -1 : 1;
}

std::string basis_name(unsigned mask) {
  std::string s;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) s += "e" + std::to_string(i + 1);
  }
  return s;
}

}  // namespace

VecN::VecN(int dim) : dim_(dim), x_(static_cast<std::size_t>(dim), 0.0) {
  check_dim(dim, "VecN");
}

VecN::VecN(std::initializer_list<double> xs)
    : dim_(static_cast<int>(xs.size())), x_(xs) {
  check_dim(dim_, "VecN");
}

VecN VecN::zero(int dim) { return VecN(dim); }

VecN VecN::basis(int dim, int i) {
  VecN v(dim);
  if (i < 0 || i >= dim) throw ShapeError("VecN::basis: index out of range");
  v[i] = 1.0;
  return v;
}

double VecN::norm_sq() const {
  double s = 0.0;
  for (double c : x_) s += c * c;
  return s;
}

double VecN::norm() const { return std::sqrt(norm_sq()); }

VecN& VecN::operator+=(const VecN& o) {
  check_same_dim(dim_, o.dim_, "VecN::operator+=");
  for (int i = 0; i < dim_; ++i) x_[i] += o.x_[i];
  return *this;
}

VecN& VecN::operator-=(const VecN& o) {
  check_same_dim(dim_, o.dim_, "VecN::operator-=");
  for (int i = 0; i < dim_; ++i) x_[i] -= o.x_[i];
  return *this;
}

VecN& VecN::operator*=(double s) {
  for (double& c : x_) c *= s;
  return *this;
}

VecN operator+(VecN a, const VecN& b) { return a += b; }
VecN operator-(VecN a, const VecN& b) { return a -= b; }
VecN operator*(double s, VecN v) { return v *= s; }
VecN operator*(VecN v, double s) { return v *= s; }
VecN operator-(VecN v) { return v *= -1.0; }

double dot(const VecN& u, const VecN& v) {
  check_same_dim(u.dim(), v.dim(), "dot");
  double s = 0.0;
  for (int i = 0; i < u.dim(); ++i) s += u[i] * v[i];
  return s;
}

double distance(const VecN& a, const VecN& b) { return (a - b).norm(); }

Multivector::Multivector(int dim)
    : dim_(dim), c_(std::size_t{1} << dim, 0.0) {
  check_dim(dim, "Multivector");
}

Multivector Multivector::scalar(int dim, double s) {
  Multivector m(dim);
  m.c_[0] = s;
  return m;
}

Multivector Multivector::basis_blade(int dim, unsigned mask, double coeff) {
  Multivector m(dim);
  if (mask >= m.c_.size()) {
    throw ShapeError("Multivector::basis_blade: mask out of range");
  }
  m.c_[mask] = coeff;
  return m;
}

Multivector Multivector::from_vector(const VecN& v) {
  Multivector m(v.dim());
  for (int i = 0; i < v.dim(); ++i) m.c_[1u << i] = v[i];
  return m;
}

VecN Multivector::vector_part() const {
  VecN v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = c_[1u << i];
  return v;
}

Multivector Multivector::grade(int k) const {
  Multivector out(dim_);
  for (unsigned m = 0; m < c_.size(); ++m) {
    if (std::popcount(m) == k) out.c_[m] = c_[m];
  }
  return out;
}

double Multivector::grade_norm(int k) const {
  double s = 0.0;
  for (unsigned m = 0; m < c_.size(); ++m) {
    if (std::popcount(m) == k) s += c_[m] * c_[m];
  }
  return std::sqrt(s);
}

double Multivector::norm() const {
  double s = 0.0;
  for (double c : c_) s += c * c;
  return std::sqrt(s);
}

double Multivector::norm_except_grade(int k) const {
  double s = 0.0;
  for (unsigned m = 0; m < c_.size(); ++m) {
    if (std::popcount(m) != k) s += c_[m] * c_[m];
  }
  return std::sqrt(s);
}

Multivector& Multivector::operator+=(const Multivector& o) {
  check_same_dim(dim_, o.dim_, "Multivector::operator+=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  check_same_dim(dim_, o.dim_, "Multivector::operator-=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Multivector& Multivector::operator*=(double s) {
  for (double& c : c_) c *= s;
  return *this;
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator*(double s, Multivector m) { return m *= s; }
Multivector operator*(Multivector m, double s) { return m *= s; }
Multivector operator-(Multivector m) { return m *= -1.0; }

std::string Multivector::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (unsigned m = 0; m < c_.size(); ++m) {
    if (c_[m] == 0.0) continue;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", c_[m]);
    if (!first) os << " + ";
    os << buf;
    if (m != 0) os << "*" << basis_name(m);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  check_same_dim(a.dim(), b.dim(), "geometric_product");
  Multivector out(a.dim());
  const unsigned n = static_cast<unsigned>(a.size());
  for (unsigned i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (unsigned j = 0; j < n; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      out[i ^ j] += reorder_sign(i, j) * ai * bj;
    }
  }
  return out;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  check_same_dim(a.dim(), b.dim(), "wedge");
  Multivector out(a.dim());
  const unsigned n = static_cast<unsigned>(a.size());
  for (unsigned i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (unsigned j = 0; j < n; ++j) {
      if ((i & j) != 0) continue;  // shared factor: not in the outer product
      const double bj = b[j];
      if (bj == 0.0) continue;
      out[i | j] += reorder_sign(i, j) * ai * bj;
    }
  }
  return out;
}

Blade::Blade(std::vector<VecN> factors)
    : factors_(std::move(factors)),
      value_(factors_.empty() ? 1 : factors_.front().dim()),
      grade_(static_cast<int>(factors_.size())),
      degenerate_(false) {
  if (factors_.empty()) {
    value_[0] = 1.0;
    return;
  }
  const int dim = factors_.front().dim();
  double max_factor_norm = 0.0;
  value_ = Multivector::from_vector(factors_.front());
  max_factor_norm = factors_.front().norm();
  for (std::size_t i = 1; i < factors_.size(); ++i) {
    check_same_dim(dim, factors_[i].dim(), "Blade");
    value_ = wedge(value_, Multivector::from_vector(factors_[i]));
    max_factor_norm = std::max(max_factor_norm, factors_[i].norm());
  }
  const double scale = std::pow(max_factor_norm, grade_);
  degenerate_ = !(value_.norm() > kDegeneracyTol * scale);
}

Blade Blade::scalar_one(int dim) {
  Blade b(std::vector<VecN>{});
  b.value_ = Multivector::scalar(dim, 1.0);
  return b;
}

double Blade::square() const {
  const Multivector sq = geometric_product(value_, value_);
  const double s = sq.scalar_part();
  if (sq.norm_except_grade(0) > 1e-12 * std::max(sq.norm(), 1e-300)) {
    throw DegenerateInput("blade square has a non-scalar residual");
  }
  return s;
}

Blade pseudoscalar(int dim) {
  check_dim(dim, "pseudoscalar");
  std::vector<VecN> fs;
  fs.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) fs.push_back(VecN::basis(dim, i));
  return Blade(std::move(fs));
}

VecN invert_vector(const VecN& v) {
  const double n2 = v.norm_sq();
  if (!(n2 > 1e-300) || !std::isfinite(n2)) {
    throw DegenerateInput("invert_vector: vector norm too small");
  }
  return (1.0 / n2) * v;
}

Multivector invert_blade(const Blade& b) {
  if (b.degenerate()) {
    throw DegenerateInput("invert_blade: degenerate blade");
  }
  if (b.grade() == 0) {
    const double s = b.value().scalar_part();
    if (!(std::fabs(s) > 1e-300)) {
      throw DegenerateInput("invert_blade: zero scalar");
    }
    return Multivector::scalar(b.dim(), 1.0 / s);
  }
  const double s = b.square();
  if (!(std::fabs(s) > 1e-300)) {
    throw DegenerateInput("invert_blade: blade square too small");
  }
  return b.value() * (1.0 / s);
}

Multivector graded_commutator(const VecN& v, const Blade& b) {
  check_same_dim(v.dim(), b.dim(), "graded_commutator");
  const Multivector mv = Multivector::from_vector(v);
  const double sign = (b.grade() % 2 == 0) ? 1.0 : -1.0;
  return 0.5 * (mv * b.value() - sign * (b.value() * mv));
}

Multivector graded_anticommutator(const VecN& v, const Blade& b) {
  check_same_dim(v.dim(), b.dim(), "graded_anticommutator");
  const Multivector mv = Multivector::from_vector(v);
  const double sign = (b.grade() % 2 == 0) ? 1.0 : -1.0;
  return 0.5 * (mv * b.value() + sign * (b.value() * mv));
}

double det_via_quotient(const std::vector<VecN>& rows) {
  const int k = static_cast<int>(rows.size());
  if (k < 1) throw ShapeError("det_via_quotient: need at least one row");
  for (const VecN& r : rows) {
    check_same_dim(r.dim(), k, "det_via_quotient");
  }
  Multivector w = Multivector::from_vector(rows.front());
  for (int i = 1; i < k; ++i) {
    w = wedge(w, Multivector::from_vector(rows[static_cast<std::size_t>(i)]));
  }
  return geometric_product(w, invert_blade(pseudoscalar(k))).scalar_part();
}

VecN vector_part_checked(const Multivector& m, double rel_tol,
                         const char* context) {
  const double residual = m.norm_except_grade(1);
  if (residual > rel_tol * m.norm()) {
    throw ResidualError(std::string("off-grade-1 residual ") +
                        std::to_string(residual) + " above tolerance" +
                        (context[0] ? std::string(" in ") + context : ""));
  }
  return m.vector_part();
}

}  // namespace cliffgrad
