#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace cliffgrad {

// Algebra dimension cap. 2^12 coefficients is the largest dense multivector
// this library will allocate.
inline constexpr int kMaxDim = 12;

// Scale-relative cutoff below which vectors, blades and simplices count as
// degenerate.
inline constexpr double kDegeneracyTol = 1e-12;

// Euclidean vector in E_n. Embeds losslessly into the grade-1 slice of a
// Multivector and back.
class VecN {
 public:
  explicit VecN(int dim);
  VecN(std::initializer_list<double> xs);
  static VecN zero(int dim);
  static VecN basis(int dim, int i);  // e_{i+1}, 0-based i

  int dim() const { return dim_; }
  double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return x_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& components() const { return x_; }

  double norm_sq() const;
  double norm() const;

  VecN& operator+=(const VecN& o);
  VecN& operator-=(const VecN& o);
  VecN& operator*=(double s);

  friend bool operator==(const VecN& a, const VecN& b) {
    return a.dim_ == b.dim_ && a.x_ == b.x_;
  }

 private:
  int dim_;
  std::vector<double> x_;
};

VecN operator+(VecN a, const VecN& b);
VecN operator-(VecN a, const VecN& b);
VecN operator*(double s, VecN v);
VecN operator*(VecN v, double s);
VecN operator-(VecN v);
double dot(const VecN& u, const VecN& v);
double distance(const VecN& a, const VecN& b);

// Dense element of the geometric algebra G_n = Cl(n,0,0). Coefficients are
// indexed by basis-blade bitmask: bit i set means e_{i+1} is a factor, and
// factors appear in increasing index order. grade(mask) = popcount(mask).
class Multivector {
 public:
  explicit Multivector(int dim);
  static Multivector scalar(int dim, double s);
  static Multivector basis_blade(int dim, unsigned mask, double coeff = 1.0);
  static Multivector from_vector(const VecN& v);

  int dim() const { return dim_; }
  std::size_t size() const { return c_.size(); }

  double operator[](unsigned mask) const { return c_[mask]; }
  double& operator[](unsigned mask) { return c_[mask]; }

  double scalar_part() const { return c_[0]; }
  VecN vector_part() const;         // grade-1 coefficients, unchecked
  Multivector grade(int k) const;   // projection onto grade k
  double grade_norm(int k) const;   // coefficient norm of grade k
  double norm() const;              // Euclidean norm of all coefficients
  double norm_except_grade(int k) const;

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(double s);

  std::string to_string() const;  // e.g. "2 + 3*e1 - 1*e1e2"

 private:
  int dim_;
  std::vector<double> c_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator*(double s, Multivector m);
Multivector operator*(Multivector m, double s);
Multivector operator-(Multivector m);

// Geometric product. Bilinear, associative; vv = |v|^2 for vectors.
Multivector geometric_product(const Multivector& a, const Multivector& b);

// Outer product: the grade-(r+s) part of the geometric product, extended
// bilinearly. Antisymmetric and nilpotent on vectors.
Multivector wedge(const Multivector& a, const Multivector& b);

inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}
inline Multivector operator^(const Multivector& a, const Multivector& b) {
  return wedge(a, b);
}

// k-blade kept in both factored and dense form. The dense value is the wedge
// of the factors; linearly dependent factors give value 0 and a degeneracy
// flag instead of an error.
class Blade {
 public:
  explicit Blade(std::vector<VecN> factors);
  static Blade scalar_one(int dim);  // empty factor list, value 1

  int dim() const { return value_.dim(); }
  int grade() const { return grade_; }
  bool degenerate() const { return degenerate_; }
  const std::vector<VecN>& factors() const { return factors_; }
  const Multivector& value() const { return value_; }

  // Scalar square B*B. Throws DegenerateInput when the square has a
  // non-scalar residual above tolerance (which a true blade never does).
  double square() const;

 private:
  std::vector<VecN> factors_;
  Multivector value_;
  int grade_;
  bool degenerate_;
};

// I_n = e1...en. Its inverse is e_n...e_1 = (-1)^{n(n-1)/2} I_n.
Blade pseudoscalar(int dim);

// u^{-1} = u / |u|^2. Throws DegenerateInput on a near-zero vector.
VecN invert_vector(const VecN& v);

// B^{-1} = B / B^2. Throws DegenerateInput on a degenerate blade.
Multivector invert_blade(const Blade& b);

// v o B = (v B - (-1)^k B v) / 2, the grade-(k-1) slice of v B.
Multivector graded_commutator(const VecN& v, const Blade& b);

// v ^^ B = (v B + (-1)^k B v) / 2 = v wedge B, the grade-(k+1) slice.
Multivector graded_anticommutator(const VecN& v, const Blade& b);

// det of the k x k matrix whose rows are `rows`, computed as the Clifford
// quotient (u1 ^ ... ^ uk) (I_k)^{-1}. Returns 0 for dependent rows.
double det_via_quotient(const std::vector<VecN>& rows);

// Grade-1 extraction that refuses to discard a residual above
// rel_tol * |m|. Off-grade noise bigger than that means the caller's
// algebra went wrong, not that projection is appropriate.
VecN vector_part_checked(const Multivector& m, double rel_tol,
                         const char* context = "");

}  // namespace cliffgrad
