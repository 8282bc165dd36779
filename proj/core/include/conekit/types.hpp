#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace conekit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default relative singular-value cutoff for SR / OSR.
inline constexpr double kDefaultRankTol = 1e-9;

/// Factorization C^m (x) C^n of the ambient space. Basis vector e_i (x) f_j
/// sits at flat index i*n + j everywhere in the library.
class BipartiteDims {
 public:
  BipartiteDims(int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  /// min(m, n): the largest possible Schmidt rank.
  int d() const { return m_ < n_ ? m_ : n_; }
  /// m*n: the dimension of the tensor product.
  int total() const { return m_ * n_; }

  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;

 private:
  int m_;
  int n_;
};

/// Vector in C^m (x) C^n.
class CVec {
 public:
  CVec(BipartiteDims dims, Vector entries);

  const BipartiteDims& dims() const { return dims_; }
  const Vector& entries() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i * dims_.n() + j); }
  double norm() const { return entries_.norm(); }

 private:
  BipartiteDims dims_;
  Vector entries_;
};

/// Square operator on C^m (x) C^n.
class CMat {
 public:
  CMat(BipartiteDims dims, Matrix entries);

  static CMat identity(BipartiteDims dims);
  static CMat zero(BipartiteDims dims);

  const BipartiteDims& dims() const { return dims_; }
  const Matrix& entries() const { return entries_; }
  int size() const { return dims_.total(); }

  CMat adjoint() const;

 private:
  BipartiteDims dims_;
  Matrix entries_;
};

CMat operator*(const CMat& a, const CMat& b);
CMat operator+(const CMat& a, const CMat& b);
CMat operator-(const CMat& a, const CMat& b);
CMat operator*(double s, const CMat& a);
CVec operator*(const CMat& a, const CVec& v);

/// Frobenius norm of a - b.
double distance(const CMat& a, const CMat& b);

/// v v^*.
CMat projector(const CVec& v);

/// Throws DimError unless both operands carry the same factorization.
void require_same_dims(const BipartiteDims& a, const BipartiteDims& b, const char* what);

}  // namespace conekit
