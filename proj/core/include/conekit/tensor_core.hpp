#pragma once

#include <vector>

#include "conekit/types.hpp"

namespace conekit {

/// Schmidt decomposition v = sum_i coeffs[i] * left[i] (x) right[i].
///
/// All min(m, n) singular triples are kept; `rank` counts the coefficients
/// at or above `tol * coeffs[0]`.
struct SchmidtDecomp {
  RealVector coeffs;
  std::vector<Vector> left;   // in C^m
  std::vector<Vector> right;  // in C^n
  int rank = 0;
  double tol = kDefaultRankTol;
};

/// Operator Schmidt decomposition A = sum_i coeffs[i] * left[i] (x) right[i]
/// with Frobenius-orthonormal factor families.
struct OpSchmidtDecomp {
  RealVector coeffs;
  std::vector<Matrix> left;   // m x m
  std::vector<Matrix> right;  // n x n
  int rank = 0;
  double tol = kDefaultRankTol;
};

/// Kronecker product of an m x m and an n x n matrix, tagged with (m, n).
CMat kron(const Matrix& a, const Matrix& b);

/// Product vector u (x) v.
CVec kron(const Vector& u, const Vector& v);

/// Partial transpose on the second tensor factor.
CMat partial_transpose(const CMat& x);

/// Realignment of A into the m^2 x n^2 matrix R[(i,k),(j,l)] = A[(i,j),(k,l)],
/// whose matrix rank is OSR(A).
Matrix realign(const CMat& a);

/// m x n coefficient matrix C(i, j) = v(i*n + j).
Matrix coefficient_matrix(const CVec& v);

/// Number of singular values at or above tol * sigma_max.
int count_rank(const RealVector& singular_values, double tol);

SchmidtDecomp schmidt_decompose(const CVec& v, double tol = kDefaultRankTol);
OpSchmidtDecomp op_schmidt_decompose(const CMat& a, double tol = kDefaultRankTol);

/// Sum of the first `terms` Schmidt terms (defaults to the rank).
CVec reconstruct(const SchmidtDecomp& s, const BipartiteDims& dims, int terms = -1);
CMat reconstruct(const OpSchmidtDecomp& s, const BipartiteDims& dims, int terms = -1);

int sr(const CVec& v, double tol = kDefaultRankTol);
int osr(const CMat& a, double tol = kDefaultRankTol);

/// Unitary U on C^m (x) C^n with U(u (x) v) = w.
///
/// Built by completing {u (x) v} and {w} to orthonormal bases with the
/// standard basis (two Gram-Schmidt passes) and pairing the bases in order.
/// Throws NormError unless u, v, w are unit vectors.
CMat lift_product_to_target(const Vector& u, const Vector& v, const CVec& w);

/// Orthonormal basis of C^n whose first column is the unit vector `first`.
Matrix complete_orthonormal_basis(const Vector& first);

/// Flip operator F(x (x) y) = y (x) x; requires m == n.
CMat swap_operator(const BipartiteDims& dims);

/// (1/sqrt(d)) sum_{i<d} e_i (x) f_i. The Bell vector for 2x2.
CVec maximally_entangled(const BipartiteDims& dims);

/// e_i (x) f_j.
CVec product_basis_vector(const BipartiteDims& dims, int i, int j);

/// Hermitian part (x + x^*)/2.
CMat hermitian_part(const CMat& x);

/// ||x - x^*||_F.
double hermiticity_defect(const CMat& x);

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
struct Eigensystem {
  RealVector values;
  Matrix vectors;
};
Eigensystem hermitian_eigensystem(const Matrix& h);

double min_eigenvalue(const CMat& h);
double max_eigenvalue(const CMat& h);

/// sum_i A_i^* A_i.
Matrix gram_sum(const std::vector<CMat>& ops, const BipartiteDims& dims);

}  // namespace conekit
