#include "conekit/tensor_core.hpp"

#include <cmath>
#include <string>

#include "conekit/errors.hpp"

namespace conekit {
namespace {

constexpr double kUnitNormTol = 1e-10;

void require_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw PreconditionError("rank tolerance must lie in (0, 1), got " + std::to_string(tol));
  }
}

void require_unit(const Vector& x, const char* name) {
  if (std::abs(x.norm() - 1.0) > kUnitNormTol) {
    throw NormError(std::string(name) + " must be a unit vector (norm " +
                    std::to_string(x.norm()) + ")");
  }
}

}  // namespace

CMat kron(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw DimError("kron expects square factors");
  }
  if (a.rows() == 0 || b.rows() == 0) {
    throw DimError("kron factors must be non-empty");
  }
  const auto m = a.rows();
  const auto n = b.rows();
  Matrix out(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      out.block(i * n, k * n, n, n) = a(i, k) * b;
    }
  }
  return CMat(BipartiteDims(static_cast<int>(m), static_cast<int>(n)), std::move(out));
}

CVec kron(const Vector& u, const Vector& v) {
  if (u.size() == 0 || v.size() == 0) {
    throw DimError("kron factors must be non-empty");
  }
  const auto m = u.size();
  const auto n = v.size();
  Vector out(m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.segment(i * n, n) = u(i) * v;
  }
  return CVec(BipartiteDims(static_cast<int>(m), static_cast<int>(n)), std::move(out));
}

CMat partial_transpose(const CMat& x) {
  const int m = x.dims().m();
  const int n = x.dims().n();
  const Matrix& src = x.entries();
  Matrix out(src.rows(), src.cols());
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      out.block(i * n, k * n, n, n) = src.block(i * n, k * n, n, n).transpose();
    }
  }
  return CMat(x.dims(), std::move(out));
}

Matrix realign(const CMat& a) {
  const int m = a.dims().m();
  const int n = a.dims().n();
  const Matrix& src = a.entries();
  Matrix out(m * m, n * n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
          out(i * m + k, j * n + l) = src(i * n + j, k * n + l);
        }
      }
    }
  }
  return out;
}

Matrix coefficient_matrix(const CVec& v) {
  const int m = v.dims().m();
  const int n = v.dims().n();
  Matrix c(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = v(i, j);
  }
  return c;
}

int count_rank(const RealVector& singular_values, double tol) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (top <= 0.0) return 0;
  // Inclusive at the cutoff: a borderline value is counted as nonzero.
  const double cutoff = tol * top;
  int r = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) >= cutoff) ++r;
  }
  return r;
}

SchmidtDecomp schmidt_decompose(const CVec& v, double tol) {
  require_tol(tol);
  if (v.entries().norm() == 0.0) {
    throw ZeroInputError("Schmidt decomposition of the zero vector");
  }
  Eigen::JacobiSVD<Matrix> svd(coefficient_matrix(v), Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtDecomp out;
  out.tol = tol;
  out.coeffs = svd.singularValues();
  const auto terms = out.coeffs.size();
  out.left.reserve(terms);
  out.right.reserve(terms);
  for (Eigen::Index i = 0; i < terms; ++i) {
    out.left.emplace_back(svd.matrixU().col(i));
    out.right.emplace_back(svd.matrixV().col(i).conjugate());
  }
  out.rank = count_rank(out.coeffs, tol);
  return out;
}

OpSchmidtDecomp op_schmidt_decompose(const CMat& a, double tol) {
  require_tol(tol);
  if (a.entries().norm() == 0.0) {
    throw ZeroInputError("operator Schmidt decomposition of the zero matrix");
  }
  const int m = a.dims().m();
  const int n = a.dims().n();
  Eigen::JacobiSVD<Matrix> svd(realign(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  OpSchmidtDecomp out;
  out.tol = tol;
  out.coeffs = svd.singularValues();
  const auto terms = out.coeffs.size();
  for (Eigen::Index t = 0; t < terms; ++t) {
    Matrix r(m, m);
    Matrix s(n, n);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) r(i, k) = svd.matrixU()(i * m + k, t);
    }
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) s(j, l) = std::conj(svd.matrixV()(j * n + l, t));
    }
    out.left.push_back(std::move(r));
    out.right.push_back(std::move(s));
  }
  out.rank = count_rank(out.coeffs, tol);
  return out;
}

CVec reconstruct(const SchmidtDecomp& s, const BipartiteDims& dims, int terms) {
  if (terms < 0) terms = s.rank;
  Vector acc = Vector::Zero(dims.total());
  for (int i = 0; i < terms; ++i) {
    acc += s.coeffs(i) * kron(s.left[i], s.right[i]).entries();
  }
  return CVec(dims, std::move(acc));
}

CMat reconstruct(const OpSchmidtDecomp& s, const BipartiteDims& dims, int terms) {
  if (terms < 0) terms = s.rank;
  Matrix acc = Matrix::Zero(dims.total(), dims.total());
  for (int i = 0; i < terms; ++i) {
    acc += s.coeffs(i) * kron(s.left[i], s.right[i]).entries();
  }
  return CMat(dims, std::move(acc));
}

int sr(const CVec& v, double tol) { return schmidt_decompose(v, tol).rank; }

int osr(const CMat& a, double tol) { return op_schmidt_decompose(a, tol).rank; }

Matrix complete_orthonormal_basis(const Vector& first) {
  const auto dim = first.size();
  if (dim == 0) throw DimError("cannot complete an empty vector to a basis");
  if (first.norm() == 0.0) throw ZeroInputError("cannot complete the zero vector to a basis");

  Matrix basis(dim, dim);
  basis.col(0) = first / first.norm();
  Eigen::Index filled = 1;
  for (Eigen::Index k = 0; k < dim && filled < dim; ++k) {
    Vector r = Vector::Unit(dim, k);
    for (int pass = 0; pass < 2; ++pass) {
      const auto q = basis.leftCols(filled);
      r -= q * (q.adjoint() * r);
    }
    const double norm = r.norm();
    if (norm > 1e-6) {
      basis.col(filled++) = r / norm;
    }
  }
  if (filled != dim) {
    throw Error("orthonormal completion failed to span the space");
  }
  return basis;
}

CMat lift_product_to_target(const Vector& u, const Vector& v, const CVec& w) {
  require_unit(u, "u");
  require_unit(v, "v");
  require_unit(w.entries(), "w");
  const CVec source = kron(u, v);
  require_same_dims(source.dims(), w.dims(), "lift_product_to_target");
  const Matrix from = complete_orthonormal_basis(source.entries());
  const Matrix to = complete_orthonormal_basis(w.entries());
  return CMat(w.dims(), to * from.adjoint());
}

CMat swap_operator(const BipartiteDims& dims) {
  if (dims.m() != dims.n()) {
    throw DimError("swap operator needs equal factor dimensions");
  }
  const int n = dims.n();
  Matrix f = Matrix::Zero(dims.total(), dims.total());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) f(j * n + i, i * n + j) = 1.0;
  }
  return CMat(dims, std::move(f));
}

CVec maximally_entangled(const BipartiteDims& dims) {
  Vector v = Vector::Zero(dims.total());
  const double amp = 1.0 / std::sqrt(static_cast<double>(dims.d()));
  for (int i = 0; i < dims.d(); ++i) v(i * dims.n() + i) = amp;
  return CVec(dims, std::move(v));
}

CVec product_basis_vector(const BipartiteDims& dims, int i, int j) {
  if (i < 0 || i >= dims.m() || j < 0 || j >= dims.n()) {
    throw DimError("product basis index out of range");
  }
  return CVec(dims, Vector::Unit(dims.total(), i * dims.n() + j));
}

CMat hermitian_part(const CMat& x) {
  return CMat(x.dims(), 0.5 * (x.entries() + x.entries().adjoint()));
}

double hermiticity_defect(const CMat& x) {
  return (x.entries() - x.entries().adjoint()).norm();
}

Eigensystem hermitian_eigensystem(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error("Hermitian eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Matrix gram_sum(const std::vector<CMat>& ops, const BipartiteDims& dims) {
  Matrix s = Matrix::Zero(dims.total(), dims.total());
  for (const auto& a : ops) {
    require_same_dims(a.dims(), dims, "gram_sum");
    s.noalias() += a.entries().adjoint() * a.entries();
  }
  return s;
}

}  // namespace conekit
