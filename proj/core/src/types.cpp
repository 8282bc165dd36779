#include "conekit/types.hpp"

#include <string>

#include "conekit/errors.hpp"

namespace conekit {

BipartiteDims::BipartiteDims(int m, int n) : m_(m), n_(n) {
  if (m < 1 || n < 1) {
    throw DimError("bipartite dimensions must be positive, got " + std::to_string(m) + "x" +
                   std::to_string(n));
  }
}

CVec::CVec(BipartiteDims dims, Vector entries) : dims_(dims), entries_(std::move(entries)) {
  if (entries_.size() != dims_.total()) {
    throw DimError("vector length " + std::to_string(entries_.size()) + " does not match " +
                   std::to_string(dims_.m()) + "x" + std::to_string(dims_.n()));
  }
}

CMat::CMat(BipartiteDims dims, Matrix entries) : dims_(dims), entries_(std::move(entries)) {
  if (entries_.rows() != dims_.total() || entries_.cols() != dims_.total()) {
    throw DimError("matrix shape " + std::to_string(entries_.rows()) + "x" +
                   std::to_string(entries_.cols()) + " is not square of side " +
                   std::to_string(dims_.total()));
  }
}

CMat CMat::identity(BipartiteDims dims) {
  return CMat(dims, Matrix::Identity(dims.total(), dims.total()));
}

CMat CMat::zero(BipartiteDims dims) {
  return CMat(dims, Matrix::Zero(dims.total(), dims.total()));
}

CMat CMat::adjoint() const { return CMat(dims_, entries_.adjoint()); }

void require_same_dims(const BipartiteDims& a, const BipartiteDims& b, const char* what) {
  if (!(a == b)) {
    throw DimError(std::string(what) + ": factorization " + std::to_string(a.m()) + "x" +
                   std::to_string(a.n()) + " vs " + std::to_string(b.m()) + "x" +
                   std::to_string(b.n()));
  }
}

CMat operator*(const CMat& a, const CMat& b) {
  require_same_dims(a.dims(), b.dims(), "matrix product");
  return CMat(a.dims(), a.entries() * b.entries());
}

CMat operator+(const CMat& a, const CMat& b) {
  require_same_dims(a.dims(), b.dims(), "matrix sum");
  return CMat(a.dims(), a.entries() + b.entries());
}

CMat operator-(const CMat& a, const CMat& b) {
  require_same_dims(a.dims(), b.dims(), "matrix difference");
  return CMat(a.dims(), a.entries() - b.entries());
}

CMat operator*(double s, const CMat& a) { return CMat(a.dims(), s * a.entries()); }

CVec operator*(const CMat& a, const CVec& v) {
  require_same_dims(a.dims(), v.dims(), "matrix-vector product");
  return CVec(a.dims(), a.entries() * v.entries());
}

double distance(const CMat& a, const CMat& b) { return (a - b).entries().norm(); }

CMat projector(const CVec& v) {
  return CMat(v.dims(), v.entries() * v.entries().adjoint());
}

}  // namespace conekit
