#include "conekit/random.hpp"

#include <cmath>

#include "conekit/errors.hpp"
#include "conekit/tensor_core.hpp"

namespace conekit {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int Rng::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

double Rng::normal() { return normal_(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

Vector Rng::ginibre_vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

Matrix Rng::ginibre(int rows, int cols) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = complex_normal();
  }
  return g;
}

Vector Rng::unit_vector(int n) {
  for (;;) {
    Vector v = ginibre_vector(n);
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
}

Matrix Rng::haar_unitary(int n) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(n, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

CVec random_product_vector(Rng& rng, const BipartiteDims& dims) {
  const Vector u = rng.unit_vector(dims.m());
  const Vector v = rng.unit_vector(dims.n());
  return kron(u, v);
}

CVec random_vector_with_schmidt_rank(Rng& rng, const BipartiteDims& dims, int r) {
  if (r < 1 || r > dims.d()) {
    throw PreconditionError("planted Schmidt rank must lie in [1, min(m, n)]");
  }
  Vector acc = Vector::Zero(dims.total());
  for (int l = 0; l < r; ++l) {
    acc += kron(rng.ginibre_vector(dims.m()), rng.ginibre_vector(dims.n())).entries();
  }
  return CVec(dims, acc / acc.norm());
}

CMat random_operator_with_osr(Rng& rng, const BipartiteDims& dims, int k) {
  const int max_osr = std::min(dims.m() * dims.m(), dims.n() * dims.n());
  if (k < 1 || k > max_osr) {
    throw PreconditionError("planted operator Schmidt rank out of range");
  }
  Matrix acc = Matrix::Zero(dims.total(), dims.total());
  for (int l = 0; l < k; ++l) {
    acc += kron(rng.ginibre(dims.m(), dims.m()), rng.ginibre(dims.n(), dims.n())).entries();
  }
  return CMat(dims, std::move(acc));
}

CMat random_wishart(Rng& rng, const BipartiteDims& dims, int rank) {
  if (rank < 1) throw PreconditionError("Wishart rank must be positive");
  const Matrix g = rng.ginibre(rank, dims.total());
  Matrix x = g.adjoint() * g;
  x /= x.trace().real();
  return hermitian_part(CMat(dims, std::move(x)));
}

CMat random_separable(Rng& rng, const BipartiteDims& dims, int terms) {
  if (terms < 1) throw PreconditionError("separable sample needs at least one term");
  Matrix acc = Matrix::Zero(dims.total(), dims.total());
  double total = 0.0;
  for (int t = 0; t < terms; ++t) {
    const double weight = rng.uniform(0.05, 1.0);
    const CVec p = random_product_vector(rng, dims);
    acc += weight * p.entries() * p.entries().adjoint();
    total += weight;
  }
  return hermitian_part(CMat(dims, acc / total));
}

CMat random_ppt(Rng& rng, const BipartiteDims& dims, int max_draws) {
  const int total = dims.total();
  CMat last = CMat::zero(dims);
  double last_gamma_min = 0.0;
  for (int draw = 0; draw < max_draws; ++draw) {
    last = random_wishart(rng, dims, total);
    last_gamma_min = min_eigenvalue(hermitian_part(partial_transpose(last)));
    if (last_gamma_min >= 0.0) return last;
  }
  // Gamma(X_t) = (1-t) Gamma(X) + t I/M; the PPT boundary is at
  // t* = -g / (1/M - g) for g = lambda_min(Gamma(X)) < 0.
  const double inv_m = 1.0 / total;
  const double boundary = -last_gamma_min / (inv_m - last_gamma_min);
  const double t = boundary + rng.uniform(0.05, 0.5) * (1.0 - boundary);
  Matrix mixed = (1.0 - t) * last.entries() + t * inv_m * Matrix::Identity(total, total);
  return hermitian_part(CMat(dims, std::move(mixed)));
}

}  // namespace conekit
