#pragma once

// Test-side reference computations. None of these go through the library's
// SVD / eigen-solver paths, so agreement is a genuine cross-check.

#include <cstdint>
#include <vector>

#include "conekit/types.hpp"

namespace oracle {

using conekit::Matrix;
using conekit::RealVector;
using conekit::Vector;

// Entry-wise definitions.
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
// <i k| G(X) |j l> = <i l| X |j k>
Matrix partial_transpose(const Matrix& x, int m, int n);

// Eigenvalues through the general (non-Hermitian) complex solver, real
// parts, ascending.
RealVector eigenvalues(const Matrix& h);

// Smallest r such that v = sum_{t<r} x_t (x) y_t to relative error rel_tol,
// found by alternating least squares over the terms themselves. Returns
// max_rank + 1 if no r <= max_rank fits.
int min_terms_vector(const Vector& v, int m, int n, int max_rank, double rel_tol,
                     std::uint64_t seed);

// Same for A = sum_{t<r} R_t (x) S_t with R_t m x m and S_t n x n.
int min_terms_operator(const Matrix& a, int m, int n, int max_rank, double rel_tol,
                       std::uint64_t seed);

// Minimum of (z (x) y)^* W (z (x) y) over a Bloch-sphere grid (2 x 2 only),
// steps x steps points per factor.
double grid_product_min_2x2(const Matrix& w, int steps);

// The five-vector "Tiles" unextendible product basis in 3 x 3 and the
// normalized projector onto its orthogonal complement (PPT, entangled).
std::vector<Vector> tiles_basis();
Matrix tiles_state();

}  // namespace oracle
