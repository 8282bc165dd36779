#pragma once

#include <cmath>

#include "conekit/random.hpp"
#include "conekit/tensor_core.hpp"
#include "conekit/types.hpp"

namespace fx {

using namespace conekit;

inline const BipartiteDims k2x2{2, 2};
inline const BipartiteDims k2x3{2, 3};
inline const BipartiteDims k3x3{3, 3};

inline CVec bell() { return maximally_entangled(k2x2); }
inline CMat bell_projector() { return projector(bell()); }

// Singlet (e0 f1 - e1 f0)/sqrt(2).
inline CVec singlet() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return CVec(k2x2, v);
}

inline CMat random_hermitian(Rng& rng, const BipartiteDims& dims) {
  const Matrix g = rng.ginibre(dims.total(), dims.total());
  return CMat(dims, (g + g.adjoint()) / 2.0);
}

inline double frob(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

}  // namespace fx
