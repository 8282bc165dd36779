#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "conekit/cone_membership.hpp"
#include "conekit/types.hpp"

namespace conekit {

enum class Normalization { Exact, Contractive };
enum class Locality { Global, Local };

const char* to_string(Normalization n);
const char* to_string(Locality l);

/// Tolerance on ||sum A_i^* A_i - I||_F (Exact) or lambda_max - 1 (Contractive).
inline constexpr double kNormalizationTol = 1e-9;

/// Ordered coefficients A_i of a C*-convex combination sum A_i^* X_i A_i.
struct KrausFamily {
  BipartiteDims dims{1, 1};
  std::vector<CMat> ops;
  Normalization mode = Normalization::Exact;
  /// Every A_i has OSR <= osr_bound.
  std::optional<int> osr_bound;
  /// Local means every A_i = B_i (x) C_i.
  Locality locality = Locality::Global;
  std::optional<std::uint64_t> seed;
};

/// sum lambda_j X_j with lambda_j >= 0.
struct ConicCombination {
  BipartiteDims dims{1, 1};
  std::vector<double> weights;
  std::vector<CMat> terms;
};

/// ||sum A_i^* A_i - I||_F.
double normalization_residual(const KrausFamily& f);

/// Largest OSR over the family's operators.
int max_osr(const KrausFamily& f, double tol = kDefaultRankTol);

/// Checks normalization (per mode), the OSR bound and locality.
/// The certificate of a failing report names the violated invariant in
/// `label` and carries its residual in `value`. Throws PreconditionError for
/// an empty family.
MembershipReport validate(const KrausFamily& f);

/// sum_i A_i^* X_i A_i. Call it qualified (conekit::apply): with std::vector
/// arguments, argument-dependent lookup also finds std::apply.
/// Throws DimError on a length or factorization mismatch
/// and PreconditionError when the family does not validate.
CMat apply(const KrausFamily& f, const std::vector<CMat>& inputs);

/// Seeded random family of `count` operators with OSR <= k.
///
/// Contractive: each A_i is a sum of k Gaussian product terms, globally
/// rescaled so that lambda_max(sum A_i^* A_i) = 1.
/// Exact: A_i = (B_a (x) C_b V_a) U where {B_a}, {C_b} are Gaussian local
/// families normalized by S^{-1/2}, V_a local unitaries and U a random
/// controlled unitary of OSR <= k (identity when k = 1). Normalization and
/// the OSR bound then hold by construction for every k, including k = d;
/// plain Ginibre operators times S^{-1/2} would reach OSR up to d^2.
KrausFamily random_family(const BipartiteDims& dims, int count, int k, Normalization mode,
                          std::uint64_t seed);

/// Appends B_j = sqrt(mu_j) f_j u_j^* for the spectral decomposition
/// I - S = sum mu_j u_j u_j^* (mu_j > 1e-12), taking f_j from `anchor_basis`.
/// The result is Exact with osr_bound set to the certified maximum OSR.
KrausFamily complete_to_identity(const KrausFamily& partial,
                                 const std::vector<CVec>& anchor_basis);

/// Standard product basis {e_i (x) f_j}.
std::vector<CVec> standard_product_basis(const BipartiteDims& dims);

struct CollapseConstruction {
  KrausFamily family;
  std::vector<CMat> inputs;
  double c = 0.0;
  /// Number of leading operators of the form c e_i v^*.
  int primary_count = 0;
};

/// Family and PPT inputs whose combination equals v v^*: A_i = c e_i v^*
/// with inputs I / (c^2 M), completed by rank-one operators with zero inputs.
CollapseConstruction collapse_construction(const CVec& v);

/// Scale used by collapse_construction: c = 1/sqrt(2M).
double collapse_scale(const BipartiteDims& dims);

/// Single-operator contractive family {u v^*} with OSR = SR(v) <= k.
/// Throws PreconditionError unless SR(u_product) = 1 and SR(v) <= k.
KrausFamily embed_schmidt_k(const CVec& v, int k, const CVec& u_product);

struct WitnessBreak {
  CMat conjugated;  // U^* W U
  CVec product;     // u (x) v
  CMat unitary;     // U with U(u (x) v) = z / ||z||
  double expectation = 0.0;
};

/// Conjugates W by the unitary lifting u (x) v onto z / ||z||, so that the
/// product vector u (x) v sees the negative value z^* W z / ||z||^2.
WitnessBreak witness_conjugation(const CMat& w, const CVec& z, const Vector& u, const Vector& v,
                                 double tol = 1e-9);

/// Single-unitary family {U^*} with U = lift_product_to_target(u, v, w),
/// mapping the product projector (uu^*) (x) (vv^*) to w w^*.
KrausFamily rank_one_lift_family(const Vector& u, const Vector& v, const CVec& w);

CMat conic_scale(const ConicCombination& c);

}  // namespace conekit
