#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "conekit/types.hpp"

namespace conekit {

enum class Verdict { In, Out, Indeterminate };

const char* to_string(Verdict v);

enum class CertificateKind {
  /// Extremal eigenpair of the matrix itself.
  Eigenpair,
  /// Extremal eigenpair of the partial transpose.
  PartialTransposeEigenpair,
  /// Product vector z (x) y with a negative expectation value.
  ProductVector,
  /// Rank-one input whose range vector has Schmidt rank >= 2.
  SchmidtRank,
  /// A Kraus-family invariant (normalization, OSR bound, locality) failed.
  InvariantViolation,
};

const char* to_string(CertificateKind k);

/// Evidence attached to a verdict. Which optional fields are set depends on
/// `kind`; `value` always holds the quantity that witnesses the verdict
/// (an eigenvalue, an expectation, a Schmidt rank or a residual).
struct Certificate {
  CertificateKind kind = CertificateKind::Eigenpair;
  double value = 0.0;
  std::optional<Vector> vector;
  std::optional<Vector> left;
  std::optional<Vector> right;
  std::string label;
};

struct MembershipReport {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<Certificate> certificate;
  double min_eig = 0.0;
  double tol = 0.0;
  std::optional<std::uint64_t> seed;
};

/// Controls the alternating (see-saw) product-vector optimization.
struct SeesawConfig {
  int restarts = 32;
  int iters_per_restart = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;

  void validate() const;
};

/// Asymmetry (Frobenius) above which inputs are rejected instead of symmetrized.
inline constexpr double kHermiticitySlack = 100.0;

/// Symmetrizes x when ||x - x^*||_F <= 100 tol, otherwise throws HermiticityError.
CMat require_hermitian(const CMat& x, double tol);

MembershipReport is_psd(const CMat& x, double tol = 1e-9);
MembershipReport is_ppt(const CMat& x, double tol = 1e-9);

/// Separability with an exact answer on the decidable region: m*n <= 6 (PPT
/// criterion), rank-one inputs (product range vector), or failed PPT.
/// Everything else is Indeterminate. Throws PreconditionError for non-PSD x.
MembershipReport is_separable_decidable(const CMat& x, double tol = 1e-9);

struct ProductMinimum {
  double value = 0.0;
  Vector z;  // in C^m
  Vector y;  // in C^n
};

/// Heuristic minimum of (z (x) y)^* W (z (x) y) over unit z, y.
/// The returned value is attained, so it upper-bounds the true minimum.
ProductMinimum min_product_expectation(const CMat& w, const SeesawConfig& cfg = {});

/// Out with a product-vector certificate when a violation below -tol is
/// found; In only when W is PSD; Indeterminate otherwise.
MembershipReport is_block_positive_heuristic(const CMat& w, const SeesawConfig& cfg = {});

struct SchmidtMinimum {
  double value = 0.0;
  CVec v;
};

/// Heuristic minimum of v^* W v over unit v with SR(v) <= k. Exact for k = d.
/// Nonincreasing in k by construction (each level is warm-started from and
/// never worse than the level below).
SchmidtMinimum min_sr_k_expectation(const CMat& w, int k, const SeesawConfig& cfg = {});

/// Re-evaluates an Out certificate against x and returns the violating
/// quantity (negative eigenvalue / expectation, or Schmidt rank for the
/// rank-one rule). Throws PreconditionError when the certificate is absent.
double reevaluate_certificate(const CMat& x, const MembershipReport& report);

}  // namespace conekit
