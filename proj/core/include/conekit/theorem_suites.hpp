#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conekit/cstar_constructions.hpp"
#include "conekit/types.hpp"

namespace conekit {

inline constexpr double kSuiteTol = 1e-9;
inline constexpr double kConstructionTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-12;

struct FailureRecord {
  int trial = 0;
  std::uint64_t trial_seed = 0;
  double residual = 0.0;
  nlohmann::json payload;
};

/// Outcome of a seeded randomized verification run.
///
/// `verdict` is "pass" or "fail" for theorem suites, "exploratory" for the
/// intermediate-cone probe and "n/a" when the suite precondition does not
/// hold. passes + failures.size() == trials.
struct SuiteReport {
  std::string suite_id;
  BipartiteDims dims{1, 1};
  int trials = 0;
  int passes = 0;
  std::vector<FailureRecord> failures;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  double max_residual = 0.0;
  double wall_time = 0.0;
  std::string verdict;
  nlohmann::json details = nlohmann::json::object();
};

struct SuiteParams {
  SuiteParams() = default;
  SuiteParams(BipartiteDims dims_, int trials_, std::uint64_t seed_)
      : dims(dims_), trials(trials_), seed(seed_) {}

  BipartiteDims dims{2, 2};
  int trials = 500;
  std::uint64_t seed = 0;
  /// OSR bound for probe-intermediate; 0 means min(m, n).
  int k = 0;
  /// Target vector (strict-enlargement) or witness (witness-not-cstar) for trial 0.
  std::optional<CVec> target;
  std::optional<CMat> witness;
  /// Extra PPT inputs, e.g. bound-entangled states read from files (ppt-stability).
  std::vector<CMat> extra_inputs;
};

/// Identifiers accepted by run_suite, in a stable order.
const std::vector<std::string>& suite_ids();

/// Runs a suite by identifier. Throws PreconditionError for an unknown id or
/// unsupported dimensions.
SuiteReport run_suite(const std::string& suite_id, const SuiteParams& params);

/// Re-runs a recorded failure from its embedded seed and returns the residual.
double replay_failure(const std::string& suite_id, const SuiteParams& params,
                      const FailureRecord& failure);

SuiteReport suite_lemma_srank(const BipartiteDims& dims, int trials, std::uint64_t seed);
SuiteReport suite_strict_enlargement(const BipartiteDims& dims, std::uint64_t seed,
                                     std::optional<CVec> target = std::nullopt);
SuiteReport suite_cone_collapse_pplus(const BipartiteDims& dims, int trials, std::uint64_t seed);
SuiteReport suite_local_stability(const BipartiteDims& dims, int trials, std::uint64_t seed);
SuiteReport suite_witness_not_cstar(const BipartiteDims& dims, std::uint64_t seed,
                                    std::optional<CMat> witness = std::nullopt);
SuiteReport suite_ppt_stability(const BipartiteDims& dims, int trials, std::uint64_t seed,
                                const std::vector<CMat>& extra_inputs = {});
SuiteReport suite_ppt_collapse(const BipartiteDims& dims, int trials, std::uint64_t seed);
SuiteReport suite_schmidt_embedding(const BipartiteDims& dims, int trials, std::uint64_t seed);
SuiteReport probe_intermediate(const BipartiteDims& dims, int k, int trials, std::uint64_t seed);

/// Spectral reconstruction of a PSD matrix from single-unitary images of
/// the product projector (uu^*) (x) (vv^*).
struct LiftedSpectralDecomposition {
  ConicCombination combination;
  /// max over eigenprojectors of the lift family's normalization residual.
  double family_residual = 0.0;
  /// ||Y - sum lambda_j P_j||_F.
  double residual = 0.0;
};

LiftedSpectralDecomposition reconstruct_psd_via_lifts(const CMat& y, const Vector& u,
                                                      const Vector& v);

/// Default witness for the non-C*-convexity suite: the swap operator when
/// m == n, otherwise the partial transpose of the maximally entangled projector.
CMat default_witness(const BipartiteDims& dims);

}  // namespace conekit
