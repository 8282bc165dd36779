#include "conekit/theorem_suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "conekit/cone_membership.hpp"
#include "conekit/errors.hpp"
#include "conekit/io.hpp"
#include "conekit/random.hpp"
#include "conekit/tensor_core.hpp"

namespace conekit {
namespace {

using nlohmann::json;

struct TrialOutcome {
  bool pass = true;
  double residual = 0.0;
  json payload;      // only kept for failures
  json observation;  // suite-specific, folded into details by `summarize`
};

struct SuiteDef {
  std::string id;
  std::map<std::string, double> tolerances;
  std::function<void(const SuiteParams&)> check;
  std::function<TrialOutcome(const SuiteParams&, int, std::uint64_t)> trial;
  std::function<void(const SuiteParams&, const std::vector<json>&, SuiteReport&)> summarize;
  /// Returns false when the suite does not apply (verdict "n/a").
  std::function<bool(const SuiteParams&)> applicable;
};

json mat(const CMat& a) { return io::matrix_to_json(a.entries()); }
json vec(const Vector& v) { return io::vector_to_json(v); }

int effective_k(const SuiteParams& p) { return p.k == 0 ? p.dims.d() : p.k; }

// -- SR(Av) <= OSR(A) SR(v) ------------------------------------------------

TrialOutcome srank_trial(const SuiteParams& p, int, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const int k = rng.uniform_int(1, dims.d());
  const int r = rng.uniform_int(1, dims.d());
  const CMat a = random_operator_with_osr(rng, dims, k);
  const CVec v = random_vector_with_schmidt_rank(rng, dims, r);
  const int osr_a = osr(a);
  const int sr_v = sr(v);
  const CVec image = a * v;
  const int sr_image = image.norm() == 0.0 ? 0 : sr(image);

  TrialOutcome out;
  const int bound = osr_a * sr_v;
  out.residual = std::max(0, sr_image - bound);
  out.pass = sr_image <= bound && osr_a <= k && (sr_v != 1 || sr_image <= osr_a);
  out.observation = json{{"planted_k", k}, {"planted_r", r}, {"sr_image", sr_image}};
  if (!out.pass) {
    out.payload = json{{"A", mat(a)},     {"v", vec(v.entries())}, {"osr_A", osr_a},
                       {"sr_v", sr_v},    {"sr_Av", sr_image},     {"planted_k", k},
                       {"planted_r", r}};
  }
  return out;
}

void srank_summary(const SuiteParams&, const std::vector<json>& obs, SuiteReport& report) {
  int simple = 0;
  int max_image = 0;
  for (const auto& o : obs) {
    if (o.at("planted_r") == 1) ++simple;
    max_image = std::max(max_image, o.at("sr_image").get<int>());
  }
  report.details["simple_tensor_trials"] = simple;
  report.details["max_sr_image"] = max_image;
}

// -- Strict enlargement of the separable cone -------------------------------

TrialOutcome enlargement_trial(const SuiteParams& p, int trial, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const Vector u = rng.unit_vector(dims.m());
  const Vector v = rng.unit_vector(dims.n());
  CVec target = maximally_entangled(dims);
  if (trial == 0 && p.target) {
    target = CVec(p.target->dims(), p.target->entries() / p.target->norm());
  } else if (trial > 0) {
    target = random_vector_with_schmidt_rank(rng, dims, rng.uniform_int(1, dims.d()));
  }
  require_same_dims(target.dims(), dims, "strict-enlargement target");

  const CMat seed_state = projector(kron(u, v));
  const KrausFamily family = rank_one_lift_family(u, v, target);
  const double family_residual = normalization_residual(family);
  const bool family_ok = validate(family).verdict == Verdict::In;
  const CMat image = conekit::apply(family, {seed_state});
  const double output_residual = distance(image, projector(target));
  const MembershipReport sep = is_separable_decidable(image, kSuiteTol);
  const int target_sr = sr(target);
  const double gamma_min = min_eigenvalue(hermitian_part(partial_transpose(image)));
  const Verdict expected = target_sr == 1 ? Verdict::In : Verdict::Out;

  TrialOutcome out;
  out.residual = std::max(family_residual, output_residual);
  out.pass = family_ok && family_residual <= kUnitaryTol && output_residual <= kConstructionTol &&
             sep.verdict == expected;
  out.observation = json{{"trial", trial},
                         {"target_sr", target_sr},
                         {"separability", to_string(sep.verdict)},
                         {"gamma_min_eig", gamma_min},
                         {"family_residual", family_residual},
                         {"output_residual", output_residual}};
  if (!out.pass) {
    out.payload = json{{"u", vec(u)},         {"v", vec(v)},
                       {"target", vec(target.entries())}, {"unitary_adjoint", mat(family.ops[0])},
                       {"separability", to_string(sep.verdict)}};
  }
  return out;
}

void enlargement_summary(const SuiteParams&, const std::vector<json>& obs, SuiteReport& report) {
  report.details["trials"] = obs;
  int witnessed = 0;
  for (const auto& o : obs) {
    if (o.at("separability") == "out") ++witnessed;
  }
  report.details["enlargements_witnessed"] = witnessed;
}

// -- cone(MCL(P+)) = P0 via lifted eigenprojectors -------------------------

TrialOutcome cone_collapse_trial(const SuiteParams& p, int, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const int rank = rng.uniform_int(1, dims.total());
  const CMat y = random_wishart(rng, dims, rank);
  const Vector u = rng.unit_vector(dims.m());
  const Vector v = rng.unit_vector(dims.n());
  const LiftedSpectralDecomposition rec = reconstruct_psd_via_lifts(y, u, v);

  TrialOutcome out;
  out.residual = rec.residual;
  out.pass = rec.residual <= kSuiteTol && rec.family_residual <= kSuiteTol;
  out.observation = json{{"rank", rank}, {"terms", rec.combination.terms.size()}};
  if (!out.pass) {
    out.payload = json{{"Y", mat(y)}, {"u", vec(u)}, {"v", vec(v)},
                       {"family_residual", rec.family_residual}};
  }
  return out;
}

// -- Local stability of the separable cone ---------------------------------

void require_decidable(const SuiteParams& p) {
  if (p.dims.total() > 6) {
    throw PreconditionError("local-stability needs m*n <= 6 so separability is decidable");
  }
}

TrialOutcome local_stability_trial(const SuiteParams& p, int, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const int count = rng.uniform_int(1, 4);
  const KrausFamily family =
      random_family(dims, count, 1, Normalization::Exact, derive_seed(seed, 1));
  std::vector<CMat> inputs;
  for (int i = 0; i < count; ++i) {
    inputs.push_back(random_separable(rng, dims, rng.uniform_int(1, dims.total())));
  }
  const CMat y = conekit::apply(family, inputs);
  const MembershipReport sep = is_separable_decidable(y, kSuiteTol);

  TrialOutcome out;
  out.residual = std::max(0.0, -sep.min_eig);
  out.pass = sep.verdict == Verdict::In && validate(family).verdict == Verdict::In;
  out.observation = json{{"count", count}};
  if (!out.pass) {
    json in = json::array();
    for (const auto& x : inputs) in.push_back(mat(x));
    out.payload = json{{"family", io::to_json(family)}, {"inputs", in}, {"output", mat(y)}};
  }
  return out;
}

// -- Block-positive cone is not C*-convex ----------------------------------

CMat witness_for(const SuiteParams& p) {
  return p.witness ? *p.witness : default_witness(p.dims);
}

bool witness_applicable(const SuiteParams& p) {
  const CMat w = require_hermitian(witness_for(p), kSuiteTol);
  return min_eigenvalue(w) < -kSuiteTol;
}

TrialOutcome witness_trial(const SuiteParams& p, int trial, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const CMat w = require_hermitian(witness_for(p), kSuiteTol);
  const Eigensystem es = hermitian_eigensystem(w.entries());
  const CVec z(dims, es.vectors.col(0));
  Vector u = Vector::Unit(dims.m(), 0);
  Vector v = Vector::Unit(dims.n(), 0);
  if (trial > 0) {
    u = rng.unit_vector(dims.m());
    v = rng.unit_vector(dims.n());
  }
  const WitnessBreak wb = witness_conjugation(w, z, u, v, kSuiteTol);
  const double target = (z.entries().adjoint() * w.entries() * z.entries())(0).real() /
                        z.entries().squaredNorm();
  const double unitarity = distance(wb.unitary.adjoint() * wb.unitary, CMat::identity(dims));
  const double identity_gap = std::abs(wb.expectation - target);

  TrialOutcome out;
  out.residual = std::max(identity_gap, unitarity);
  out.pass = wb.expectation < -kSuiteTol && identity_gap <= kConstructionTol &&
             unitarity <= kUnitaryTol;
  out.observation = json{{"trial", trial},
                         {"expectation", wb.expectation},
                         {"target_value", target},
                         {"unitarity_residual", unitarity}};
  if (!out.pass) {
    out.payload = json{{"W", mat(w)}, {"z", vec(z.entries())}, {"u", vec(u)}, {"v", vec(v)},
                       {"expectation", wb.expectation}};
  }
  return out;
}

void witness_summary(const SuiteParams& p, const std::vector<json>& obs, SuiteReport& report) {
  report.details["trials"] = obs;
  if (obs.empty()) return;
  // The original witness: PSD-free, so the heuristic can only reject or abstain.
  SeesawConfig cfg;
  cfg.seed = report.seed;
  cfg.restarts = 8;
  const MembershipReport original = is_block_positive_heuristic(witness_for(p), cfg);
  report.details["witness_block_positivity"] = to_string(original.verdict);
}

// -- PPT stability under OSR-1 families ------------------------------------

TrialOutcome ppt_stability_trial(const SuiteParams& p, int trial, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const int count = rng.uniform_int(1, 4);
  const KrausFamily family =
      random_family(dims, count, 1, Normalization::Exact, derive_seed(seed, 1));
  std::vector<CMat> inputs;
  for (int i = 0; i < count; ++i) inputs.push_back(random_ppt(rng, dims));
  if (!p.extra_inputs.empty()) {
    inputs[0] = p.extra_inputs[static_cast<std::size_t>(trial) % p.extra_inputs.size()];
  }
  const CMat y = conekit::apply(family, inputs);
  const MembershipReport ppt = is_ppt(y, kSuiteTol);

  TrialOutcome out;
  out.residual = std::max(0.0, -ppt.min_eig);
  out.pass = ppt.verdict == Verdict::In;
  out.observation = json{{"min_eig", ppt.min_eig}};
  if (!out.pass) {
    json in = json::array();
    for (const auto& x : inputs) in.push_back(mat(x));
    out.payload = json{{"family", io::to_json(family)}, {"inputs", in}, {"output", mat(y)}};
  }
  return out;
}

void ppt_stability_summary(const SuiteParams& p, const std::vector<json>& obs,
                           SuiteReport& report) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& o : obs) worst = std::min(worst, o.at("min_eig").get<double>());
  report.details["min_output_eig"] = obs.empty() ? 0.0 : worst;
  report.details["file_inputs"] = p.extra_inputs.size();
}

// -- MCL_d(PPT) = P0 via the explicit collapse construction ----------------

TrialOutcome ppt_collapse_trial(const SuiteParams& p, int, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const CVec v(dims, rng.unit_vector(dims.total()));
  const CollapseConstruction cc = collapse_construction(v);
  const double norm_residual = normalization_residual(cc.family);
  const CMat y = conekit::apply(cc.family, cc.inputs);
  const double output_residual = distance(y, projector(v));
  const int worst_osr = max_osr(cc.family);
  bool inputs_ppt = true;
  for (const auto& x : cc.inputs) inputs_ppt = inputs_ppt && is_ppt(x, kSuiteTol).verdict == Verdict::In;

  TrialOutcome out;
  out.residual = std::max(norm_residual, output_residual);
  out.pass = norm_residual <= kConstructionTol && output_residual <= kConstructionTol &&
             worst_osr <= dims.d() && inputs_ppt;
  out.observation = json{{"sr_target", sr(v)}, {"max_osr", worst_osr},
                         {"ops", cc.family.ops.size()}};
  if (!out.pass) {
    out.payload = json{{"v", vec(v.entries())}, {"normalization_residual", norm_residual},
                       {"output_residual", output_residual}, {"max_osr", worst_osr},
                       {"inputs_ppt", inputs_ppt}};
  }
  return out;
}

void collapse_summary(const SuiteParams&, const std::vector<json>& obs, SuiteReport& report) {
  int worst = 0;
  for (const auto& o : obs) worst = std::max(worst, o.at("max_osr").get<int>());
  report.details["max_operator_osr"] = worst;
  report.details["c"] = collapse_scale(report.dims);
}

// -- Schmidt-number embedding u v^* ----------------------------------------

TrialOutcome embedding_trial(const SuiteParams& p, int, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const int k = rng.uniform_int(1, dims.d());
  const int r = rng.uniform_int(1, k);
  const CVec v = random_vector_with_schmidt_rank(rng, dims, r);
  const CVec u = random_product_vector(rng, dims);
  const KrausFamily family = embed_schmidt_k(v, k, u);
  const bool valid = validate(family).verdict == Verdict::In;
  const int osr_a = osr(family.ops[0]);
  const int sr_v = sr(v);
  const CMat y = conekit::apply(family, {CMat::identity(dims)});
  const double output_residual = distance(y, projector(v));
  const double contraction =
      std::abs(max_eigenvalue(family.ops[0].adjoint() * family.ops[0]) - 1.0);

  TrialOutcome out;
  out.residual = std::max(output_residual, contraction);
  out.pass = valid && osr_a == sr_v && sr_v <= k && output_residual <= kConstructionTol &&
             contraction <= kConstructionTol;
  out.observation = json{{"k", k}, {"sr_v", sr_v}};
  if (!out.pass) {
    out.payload = json{{"v", vec(v.entries())}, {"u", vec(u.entries())}, {"k", k},
                       {"osr_A", osr_a},         {"sr_v", sr_v},
                       {"output_residual", output_residual}};
  }
  return out;
}

// -- Exploratory probe of MCL_k(PPT) ----------------------------------------

TrialOutcome probe_trial(const SuiteParams& p, int trial, std::uint64_t seed) {
  Rng rng(seed);
  const auto& dims = p.dims;
  const int k = effective_k(p);
  const int count = rng.uniform_int(1, 4);
  const KrausFamily family =
      random_family(dims, count, k, Normalization::Exact, derive_seed(seed, 1));
  // Boundary (pure product) and interior (mixed) PPT inputs in equal measure.
  std::vector<CMat> inputs;
  for (int i = 0; i < count; ++i) {
    if (rng.uniform() < 0.5) {
      inputs.push_back(projector(random_product_vector(rng, dims)));
    } else {
      inputs.push_back(random_ppt(rng, dims));
    }
  }
  const CMat y = conekit::apply(family, inputs);
  const MembershipReport ppt = is_ppt(y, kSuiteTol);
  const double gamma_min = min_eigenvalue(hermitian_part(partial_transpose(y)));

  TrialOutcome out;
  out.pass = true;
  out.residual = 0.0;
  out.observation = json{{"trial", trial}, {"trial_seed", seed},
                         {"ppt", ppt.verdict == Verdict::In}, {"gamma_min_eig", gamma_min}};
  return out;
}

void probe_summary(const SuiteParams& p, const std::vector<json>& obs, SuiteReport& report) {
  int ppt_outputs = 0;
  json evidence = json::array();
  double most_negative = 0.0;
  for (const auto& o : obs) {
    if (o.at("ppt").get<bool>()) {
      ++ppt_outputs;
    } else {
      evidence.push_back(json{{"trial", o.at("trial")},
                              {"trial_seed", o.at("trial_seed")},
                              {"gamma_min_eig", o.at("gamma_min_eig")}});
      most_negative = std::min(most_negative, o.at("gamma_min_eig").get<double>());
    }
  }
  report.details["k"] = effective_k(p);
  report.details["ppt_outputs"] = ppt_outputs;
  report.details["non_ppt_outputs"] = static_cast<int>(obs.size()) - ppt_outputs;
  report.details["most_negative_gamma_eig"] = most_negative;
  report.details["evidence"] = std::move(evidence);
}

void no_summary(const SuiteParams&, const std::vector<json>&, SuiteReport&) {}
void no_check(const SuiteParams&) {}
bool always(const SuiteParams&) { return true; }

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs = {
      {"srank", {{"rank_tol", kDefaultRankTol}}, no_check, srank_trial, srank_summary, always},
      {"strict-enlargement",
       {{"psd_tol", kSuiteTol}, {"unitary_tol", kUnitaryTol}, {"output_tol", kConstructionTol}},
       [](const SuiteParams& p) {
         if (p.dims.m() < 2 || p.dims.n() < 2) {
           throw PreconditionError("strict-enlargement needs m, n >= 2");
         }
       },
       enlargement_trial, enlargement_summary, always},
      {"cone-collapse-pplus",
       {{"residual_tol", kSuiteTol}},
       no_check,
       cone_collapse_trial,
       no_summary,
       always},
      {"local-stability",
       {{"psd_tol", kSuiteTol}, {"normalization_tol", kNormalizationTol}},
       require_decidable,
       local_stability_trial,
       no_summary,
       always},
      {"witness-not-cstar",
       {{"psd_tol", kSuiteTol}, {"identity_tol", kConstructionTol}, {"unitary_tol", kUnitaryTol}},
       no_check,
       witness_trial,
       witness_summary,
       witness_applicable},
      {"ppt-stability",
       {{"psd_tol", kSuiteTol}, {"normalization_tol", kNormalizationTol}},
       no_check,
       ppt_stability_trial,
       ppt_stability_summary,
       always},
      {"ppt-collapse",
       {{"normalization_tol", kConstructionTol},
        {"output_tol", kConstructionTol},
        {"psd_tol", kSuiteTol}},
       no_check,
       ppt_collapse_trial,
       collapse_summary,
       always},
      {"schmidt-embedding",
       {{"output_tol", kConstructionTol}, {"rank_tol", kDefaultRankTol}},
       no_check,
       embedding_trial,
       no_summary,
       always},
      {"probe-intermediate",
       {{"psd_tol", kSuiteTol}},
       [](const SuiteParams& p) {
         const int k = effective_k(p);
         if (k < 1 || k > p.dims.d()) throw PreconditionError("probe-intermediate: k out of range");
       },
       probe_trial,
       probe_summary,
       always},
  };
  return defs;
}

const SuiteDef& find_suite(const std::string& id) {
  for (const auto& def : registry()) {
    if (def.id == id) return def;
  }
  throw PreconditionError("unknown suite '" + id + "'");
}

}  // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& def : registry()) out.push_back(def.id);
    return out;
  }();
  return ids;
}

SuiteReport run_suite(const std::string& suite_id, const SuiteParams& params) {
  const SuiteDef& def = find_suite(suite_id);
  if (params.trials < 1) throw PreconditionError("suites need at least one trial");
  def.check(params);

  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.suite_id = suite_id;
  report.dims = params.dims;
  report.seed = params.seed;
  report.tolerances = def.tolerances;

  std::vector<json> observations;
  if (!def.applicable(params)) {
    report.verdict = "n/a";
  } else {
    report.trials = params.trials;
    for (int t = 0; t < params.trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(params.seed, static_cast<std::uint64_t>(t));
      TrialOutcome outcome = def.trial(params, t, trial_seed);
      report.max_residual = std::max(report.max_residual, outcome.residual);
      if (outcome.pass) {
        ++report.passes;
      } else {
        report.failures.push_back({t, trial_seed, outcome.residual, std::move(outcome.payload)});
      }
      observations.push_back(std::move(outcome.observation));
    }
    if (suite_id == "probe-intermediate") {
      report.verdict = "exploratory";
    } else {
      report.verdict = report.failures.empty() ? "pass" : "fail";
    }
  }
  def.summarize(params, observations, report);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double replay_failure(const std::string& suite_id, const SuiteParams& params,
                      const FailureRecord& failure) {
  const SuiteDef& def = find_suite(suite_id);
  return def.trial(params, failure.trial, failure.trial_seed).residual;
}

SuiteReport suite_lemma_srank(const BipartiteDims& dims, int trials, std::uint64_t seed) {
  return run_suite("srank", SuiteParams{dims, trials, seed});
}

SuiteReport suite_strict_enlargement(const BipartiteDims& dims, std::uint64_t seed,
                                     std::optional<CVec> target) {
  SuiteParams p{dims, 1, seed};
  p.target = std::move(target);
  return run_suite("strict-enlargement", p);
}

SuiteReport suite_cone_collapse_pplus(const BipartiteDims& dims, int trials, std::uint64_t seed) {
  return run_suite("cone-collapse-pplus", SuiteParams{dims, trials, seed});
}

SuiteReport suite_local_stability(const BipartiteDims& dims, int trials, std::uint64_t seed) {
  return run_suite("local-stability", SuiteParams{dims, trials, seed});
}

SuiteReport suite_witness_not_cstar(const BipartiteDims& dims, std::uint64_t seed,
                                    std::optional<CMat> witness) {
  SuiteParams p{dims, 1, seed};
  p.witness = std::move(witness);
  return run_suite("witness-not-cstar", p);
}

SuiteReport suite_ppt_stability(const BipartiteDims& dims, int trials, std::uint64_t seed,
                                const std::vector<CMat>& extra_inputs) {
  SuiteParams p{dims, trials, seed};
  p.extra_inputs = extra_inputs;
  return run_suite("ppt-stability", p);
}

SuiteReport suite_ppt_collapse(const BipartiteDims& dims, int trials, std::uint64_t seed) {
  return run_suite("ppt-collapse", SuiteParams{dims, trials, seed});
}

SuiteReport suite_schmidt_embedding(const BipartiteDims& dims, int trials, std::uint64_t seed) {
  return run_suite("schmidt-embedding", SuiteParams{dims, trials, seed});
}

SuiteReport probe_intermediate(const BipartiteDims& dims, int k, int trials, std::uint64_t seed) {
  SuiteParams p{dims, trials, seed};
  p.k = k;
  return run_suite("probe-intermediate", p);
}

LiftedSpectralDecomposition reconstruct_psd_via_lifts(const CMat& y, const Vector& u,
                                                      const Vector& v) {
  const CMat h = require_hermitian(y, kSuiteTol);
  const Eigensystem es = hermitian_eigensystem(h.entries());
  const CMat seed_state = projector(kron(u, v));
  LiftedSpectralDecomposition out{ConicCombination{h.dims(), {}, {}}, 0.0, 0.0};
  for (Eigen::Index j = es.values.size() - 1; j >= 0; --j) {
    if (!(es.values(j) > 0.0)) continue;
    const CVec w(h.dims(), es.vectors.col(j));
    const KrausFamily family = rank_one_lift_family(u, v, w);
    out.family_residual = std::max(out.family_residual, normalization_residual(family));
    out.combination.weights.push_back(es.values(j));
    out.combination.terms.push_back(conekit::apply(family, {seed_state}));
  }
  out.residual = distance(conic_scale(out.combination), h);
  return out;
}

CMat default_witness(const BipartiteDims& dims) {
  if (dims.m() == dims.n()) return swap_operator(dims);
  return partial_transpose(projector(maximally_entangled(dims)));
}

}  // namespace conekit
