// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "conekit/cone_membership.hpp"
#include "conekit/cstar_constructions.hpp"
#include "conekit/io.hpp"
#include "conekit/random.hpp"
#include "conekit/tensor_core.hpp"
#include "conekit/theorem_suites.hpp"
#include "oracles.hpp"

using namespace conekit;

namespace {

const BipartiteDims k2x2{2, 2};
const BipartiteDims k2x3{2, 3};
const BipartiteDims k3x3{3, 3};
const std::vector<BipartiteDims> kDims = {k2x2, k2x3, k3x3};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

std::string dims_str(const BipartiteDims& d) {
  return std::to_string(d.m()) + "x" + std::to_string(d.n());
}

// Runs a suite per dims and requires zero failures.
Outcome suite_gate(const std::string& id, const std::vector<BipartiteDims>& dims, int trials,
                   std::uint64_t seed) {
  bool ok = true;
  std::string detail;
  for (const auto& d : dims) {
    const SuiteReport r = run_suite(id, SuiteParams(d, trials, seed));
    const bool good = r.failures.empty() && r.passes == trials && r.verdict == "pass";
    ok = ok && good;
    detail += dims_str(d) + " " + std::to_string(r.passes) + "/" + std::to_string(r.trials) +
              " max_res=" + fmt("%.2e", r.max_residual) + "; ";
  }
  return {ok, detail};
}

Outcome criterion1() { return suite_gate("srank", kDims, 1000, 1); }

Outcome criterion2() {
  const CVec bell = maximally_entangled(k2x2);
  const Vector e0 = Vector::Unit(2, 0);
  const KrausFamily family = rank_one_lift_family(e0, e0, bell);
  const MembershipReport val = validate(family);
  const double family_residual = normalization_residual(family);
  const CMat w = conekit::apply(family, {projector(kron(e0, e0))});
  const double gamma_min = oracle::eigenvalues(oracle::partial_transpose(w.entries(), 2, 2))(0);
  const Verdict sep = is_separable_decidable(w).verdict;
  const double out_res = distance(w, projector(bell));
  const bool ok = val.verdict == Verdict::In && family.mode == Normalization::Exact &&
                  family_residual <= 1e-12 && std::abs(gamma_min + 0.5) <= 1e-9 &&
                  sep == Verdict::Out && out_res <= 1e-10;
  return {ok, "gamma_min=" + fmt("%.12f", gamma_min) + " sep=" + to_string(sep) +
                  " family_res=" + fmt("%.2e", family_residual) +
                  " |W-ww*|=" + fmt("%.2e", out_res)};
}

Outcome criterion3() {
  bool ok = true;
  double worst = 0.0;
  for (const auto& d : kDims) {
    Rng rng(derive_seed(3, static_cast<std::uint64_t>(d.total())));
    for (int t = 0; t < 200; ++t) {
      const CMat y = random_wishart(rng, d, rng.uniform_int(1, d.total()));
      const auto rec =
          reconstruct_psd_via_lifts(y, rng.unit_vector(d.m()), rng.unit_vector(d.n()));
      // recombine independently of the reported residual
      const double res = distance(conic_scale(rec.combination), y);
      worst = std::max({worst, res, rec.residual});
      ok = ok && res <= 1e-9 && rec.residual <= 1e-9 && rec.family_residual <= 1e-9;
    }
  }
  return {ok, "600 matrices, max residual " + fmt("%.2e", worst)};
}

Outcome criterion4() { return suite_gate("local-stability", {k2x2, k2x3}, 500, 4); }

Outcome criterion5() {
  const Vector e0 = Vector::Unit(2, 0);
  const CMat swap = swap_operator(k2x2);
  const Eigensystem es_swap = hermitian_eigensystem(swap.entries());
  const WitnessBreak a = witness_conjugation(swap, CVec(k2x2, es_swap.vectors.col(0)), e0, e0);
  const CMat gb = partial_transpose(projector(maximally_entangled(k2x2)));
  const Eigensystem es_gb = hermitian_eigensystem(gb.entries());
  const WitnessBreak b = witness_conjugation(gb, CVec(k2x2, es_gb.vectors.col(0)), e0, e0);
  auto direct = [](const WitnessBreak& wb) {
    const Vector p = wb.product.entries();
    return (p.adjoint() * wb.conjugated.entries() * p)(0, 0).real();
  };
  const bool ok = std::abs(a.expectation + 1.0) <= 1e-10 && std::abs(direct(a) + 1.0) <= 1e-10 &&
                  std::abs(b.expectation + 0.5) <= 1e-10 && std::abs(direct(b) + 0.5) <= 1e-10 &&
                  osr(CMat(k2x2, kron(e0, e0).entries() * kron(e0, e0).entries().adjoint())) == 1;
  return {ok, "swap " + fmt("%.12f", direct(a)) + ", partial transpose of Bell " +
                  fmt("%.12f", direct(b))};
}

Outcome criterion6() {
  bool ok = true;
  int count = 0;
  double worst = 0.0;
  for (const auto& d : kDims) {
    for (int k = 1; k <= d.d(); ++k) {
      Rng rng(derive_seed(6, static_cast<std::uint64_t>(10 * d.total() + k)));
      for (int t = 0; t < 200; ++t, ++count) {
        const CVec v = random_vector_with_schmidt_rank(rng, d, rng.uniform_int(1, k));
        const KrausFamily f = embed_schmidt_k(v, k, random_product_vector(rng, d));
        const double res = distance(conekit::apply(f, {CMat::identity(d)}), projector(v));
        worst = std::max(worst, res);
        ok = ok && f.ops.size() == 1 && f.mode == Normalization::Contractive &&
             validate(f).verdict == Verdict::In && osr(f.ops[0]) == sr(v) && res <= 1e-10;
      }
    }
  }
  return {ok, std::to_string(count) + " vectors, max |apply - vv*| " + fmt("%.2e", worst)};
}

Outcome criterion7() { return suite_gate("ppt-stability", kDims, 500, 7); }

Outcome criterion8() {
  bool ok = true;
  double worst_norm = 0.0, worst_out = 0.0;
  for (const auto& d : kDims) {
    Rng rng(derive_seed(8, static_cast<std::uint64_t>(d.total())));
    for (int t = 0; t < 200; ++t) {
      const CVec v(d, rng.unit_vector(d.total()));
      const CollapseConstruction cc = collapse_construction(v);
      const double nr = normalization_residual(cc.family);
      const double orr = distance(conekit::apply(cc.family, cc.inputs), projector(v));
      worst_norm = std::max(worst_norm, nr);
      worst_out = std::max(worst_out, orr);
      bool ops_ok = true;
      for (const auto& a : cc.family.ops) ops_ok = ops_ok && osr(a) <= d.d();
      bool inputs_ok = true;
      for (const auto& x : cc.inputs) inputs_ok = inputs_ok && is_ppt(x).verdict == Verdict::In;
      ok = ok && nr <= 1e-10 && orr <= 1e-10 && ops_ok && inputs_ok;
    }
  }
  return {ok, "600 targets, max normalization " + fmt("%.2e", worst_norm) + ", max output " +
                  fmt("%.2e", worst_out)};
}

Outcome criterion9() {
  bool ok = true;
  int runs = 0;
  for (const auto& id : suite_ids()) {
    for (const auto& d : {k2x2, k2x3}) {
      SuiteParams p(d, 100, 2024);
      const std::string a = io::canonical_dump(io::to_json(run_suite(id, p), false));
      const std::string b = io::canonical_dump(io::to_json(run_suite(id, p), false));
      ok = ok && a == b;
      ++runs;
    }
  }
  return {ok, std::to_string(runs) + " suite configurations re-run"};
}

Outcome criterion10() {
  Rng rng(10);
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    CVec v(k2x2, Vector::Zero(4));
    CMat a = CMat::zero(k2x2);
    if (t % 4 == 0) {
      v = CVec(k2x2, rng.ginibre_vector(4));
      a = CMat(k2x2, rng.ginibre(4, 4));
    } else {
      v = random_vector_with_schmidt_rank(rng, k2x2, rng.uniform_int(1, 2));
      a = random_operator_with_osr(rng, k2x2, rng.uniform_int(1, 4));
    }
    const int sr_oracle = oracle::min_terms_vector(v.entries(), 2, 2, 4, 1e-6, 1000 + t);
    const int osr_oracle = oracle::min_terms_operator(a.entries(), 2, 2, 4, 1e-6, 2000 + t);
    if (sr(v) == sr_oracle && osr(a) == osr_oracle) ++agree;
  }
  return {agree == 100, std::to_string(agree) + "/100 instances agree on sr and osr"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"srank submultiplicativity, 1000 trials x 3 dims", criterion1},
      {"strict enlargement from a Bell target", criterion2},
      {"PSD reconstruction from lifted product projectors", criterion3},
      {"local families keep separable inputs separable", criterion4},
      {"witness conjugation values", criterion5},
      {"Schmidt-rank embedding u v^*", criterion6},
      {"PPT stability under OSR-1 families", criterion7},
      {"collapse construction residuals", criterion8},
      {"determinism of suite reports", criterion9},
      {"sr / osr against minimal-terms search", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s | %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
