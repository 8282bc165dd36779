// Randomized invariants, each over a fixed seed range.

#include <gtest/gtest.h>

#include "conekit/cone_membership.hpp"
#include "conekit/cstar_constructions.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace conekit;
using namespace fx;

namespace {

const std::vector<BipartiteDims> kAll = {k2x2, k2x3, k3x3};

// PSD sample of random rank, separable or not.
CMat random_state(Rng& rng, const BipartiteDims& d) {
  switch (rng.uniform_int(0, 3)) {
    case 0: return random_wishart(rng, d, rng.uniform_int(1, d.total()));
    case 1: return random_separable(rng, d, rng.uniform_int(1, 4));
    case 2: return projector(random_vector_with_schmidt_rank(rng, d, rng.uniform_int(1, d.d())));
    default: return random_ppt(rng, d);
  }
}

}  // namespace

TEST(Property, PartialTransposeInvolutionHermiticityTrace) {
  Rng rng(101);
  for (const auto& d : kAll) {
    for (int t = 0; t < 200; ++t) {
      const CMat x = random_hermitian(rng, d);
      const CMat g = partial_transpose(x);
      EXPECT_EQ(distance(partial_transpose(g), x), 0.0);
      EXPECT_LE(hermiticity_defect(g), 1e-15);
      EXPECT_NEAR(std::abs(g.entries().trace() - x.entries().trace()), 0.0, 1e-12);
    }
  }
}

TEST(Property, SchmidtMinimumNonincreasingInK) {
  Rng rng(102);
  SeesawConfig cfg;
  cfg.restarts = 6;
  cfg.iters_per_restart = 80;
  for (int t = 0; t < 100; ++t) {
    const BipartiteDims d = kAll[static_cast<std::size_t>(t % 3)];
    const CMat w = random_hermitian(rng, d);
    cfg.seed = static_cast<std::uint64_t>(t);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= d.d(); ++k) {
      const double v = min_sr_k_expectation(w, k, cfg).value;
      EXPECT_LE(v, prev + 1e-12) << "trial " << t << " k " << k;
      prev = v;
    }
    EXPECT_NEAR(prev, min_eigenvalue(w), 1e-12);
  }
}

TEST(Property, SeparabilityEqualsPptInSmallDims) {
  Rng rng(103);
  for (const auto& d : {k2x2, k2x3}) {
    for (int t = 0; t < 500; ++t) {
      const CMat x = random_state(rng, d);
      EXPECT_EQ(is_separable_decidable(x).verdict, is_ppt(x).verdict);
    }
  }
}

TEST(Property, RankOneRule) {
  Rng rng(104);
  const std::vector<BipartiteDims> dims = {k3x3, BipartiteDims(2, 4), BipartiteDims(3, 4)};
  for (int t = 0; t < 500; ++t) {
    const BipartiteDims d = dims[static_cast<std::size_t>(t % 3)];
    const CVec w = random_vector_with_schmidt_rank(rng, d, rng.uniform_int(1, d.d()));
    const Verdict want = oracle::min_terms_vector(w.entries(), d.m(), d.n(), 1, 1e-6, t) == 1
                             ? Verdict::In
                             : Verdict::Out;
    EXPECT_EQ(is_separable_decidable(projector(w)).verdict, want);
  }
}

TEST(Property, SeparableSamplesArePpt) {
  Rng rng(105);
  for (const auto& d : kAll)
    for (int t = 0; t < 100; ++t)
      EXPECT_EQ(is_ppt(random_separable(rng, d, rng.uniform_int(1, 6))).verdict, Verdict::In);
}

TEST(Property, ApplyPreservesPsd) {
  Rng rng(106);
  for (int t = 0; t < 300; ++t) {
    const BipartiteDims d = kAll[static_cast<std::size_t>(t % 3)];
    const int count = rng.uniform_int(1, 4);
    const int k = rng.uniform_int(1, d.d());
    const auto mode = rng.uniform() < 0.5 ? Normalization::Exact : Normalization::Contractive;
    const KrausFamily f = random_family(d, count, k, mode, static_cast<std::uint64_t>(t));
    std::vector<CMat> xs;
    for (std::size_t i = 0; i < f.ops.size(); ++i) xs.push_back(random_state(rng, d));
    EXPECT_GE(min_eigenvalue(conekit::apply(f, xs)), -1e-12);
  }
}

TEST(Property, RandomFamiliesValidate) {
  for (std::uint64_t s = 0; s < 150; ++s) {
    const BipartiteDims d = kAll[s % 3];
    Rng rng(s);
    const int k = rng.uniform_int(1, d.d());
    const auto mode = s % 2 ? Normalization::Exact : Normalization::Contractive;
    const KrausFamily f = random_family(d, rng.uniform_int(1, 5), k, mode, s);
    EXPECT_EQ(validate(f).verdict, Verdict::In);
    EXPECT_LE(max_osr(f), k);
    if (mode == Normalization::Exact) EXPECT_LE(normalization_residual(f), 1e-9);
    else EXPECT_LE(max_eigenvalue(CMat(d, gram_sum(f.ops, d))), 1.0 + 1e-9);
  }
}

TEST(Property, SchmidtRankSubmultiplicative) {
  Rng rng(107);
  for (const auto& d : kAll) {
    for (int t = 0; t < 100; ++t) {
      const CMat a = random_operator_with_osr(rng, d, rng.uniform_int(1, d.d() * d.d()));
      const CVec v = random_vector_with_schmidt_rank(rng, d, rng.uniform_int(1, d.d()));
      EXPECT_LE(sr(a * v), osr(a) * sr(v));
    }
  }
}

TEST(Property, CollapseResiduals) {
  for (const auto& d : kAll) {
    Rng rng(108);
    for (int t = 0; t < 50; ++t) {
      const CVec v(d, rng.unit_vector(d.total()));
      const CollapseConstruction cc = collapse_construction(v);
      EXPECT_LE(normalization_residual(cc.family), 1e-10);
      EXPECT_LE(distance(conekit::apply(cc.family, cc.inputs), projector(v)), 1e-10);
      EXPECT_LE(max_osr(cc.family), d.d());
    }
  }
}

TEST(Property, BlockPositivityOutIsSound) {
  Rng rng(109);
  SeesawConfig cfg;
  cfg.restarts = 4;
  cfg.iters_per_restart = 60;
  int outs = 0;
  for (int t = 0; t < 60; ++t) {
    const BipartiteDims d = kAll[static_cast<std::size_t>(t % 3)];
    const CMat w = random_hermitian(rng, d);
    cfg.seed = static_cast<std::uint64_t>(t);
    const MembershipReport r = is_block_positive_heuristic(w, cfg);
    if (r.verdict != Verdict::Out) continue;
    ++outs;
    EXPECT_LT(reevaluate_certificate(w, r), -cfg.tol);
  }
  EXPECT_GT(outs, 0);
}

TEST(Property, WitnessConjugationIsRayleighQuotient) {
  Rng rng(110);
  for (int t = 0; t < 100; ++t) {
    const BipartiteDims d = kAll[static_cast<std::size_t>(t % 3)];
    const CMat w = random_hermitian(rng, d);
    const Eigensystem es = hermitian_eigensystem(w.entries());
    if (es.values(0) >= -1e-6) continue;
    const CVec z(d, es.vectors.col(0) * rng.uniform(0.5, 2.0));
    const WitnessBreak wb = witness_conjugation(w, z, rng.unit_vector(d.m()), rng.unit_vector(d.n()));
    EXPECT_NEAR(wb.expectation, es.values(0), 1e-10);
  }
}
