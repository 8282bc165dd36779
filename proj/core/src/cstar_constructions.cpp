#include "conekit/cstar_constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "conekit/errors.hpp"
#include "conekit/random.hpp"
#include "conekit/tensor_core.hpp"

namespace conekit {

const char* to_string(Normalization n) {
  return n == Normalization::Exact ? "exact" : "contractive";
}

const char* to_string(Locality l) { return l == Locality::Local ? "local" : "global"; }

namespace {

constexpr double kCompletionCutoff = 1e-12;
constexpr int kMaxResamples = 16;

int safe_osr(const CMat& a) {
  if (a.entries().norm() == 0.0) return 0;
  return osr(a);
}

MembershipReport violation(const char* label, double value, double tol) {
  MembershipReport r;
  r.verdict = Verdict::Out;
  r.tol = tol;
  Certificate c;
  c.kind = CertificateKind::InvariantViolation;
  c.label = label;
  c.value = value;
  r.certificate = std::move(c);
  return r;
}

// Inverse square root of a Hermitian positive definite matrix; empty when
// the smallest eigenvalue is below `floor` relative to the largest.
std::optional<Matrix> inverse_sqrt(const Matrix& s, double floor = 1e-10) {
  const Eigensystem es = hermitian_eigensystem(0.5 * (s + s.adjoint()));
  const double top = es.values(es.values.size() - 1);
  if (!(es.values(0) > floor * top)) return std::nullopt;
  const RealVector inv = es.values.cwiseSqrt().cwiseInverse();
  return es.vectors * inv.asDiagonal() * es.vectors.adjoint();
}

// p Gaussian operators on C^dim normalized so that sum K^* K = I.
std::vector<Matrix> local_kraus(Rng& rng, int dim, int count) {
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    std::vector<Matrix> ops;
    Matrix s = Matrix::Zero(dim, dim);
    for (int i = 0; i < count; ++i) {
      ops.push_back(rng.ginibre(dim, dim));
      s += ops.back().adjoint() * ops.back();
    }
    const auto root = inverse_sqrt(s);
    if (!root) continue;
    for (auto& op : ops) op = op * *root;
    return ops;
  }
  throw DegenerateSampleError("local Kraus sample stayed singular after resampling");
}

// Unitary (L1 (x) L2)(sum_g P_g (x) W_g)(R1 (x) R2) with k control groups
// on the first factor; OSR <= k.
Matrix controlled_unitary(Rng& rng, const BipartiteDims& dims, int k) {
  const int m = dims.m();
  const int n = dims.n();
  std::vector<int> group(m);
  for (int i = 0; i < m; ++i) group[i] = i < k ? i : rng.uniform_int(0, k - 1);
  std::vector<Matrix> blocks;
  for (int g = 0; g < k; ++g) blocks.push_back(rng.haar_unitary(n));
  Matrix core = Matrix::Zero(dims.total(), dims.total());
  for (int i = 0; i < m; ++i) core.block(i * n, i * n, n, n) = blocks[group[i]];
  const Matrix left = kron(rng.haar_unitary(m), rng.haar_unitary(n)).entries();
  const Matrix right = kron(rng.haar_unitary(m), rng.haar_unitary(n)).entries();
  return left * core * right;
}

int split_factor(int count) {
  int p = 1;
  for (int f = 1; f * f <= count; ++f) {
    if (count % f == 0) p = f;
  }
  return p;
}

KrausFamily structured_exact_family(Rng& rng, const BipartiteDims& dims, int count, int k) {
  const int p = split_factor(count);
  const int q = count / p;
  const std::vector<Matrix> first = local_kraus(rng, dims.m(), p);
  const std::vector<Matrix> second = local_kraus(rng, dims.n(), q);
  std::vector<Matrix> twists;
  for (int a = 0; a < p; ++a) twists.push_back(rng.haar_unitary(dims.n()));
  const Matrix entangler =
      k == 1 ? Matrix::Identity(dims.total(), dims.total()) : controlled_unitary(rng, dims, k);

  KrausFamily f{dims, {}, Normalization::Exact, k, k == 1 ? Locality::Local : Locality::Global,
                std::nullopt};
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < q; ++b) {
      const Matrix local = kron(first[a], second[b] * twists[a]).entries();
      f.ops.emplace_back(dims, local * entangler);
    }
  }
  return f;
}

KrausFamily contractive_family(Rng& rng, const BipartiteDims& dims, int count, int k) {
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    std::vector<CMat> ops;
    for (int i = 0; i < count; ++i) ops.push_back(random_operator_with_osr(rng, dims, k));
    const double top = max_eigenvalue(CMat(dims, gram_sum(ops, dims)));
    if (!(top > 1e-12)) continue;
    const double scale = 1.0 / std::sqrt(top);
    for (auto& op : ops) op = scale * op;
    return {dims, std::move(ops), Normalization::Contractive, k,
            k == 1 ? Locality::Local : Locality::Global, std::nullopt};
  }
  throw DegenerateSampleError("contractive sample stayed degenerate after resampling");
}

}  // namespace

double normalization_residual(const KrausFamily& f) {
  const Matrix s = gram_sum(f.ops, f.dims);
  return (s - Matrix::Identity(f.dims.total(), f.dims.total())).norm();
}

int max_osr(const KrausFamily& f, double tol) {
  int worst = 0;
  for (const auto& a : f.ops) {
    if (a.entries().norm() == 0.0) continue;
    worst = std::max(worst, osr(a, tol));
  }
  return worst;
}

MembershipReport validate(const KrausFamily& f) {
  if (f.ops.empty()) throw PreconditionError("cannot validate an empty Kraus family");
  for (const auto& a : f.ops) require_same_dims(a.dims(), f.dims, "validate");

  const Matrix s = gram_sum(f.ops, f.dims);
  const CMat gram(f.dims, s);
  if (f.mode == Normalization::Exact) {
    const double residual = normalization_residual(f);
    if (!(residual <= kNormalizationTol)) {
      return violation("normalization", residual, kNormalizationTol);
    }
  } else {
    const double excess = max_eigenvalue(gram) - 1.0;
    if (!(excess <= kNormalizationTol)) {
      return violation("contractivity", excess, kNormalizationTol);
    }
  }
  for (const auto& a : f.ops) {
    const int rank = safe_osr(a);
    if (f.osr_bound && rank > *f.osr_bound) {
      return violation("osr_bound", rank, kNormalizationTol);
    }
    if (f.locality == Locality::Local && rank > 1) {
      return violation("locality", rank, kNormalizationTol);
    }
  }
  MembershipReport ok;
  ok.verdict = Verdict::In;
  ok.tol = kNormalizationTol;
  ok.min_eig = min_eigenvalue(CMat::identity(f.dims) - gram);
  ok.seed = f.seed;
  return ok;
}

CMat apply(const KrausFamily& f, const std::vector<CMat>& inputs) {
  if (inputs.size() != f.ops.size()) {
    throw DimError("apply: " + std::to_string(inputs.size()) + " inputs for " +
                   std::to_string(f.ops.size()) + " Kraus operators");
  }
  for (const auto& x : inputs) require_same_dims(x.dims(), f.dims, "apply");
  const MembershipReport check = validate(f);
  if (check.verdict != Verdict::In) {
    throw PreconditionError(std::string("apply: invalid Kraus family (") +
                            check.certificate->label + " violated)");
  }
  Matrix acc = Matrix::Zero(f.dims.total(), f.dims.total());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Matrix& a = f.ops[i].entries();
    acc.noalias() += a.adjoint() * inputs[i].entries() * a;
  }
  return CMat(f.dims, std::move(acc));
}

KrausFamily random_family(const BipartiteDims& dims, int count, int k, Normalization mode,
                          std::uint64_t seed) {
  if (count < 1) throw PreconditionError("random_family: count must be >= 1");
  if (k < 1 || k > dims.d()) {
    throw PreconditionError("random_family: k must lie in [1, min(m, n)], got " +
                            std::to_string(k));
  }
  Rng rng(seed);
  KrausFamily f = mode == Normalization::Contractive ? contractive_family(rng, dims, count, k)
                                                     : structured_exact_family(rng, dims, count, k);
  f.seed = seed;
  return f;
}

std::vector<CVec> standard_product_basis(const BipartiteDims& dims) {
  std::vector<CVec> basis;
  for (int i = 0; i < dims.m(); ++i) {
    for (int j = 0; j < dims.n(); ++j) basis.push_back(product_basis_vector(dims, i, j));
  }
  return basis;
}

KrausFamily complete_to_identity(const KrausFamily& partial,
                                 const std::vector<CVec>& anchor_basis) {
  const auto& dims = partial.dims;
  const Matrix s = gram_sum(partial.ops, dims);
  const Matrix gap = Matrix::Identity(dims.total(), dims.total()) - s;
  const Eigensystem es = hermitian_eigensystem(0.5 * (gap + gap.adjoint()));
  if (es.values(0) < -kNormalizationTol) {
    throw PreconditionError("complete_to_identity: sum A^* A exceeds I by " +
                            std::to_string(-es.values(0)));
  }

  std::vector<int> modes;
  for (Eigen::Index j = es.values.size() - 1; j >= 0; --j) {
    if (es.values(j) > kCompletionCutoff) modes.push_back(static_cast<int>(j));
  }
  if (modes.size() > anchor_basis.size()) {
    throw AnchorError("complete_to_identity: need " + std::to_string(modes.size()) +
                      " anchors, got " + std::to_string(anchor_basis.size()));
  }

  KrausFamily out = partial;
  out.mode = Normalization::Exact;
  for (std::size_t t = 0; t < modes.size(); ++t) {
    const CVec& anchor = anchor_basis[t];
    require_same_dims(anchor.dims(), dims, "complete_to_identity anchor");
    if (std::abs(anchor.norm() - 1.0) > 1e-10 || sr(anchor) != 1) {
      throw AnchorError("complete_to_identity: anchors must be unit product vectors");
    }
    const double mu = es.values(modes[t]);
    Matrix b = std::sqrt(mu) * anchor.entries() * es.vectors.col(modes[t]).adjoint();
    out.ops.emplace_back(dims, std::move(b));
  }
  const int bound = max_osr(out);
  out.osr_bound = bound > 0 ? std::optional<int>(bound) : std::nullopt;
  out.locality = bound <= 1 ? Locality::Local : Locality::Global;
  return out;
}

double collapse_scale(const BipartiteDims& dims) {
  return 1.0 / std::sqrt(2.0 * dims.total());
}

CollapseConstruction collapse_construction(const CVec& v) {
  if (std::abs(v.norm() - 1.0) > 1e-10) {
    throw NormError("collapse_construction: target must be a unit vector");
  }
  const auto& dims = v.dims();
  const int total = dims.total();
  const double c = collapse_scale(dims);

  KrausFamily partial{dims, {}, Normalization::Contractive, std::nullopt, Locality::Global,
                      std::nullopt};
  const Matrix boosted = (1.0 / (c * c * total)) * Matrix::Identity(total, total);
  std::vector<CMat> inputs;
  for (int i = 0; i < total; ++i) {
    partial.ops.emplace_back(dims, c * Vector::Unit(total, i) * v.entries().adjoint());
    inputs.emplace_back(dims, boosted);
  }

  CollapseConstruction out;
  out.c = c;
  out.primary_count = total;
  out.family = complete_to_identity(partial, standard_product_basis(dims));
  while (inputs.size() < out.family.ops.size()) inputs.push_back(CMat::zero(dims));
  out.inputs = std::move(inputs);
  return out;
}

KrausFamily embed_schmidt_k(const CVec& v, int k, const CVec& u_product) {
  require_same_dims(v.dims(), u_product.dims(), "embed_schmidt_k");
  if (std::abs(v.norm() - 1.0) > 1e-10 || std::abs(u_product.norm() - 1.0) > 1e-10) {
    throw NormError("embed_schmidt_k: v and u must be unit vectors");
  }
  const auto& dims = v.dims();
  if (k < 1 || k > dims.d()) throw PreconditionError("embed_schmidt_k: k out of range");
  if (sr(u_product) != 1) throw PreconditionError("embed_schmidt_k: u must be a product vector");
  const int rank = sr(v);
  if (rank > k) {
    throw PreconditionError("embed_schmidt_k: SR(v) = " + std::to_string(rank) + " exceeds k = " +
                            std::to_string(k));
  }
  KrausFamily f{dims, {}, Normalization::Contractive, k,
                rank == 1 ? Locality::Local : Locality::Global, std::nullopt};
  f.ops.emplace_back(dims, u_product.entries() * v.entries().adjoint());
  return f;
}

WitnessBreak witness_conjugation(const CMat& w, const CVec& z, const Vector& u, const Vector& v,
                                 double tol) {
  const CMat h = require_hermitian(w, tol);
  require_same_dims(h.dims(), z.dims(), "witness_conjugation");
  const double raw = (z.entries().adjoint() * h.entries() * z.entries())(0).real();
  if (!(raw < -tol)) {
    throw PreconditionError("witness_conjugation: z^* W z = " + std::to_string(raw) +
                            " is not negative");
  }
  const CVec target(z.dims(), z.entries() / z.norm());
  CMat unitary = lift_product_to_target(u, v, target);
  CMat conjugated = hermitian_part(unitary.adjoint() * h * unitary);
  CVec product = kron(u, v);
  const double value =
      (product.entries().adjoint() * conjugated.entries() * product.entries())(0).real();
  return {std::move(conjugated), std::move(product), std::move(unitary), value};
}

KrausFamily rank_one_lift_family(const Vector& u, const Vector& v, const CVec& w) {
  const CMat unitary = lift_product_to_target(u, v, w);
  KrausFamily f{w.dims(), {unitary.adjoint()}, Normalization::Exact, std::nullopt,
                Locality::Global, std::nullopt};
  return f;
}

CMat conic_scale(const ConicCombination& c) {
  if (c.weights.size() != c.terms.size()) {
    throw DimError("conic_scale: weights and terms differ in length");
  }
  Matrix acc = Matrix::Zero(c.dims.total(), c.dims.total());
  for (std::size_t j = 0; j < c.terms.size(); ++j) {
    if (!(c.weights[j] >= 0.0)) throw PreconditionError("conic_scale: negative weight");
    require_same_dims(c.terms[j].dims(), c.dims, "conic_scale");
    acc += c.weights[j] * c.terms[j].entries();
  }
  return CMat(c.dims, std::move(acc));
}

}  // namespace conekit
