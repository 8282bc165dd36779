#include "conekit/cone_membership.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "conekit/errors.hpp"
#include "conekit/random.hpp"
#include "conekit/tensor_core.hpp"

namespace conekit {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::In:
      return "in";
    case Verdict::Out:
      return "out";
    case Verdict::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Eigenpair:
      return "eigenpair";
    case CertificateKind::PartialTransposeEigenpair:
      return "partial_transpose_eigenpair";
    case CertificateKind::ProductVector:
      return "product_vector";
    case CertificateKind::SchmidtRank:
      return "schmidt_rank";
    case CertificateKind::InvariantViolation:
      return "invariant_violation";
  }
  return "?";
}

void SeesawConfig::validate() const {
  if (restarts < 1) throw PreconditionError("see-saw needs at least one restart");
  if (iters_per_restart < 1) throw PreconditionError("see-saw needs at least one iteration");
  if (!(tol > 0.0)) throw PreconditionError("see-saw tolerance must be positive");
}

CMat require_hermitian(const CMat& x, double tol) {
  const double defect = hermiticity_defect(x);
  if (!(defect <= kHermiticitySlack * tol)) {
    throw HermiticityError("matrix is not Hermitian: ||X - X^*||_F = " + std::to_string(defect));
  }
  return hermitian_part(x);
}

namespace {

double expectation(const Matrix& h, const Vector& v) {
  return (v.adjoint() * h * v)(0).real() / v.squaredNorm();
}

MembershipReport psd_report(const CMat& hermitian, double tol, CertificateKind kind,
                            const char* label) {
  const Eigensystem es = hermitian_eigensystem(hermitian.entries());
  MembershipReport r;
  r.tol = tol;
  r.min_eig = es.values(0);
  r.verdict = r.min_eig >= -tol ? Verdict::In : Verdict::Out;
  Certificate c;
  c.kind = kind;
  c.value = r.min_eig;
  c.vector = es.vectors.col(0);
  c.label = label;
  r.certificate = std::move(c);
  return r;
}

// Alternating minimization of v^* W v over v = X Y^T (X: m x k, Y: n x k).
// Each half-step fixes one factor with orthonormal columns, which makes the
// other half an ordinary Hermitian eigenproblem of size (m k) or (n k).
struct AlsState {
  Matrix x;
  Matrix y;
  double value = std::numeric_limits<double>::infinity();
};

Matrix orthonormal_columns(const Matrix& a, Rng& rng) {
  Matrix q = a;
  const auto cols = q.cols();
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (int attempt = 0;; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        if (c > 0) q.col(c) -= q.leftCols(c) * (q.leftCols(c).adjoint() * q.col(c));
      }
      const double norm = q.col(c).norm();
      if (norm > 1e-10) {
        q.col(c) /= norm;
        break;
      }
      if (attempt > 8) throw Error("could not orthonormalize see-saw factor");
      q.col(c) = rng.ginibre_vector(static_cast<int>(q.rows()));
    }
  }
  return q;
}

// Solve for the left factor with the right factor fixed (orthonormal columns).
double solve_left(const Matrix& w, int m, int n, const Matrix& y, Matrix& x_out) {
  const auto k = y.cols();
  Matrix lift = Matrix::Zero(m * n, m * k);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < k; ++l) lift(i * n + j, i * k + l) = y(j, l);
    }
  }
  const Matrix h = lift.adjoint() * w * lift;
  const Eigensystem es = hermitian_eigensystem(0.5 * (h + h.adjoint()));
  x_out.resize(m, k);
  for (int i = 0; i < m; ++i) {
    for (Eigen::Index l = 0; l < k; ++l) x_out(i, l) = es.vectors(i * k + l, 0);
  }
  return es.values(0);
}

double solve_right(const Matrix& w, int m, int n, const Matrix& x, Matrix& y_out) {
  const auto k = x.cols();
  Matrix lift = Matrix::Zero(m * n, n * k);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < k; ++l) lift(i * n + j, j * k + l) = x(i, l);
    }
  }
  const Matrix h = lift.adjoint() * w * lift;
  const Eigensystem es = hermitian_eigensystem(0.5 * (h + h.adjoint()));
  y_out.resize(n, k);
  for (int j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < k; ++l) y_out(j, l) = es.vectors(j * k + l, 0);
  }
  return es.values(0);
}

Vector compose(const Matrix& x, const Matrix& y) {
  const auto m = x.rows();
  const auto n = y.rows();
  const Matrix c = x * y.transpose();
  Vector v(m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = c(i, j);
  }
  return v;
}

AlsState run_als(const Matrix& w, int m, int n, Matrix y0, int iters, Rng& rng) {
  AlsState s;
  s.y = orthonormal_columns(y0, rng);
  double prev = std::numeric_limits<double>::infinity();
  const double scale = 1.0 + w.norm();
  for (int it = 0; it < iters; ++it) {
    solve_left(w, m, n, s.y, s.x);
    s.x = orthonormal_columns(s.x, rng);
    const double val = solve_right(w, m, n, s.x, s.y);
    s.y = orthonormal_columns(s.y, rng);
    if (prev - val < 1e-14 * scale) {
      prev = std::min(prev, val);
      break;
    }
    prev = val;
  }
  // Final left solve makes (x, y) a consistent pair with unit norm.
  s.value = solve_left(w, m, n, s.y, s.x);
  return s;
}

struct LevelResult {
  double value;
  Matrix x;
  Matrix y;
};

LevelResult minimize_levels(const Matrix& w, const BipartiteDims& dims, int k,
                            const SeesawConfig& cfg) {
  const int m = dims.m();
  const int n = dims.n();
  LevelResult best{std::numeric_limits<double>::infinity(), Matrix(), Matrix()};
  for (int level = 1; level <= k; ++level) {
    LevelResult level_best{std::numeric_limits<double>::infinity(), Matrix(), Matrix()};
    auto consider = [&](const AlsState& s) {
      if (s.value < level_best.value) level_best = {s.value, s.x, s.y};
    };
    if (level > 1) {
      Rng rng(derive_seed(cfg.seed, 1000003ULL * level));
      Matrix y0(n, level);
      y0.leftCols(level - 1) = best.y;
      y0.col(level - 1) = rng.ginibre_vector(n);
      consider(run_als(w, m, n, std::move(y0), cfg.iters_per_restart, rng));
    }
    for (int r = 0; r < cfg.restarts; ++r) {
      Rng rng(derive_seed(cfg.seed + static_cast<std::uint64_t>(r), level));
      consider(run_als(w, m, n, rng.ginibre(n, level), cfg.iters_per_restart, rng));
    }
    if (level == 1 || level_best.value < best.value) {
      best = std::move(level_best);
    } else {
      // Keep the lower-level optimum, padded with an inert zero term.
      Matrix x(m, level);
      Matrix y(n, level);
      x.setZero();
      y.setZero();
      x.leftCols(level - 1) = best.x;
      y.leftCols(level - 1) = best.y;
      best.x = std::move(x);
      best.y = std::move(y);
    }
  }
  return best;
}

}  // namespace

MembershipReport is_psd(const CMat& x, double tol) {
  const CMat h = require_hermitian(x, tol);
  return psd_report(h, tol, CertificateKind::Eigenpair, "matrix");
}

MembershipReport is_ppt(const CMat& x, double tol) {
  const CMat h = require_hermitian(x, tol);
  MembershipReport direct = psd_report(h, tol, CertificateKind::Eigenpair, "matrix");
  MembershipReport transposed = psd_report(partial_transpose(h), tol,
                                           CertificateKind::PartialTransposeEigenpair,
                                           "partial_transpose");
  MembershipReport r;
  r.tol = tol;
  r.min_eig = std::min(direct.min_eig, transposed.min_eig);
  if (direct.verdict == Verdict::Out) {
    r.verdict = Verdict::Out;
    r.certificate = std::move(direct.certificate);
  } else {
    r.verdict = transposed.verdict;
    r.certificate = std::move(transposed.certificate);
  }
  return r;
}

MembershipReport is_separable_decidable(const CMat& x, double tol) {
  const CMat h = require_hermitian(x, tol);
  const Eigensystem es = hermitian_eigensystem(h.entries());
  if (es.values(0) < -tol) {
    throw PreconditionError("separability test requires a PSD input (lambda_min = " +
                            std::to_string(es.values(0)) + ")");
  }
  const auto& dims = h.dims();
  if (dims.total() <= 6) {
    return is_ppt(h, tol);
  }

  const auto size = es.values.size();
  const double top = es.values(size - 1);
  int numeric_rank = 0;
  for (Eigen::Index i = 0; i < size; ++i) {
    if (es.values(i) >= tol * top && es.values(i) > 0.0) ++numeric_rank;
  }
  if (numeric_rank == 1) {
    const CVec range(dims, es.vectors.col(size - 1));
    const SchmidtDecomp s = schmidt_decompose(range, kDefaultRankTol);
    MembershipReport r;
    r.tol = tol;
    r.min_eig = es.values(0);
    r.verdict = s.rank == 1 ? Verdict::In : Verdict::Out;
    Certificate c;
    c.kind = CertificateKind::SchmidtRank;
    c.value = s.rank;
    c.vector = range.entries();
    if (s.rank == 1) {
      c.left = s.left[0];
      c.right = s.right[0];
    }
    c.label = "rank_one_range";
    r.certificate = std::move(c);
    return r;
  }

  MembershipReport ppt = is_ppt(h, tol);
  if (ppt.verdict == Verdict::Out) return ppt;
  ppt.verdict = Verdict::Indeterminate;
  return ppt;
}

ProductMinimum min_product_expectation(const CMat& w, const SeesawConfig& cfg) {
  cfg.validate();
  const CMat h = require_hermitian(w, cfg.tol);
  LevelResult best = minimize_levels(h.entries(), h.dims(), 1, cfg);
  return {best.value, best.x.col(0), best.y.col(0)};
}

MembershipReport is_block_positive_heuristic(const CMat& w, const SeesawConfig& cfg) {
  cfg.validate();
  const CMat h = require_hermitian(w, cfg.tol);
  MembershipReport r = psd_report(h, cfg.tol, CertificateKind::Eigenpair, "matrix");
  r.seed = cfg.seed;
  if (r.verdict == Verdict::In) return r;

  const ProductMinimum pm = min_product_expectation(h, cfg);
  Certificate c;
  c.kind = CertificateKind::ProductVector;
  c.value = pm.value;
  c.left = pm.z;
  c.right = pm.y;
  c.vector = kron(pm.z, pm.y).entries();
  c.label = pm.value < -cfg.tol ? "violating_product_vector" : "best_product_vector";
  r.certificate = std::move(c);
  r.verdict = pm.value < -cfg.tol ? Verdict::Out : Verdict::Indeterminate;
  return r;
}

SchmidtMinimum min_sr_k_expectation(const CMat& w, int k, const SeesawConfig& cfg) {
  cfg.validate();
  const auto& dims = w.dims();
  if (k < 1 || k > dims.d()) {
    throw PreconditionError("Schmidt-rank bound k must lie in [1, min(m, n)], got " +
                            std::to_string(k));
  }
  const CMat h = require_hermitian(w, cfg.tol);
  if (k == dims.d()) {
    const Eigensystem es = hermitian_eigensystem(h.entries());
    return {es.values(0), CVec(dims, es.vectors.col(0))};
  }
  LevelResult best = minimize_levels(h.entries(), dims, k, cfg);
  Vector v = compose(best.x, best.y);
  v /= v.norm();
  return {best.value, CVec(dims, std::move(v))};
}

double reevaluate_certificate(const CMat& x, const MembershipReport& report) {
  if (!report.certificate) {
    throw PreconditionError("report carries no certificate");
  }
  const Certificate& c = *report.certificate;
  const CMat h = hermitian_part(x);
  switch (c.kind) {
    case CertificateKind::Eigenpair:
      return expectation(h.entries(), c.vector.value());
    case CertificateKind::PartialTransposeEigenpair:
      return expectation(partial_transpose(h).entries(), c.vector.value());
    case CertificateKind::ProductVector: {
      const Vector v = (c.left && c.right) ? kron(*c.left, *c.right).entries() : c.vector.value();
      return expectation(h.entries(), v);
    }
    case CertificateKind::SchmidtRank: {
      const CVec v(x.dims(), c.vector.value());
      // The certificate only applies if x is (numerically) proportional to v v^*.
      const double weight = expectation(h.entries(), v.entries());
      const double defect =
          (h.entries() - weight * v.entries() * v.entries().adjoint() / v.entries().squaredNorm())
              .norm();
      if (defect > 10.0 * report.tol * std::max(1.0, h.entries().norm())) {
        throw PreconditionError("Schmidt-rank certificate does not describe this matrix");
      }
      return sr(v);
    }
    case CertificateKind::InvariantViolation:
      break;
  }
  throw PreconditionError("certificate kind cannot be re-evaluated against a matrix");
}

}  // namespace conekit
