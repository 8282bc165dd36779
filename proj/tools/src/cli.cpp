#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#ifdef CONEKIT_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "conekit/cone_membership.hpp"
#include "conekit/cstar_constructions.hpp"
#include "conekit/errors.hpp"
#include "conekit/io.hpp"
#include "conekit/tensor_core.hpp"
#include "conekit/theorem_suites.hpp"

namespace conekit::cli {
namespace {

using io::json;

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  int m = 0;
  int n = 0;
  double tol = 1e-9;
  std::optional<std::uint64_t> seed;
  int trials = 500;
  std::string out;

  // check
  std::string check_kind;
  std::string file;
  int restarts = 32;
  int iters = 200;

  // rank
  std::string rank_kind;

  // construct
  std::string construct_kind;
  std::string out_dir = ".";
  std::string target, v_file, u_file, w_file, z_file;
  int k = 0;

  // verify
  std::string suite;
  std::string csv;
  std::string witness;
  std::vector<std::string> inputs;
};

std::uint64_t effective_seed(const Options& o) {
  if (o.seed) return *o.seed;
  const char* env = std::getenv("CONEKIT_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const std::string s(env);
    if (s.front() == '-') throw std::invalid_argument(s);
    const unsigned long long v = std::stoull(s, &used, 10);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError(std::string("CONEKIT_SEED is not an unsigned integer: '") + env + "'");
  }
}

void check_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw UsageError("--tol must lie in (0, 1)");
}

// Enforces --m/--n when given.
void check_dims(const Options& o, const BipartiteDims& dims, const std::string& what) {
  if ((o.m > 0 && o.m != dims.m()) || (o.n > 0 && o.n != dims.n())) {
    std::ostringstream s;
    s << what << " has dims " << dims.m() << "x" << dims.n() << ", expected "
      << (o.m > 0 ? std::to_string(o.m) : "*") << "x" << (o.n > 0 ? std::to_string(o.n) : "*");
    throw DimError(s.str());
  }
}

CMat read_matrix(const std::string& path) {
  const io::MatrixFile f = io::read_matrix_file(path);
  if (f.is_vector()) throw DimError("'" + path + "' holds a vector, expected a matrix");
  return f.as_matrix();
}

CVec read_vector(const std::string& path) {
  const io::MatrixFile f = io::read_matrix_file(path);
  if (!f.is_vector()) throw DimError("'" + path + "' holds a matrix, expected a vector");
  return f.as_vector();
}

// Local factor: a vector file with n = 1 (or any vector file, flattened).
Vector read_local(const std::string& path) { return read_vector(path).entries(); }

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir.empty() ? "." : dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::In: return kExitIn;
    case Verdict::Out: return kExitOut;
    case Verdict::Indeterminate: return kExitIndeterminate;
  }
  return kExitIndeterminate;
}

int cmd_check(const Options& o, std::ostream& out) {
  check_tol(o.tol);
  const CMat x = read_matrix(o.file);
  check_dims(o, x.dims(), o.file);

  MembershipReport r;
  std::optional<std::uint64_t> seed;
  if (o.check_kind == "psd") {
    r = is_psd(x, o.tol);
  } else if (o.check_kind == "ppt") {
    r = is_ppt(x, o.tol);
  } else if (o.check_kind == "sep") {
    r = is_separable_decidable(x, o.tol);
  } else {
    SeesawConfig cfg;
    cfg.restarts = o.restarts;
    cfg.iters_per_restart = o.iters;
    cfg.seed = effective_seed(o);
    cfg.tol = o.tol;
    r = is_block_positive_heuristic(x, cfg);
    seed = cfg.seed;
  }
  json j = io::to_json(r);
  j["check"] = o.check_kind;
  j["m"] = x.dims().m();
  j["n"] = x.dims().n();
  if (seed) j["seed"] = *seed;
  const std::string text = io::canonical_dump(j);
  if (!o.out.empty()) io::write_atomic(o.out, text);
  out << text;
  return verdict_exit(r.verdict);
}

int cmd_rank(const Options& o, std::ostream& out) {
  check_tol(o.tol);
  const io::MatrixFile f = io::read_matrix_file(o.file);
  check_dims(o, f.dims, o.file);
  int r = 0;
  if (o.rank_kind == "sr") {
    if (!f.is_vector()) throw DimError("sr needs a vector file, '" + o.file + "' holds a matrix");
    r = sr(f.as_vector(), o.tol);
  } else {
    if (f.is_vector()) throw DimError("osr needs a matrix file, '" + o.file + "' holds a vector");
    r = osr(f.as_matrix(), o.tol);
  }
  out << r << "\n";
  return kExitIn;
}

json residual_entry(double value, double bound) {
  return json{{"value", value}, {"bound", bound}, {"ok", value <= bound}};
}

int finish_construct(const Options& o, json report, bool ok, std::ostream& out) {
  report["ok"] = ok;
  const std::string text = io::canonical_dump(report);
  io::write_atomic(join(o.out_dir, report["construction"].get<std::string>() + "_report.json"), text);
  out << text;
  return ok ? kExitIn : kExitOut;
}

int construct_collapse(const Options& o, std::ostream& out) {
  if (o.target.empty()) throw UsageError("collapse needs --target");
  const CVec v = read_vector(o.target);
  check_dims(o, v.dims(), o.target);
  const CollapseConstruction cc = collapse_construction(v);
  const MembershipReport val = validate(cc.family);
  const double norm_res = normalization_residual(cc.family);
  const double out_res = distance(conekit::apply(cc.family, cc.inputs), projector(v));
  double worst_input = 0.0;
  bool inputs_ppt = true;
  for (const auto& x : cc.inputs) {
    const MembershipReport p = is_ppt(x, o.tol);
    worst_input = std::min(worst_input, p.min_eig);
    inputs_ppt = inputs_ppt && p.verdict == Verdict::In;
  }
  const int max_k = max_osr(cc.family);

  json fam = io::to_json(cc.family);
  json ins = json::array();
  for (const auto& x : cc.inputs) ins.push_back(io::matrix_to_json(x.entries()));
  fam["inputs"] = std::move(ins);
  fam["c"] = cc.c;
  fam["primary_count"] = cc.primary_count;
  ensure_dir(o.out_dir);
  const std::string fam_path = join(o.out_dir, "collapse_family.json");
  io::write_atomic(fam_path, io::canonical_dump(fam));

  json rep;
  rep["construction"] = "collapse";
  rep["m"] = v.dims().m();
  rep["n"] = v.dims().n();
  rep["validation"] = io::to_json(val);
  rep["normalization_residual"] = residual_entry(norm_res, kConstructionTol);
  rep["output_residual"] = residual_entry(out_res, kConstructionTol);
  rep["max_osr"] = max_k;
  rep["inputs_ppt"] = inputs_ppt;
  rep["inputs_min_eig"] = worst_input;
  rep["operators"] = static_cast<int>(cc.family.ops.size());
  rep["files"] = json::array({fam_path});
  const bool ok = val.verdict == Verdict::In && norm_res <= kConstructionTol &&
                  out_res <= kConstructionTol && inputs_ppt && max_k <= v.dims().d();
  return finish_construct(o, std::move(rep), ok, out);
}

int construct_embed(const Options& o, std::ostream& out) {
  if (o.v_file.empty()) throw UsageError("embed_k needs --v");
  if (o.k < 1) throw UsageError("embed_k needs --k >= 1");
  const CVec v = read_vector(o.v_file);
  check_dims(o, v.dims(), o.v_file);
  CVec u = product_basis_vector(v.dims(), 0, 0);
  if (!o.u_file.empty()) {
    u = read_vector(o.u_file);
    require_same_dims(u.dims(), v.dims(), "embed_k --u");
  }
  const KrausFamily f = embed_schmidt_k(v, o.k, u);
  const MembershipReport val = validate(f);
  const double out_res = distance(conekit::apply(f, {CMat::identity(v.dims())}), projector(v));

  ensure_dir(o.out_dir);
  const std::string fam_path = join(o.out_dir, "embed_k_family.json");
  io::write_atomic(fam_path, io::canonical_dump(io::to_json(f)));

  json rep;
  rep["construction"] = "embed_k";
  rep["m"] = v.dims().m();
  rep["n"] = v.dims().n();
  rep["k"] = o.k;
  rep["sr_v"] = sr(v);
  rep["osr"] = osr(f.ops.front());
  rep["validation"] = io::to_json(val);
  rep["output_residual"] = residual_entry(out_res, kConstructionTol);
  rep["files"] = json::array({fam_path});
  const bool ok = val.verdict == Verdict::In && out_res <= kConstructionTol;
  return finish_construct(o, std::move(rep), ok, out);
}

int construct_witness(const Options& o, std::ostream& out) {
  check_tol(o.tol);
  if (o.w_file.empty()) throw UsageError("witness_break needs --w");
  const CMat w = require_hermitian(read_matrix(o.w_file), o.tol);
  const BipartiteDims dims = w.dims();
  check_dims(o, dims, o.w_file);

  CVec z(dims, Vector::Zero(dims.total()));
  if (o.z_file.empty()) {
    const Eigensystem es = hermitian_eigensystem(w.entries());
    z = CVec(dims, es.vectors.col(0));
  } else {
    z = read_vector(o.z_file);
    require_same_dims(z.dims(), dims, "witness_break --z");
  }
  Vector u = Vector::Unit(dims.m(), 0);
  Vector v = Vector::Unit(dims.n(), 0);
  if (!o.u_file.empty()) u = read_local(o.u_file);
  if (!o.v_file.empty()) v = read_local(o.v_file);
  if (u.size() != dims.m() || v.size() != dims.n())
    throw DimError("witness_break: local vectors do not match the witness dims");

  const WitnessBreak wb = witness_conjugation(w, z, u, v, o.tol);
  KrausFamily single;
  single.dims = dims;
  single.ops = {wb.unitary};
  single.mode = Normalization::Exact;
  const MembershipReport val = validate(single);
  const double direct = (wb.product.entries().adjoint() * wb.conjugated.entries() *
                         wb.product.entries())(0, 0).real();

  ensure_dir(o.out_dir);
  const std::string conj_path = join(o.out_dir, "witness_conjugated.json");
  const std::string unit_path = join(o.out_dir, "witness_unitary.json");
  io::write_atomic(conj_path, io::canonical_dump(io::to_json(io::MatrixFile::from(wb.conjugated))));
  io::write_atomic(unit_path, io::canonical_dump(io::to_json(io::MatrixFile::from(wb.unitary))));

  json rep;
  rep["construction"] = "witness_break";
  rep["m"] = dims.m();
  rep["n"] = dims.n();
  rep["expectation"] = wb.expectation;
  rep["expectation_recomputed"] = direct;
  rep["product"] = io::vector_to_json(wb.product.entries());
  rep["validation"] = io::to_json(val);
  rep["files"] = json::array({conj_path, unit_path});
  const bool ok = val.verdict == Verdict::In && wb.expectation < -o.tol && direct < -o.tol;
  return finish_construct(o, std::move(rep), ok, out);
}

int construct_lift(const Options& o, std::ostream& out) {
  if (o.u_file.empty() || o.v_file.empty() || o.w_file.empty())
    throw UsageError("lift needs --u, --v and --w");
  const Vector u = read_local(o.u_file);
  const Vector v = read_local(o.v_file);
  const CVec w = read_vector(o.w_file);
  const BipartiteDims dims(static_cast<int>(u.size()), static_cast<int>(v.size()));
  if (!(w.dims() == dims))
    throw DimError("lift: --w does not live on C^" + std::to_string(dims.m()) + " (x) C^" +
                   std::to_string(dims.n()));
  check_dims(o, dims, o.w_file);

  const CMat U = lift_product_to_target(u, v, w);
  const CVec uv = kron(u, v);
  const double map_res = (U.entries() * uv.entries() - w.entries()).norm();
  const double unit_res =
      (U.entries().adjoint() * U.entries() - Matrix::Identity(dims.total(), dims.total())).norm();
  const KrausFamily f = rank_one_lift_family(u, v, w);
  const MembershipReport val = validate(f);
  const double out_res = distance(conekit::apply(f, {projector(uv)}), projector(w));

  ensure_dir(o.out_dir);
  const std::string unit_path = join(o.out_dir, "lift_unitary.json");
  const std::string fam_path = join(o.out_dir, "lift_family.json");
  io::write_atomic(unit_path, io::canonical_dump(io::to_json(io::MatrixFile::from(U))));
  io::write_atomic(fam_path, io::canonical_dump(io::to_json(f)));

  json rep;
  rep["construction"] = "lift";
  rep["m"] = dims.m();
  rep["n"] = dims.n();
  rep["mapping_residual"] = residual_entry(map_res, kUnitaryTol);
  rep["unitarity_residual"] = residual_entry(unit_res, kUnitaryTol);
  rep["output_residual"] = residual_entry(out_res, kConstructionTol);
  rep["validation"] = io::to_json(val);
  rep["files"] = json::array({unit_path, fam_path});
  const bool ok = val.verdict == Verdict::In && map_res <= kUnitaryTol && unit_res <= kUnitaryTol &&
                  out_res <= kConstructionTol;
  return finish_construct(o, std::move(rep), ok, out);
}

int cmd_construct(const Options& o, std::ostream& out) {
  if (o.construct_kind == "collapse") return construct_collapse(o, out);
  if (o.construct_kind == "embed_k") return construct_embed(o, out);
  if (o.construct_kind == "witness_break") return construct_witness(o, out);
  return construct_lift(o, out);
}

int cmd_verify(const Options& o, std::ostream& out) {
  SuiteParams p(BipartiteDims(o.m > 0 ? o.m : 2, o.n > 0 ? o.n : 2), o.trials, effective_seed(o));
  p.k = o.k;
  if (!o.target.empty()) {
    p.target = read_vector(o.target);
    require_same_dims(p.target->dims(), p.dims, "--target");
  }
  if (!o.witness.empty()) {
    p.witness = read_matrix(o.witness);
    require_same_dims(p.witness->dims(), p.dims, "--witness");
  }
  for (const auto& path : o.inputs) {
    CMat x = read_matrix(path);
    require_same_dims(x.dims(), p.dims, "--inputs");
    p.extra_inputs.push_back(std::move(x));
  }

  const SuiteReport r = run_suite(o.suite, p);
  const std::string path = o.out.empty() ? o.suite + "-report.json" : o.out;
  io::write_atomic(path, io::canonical_dump(io::to_json(r)));
  if (!o.csv.empty()) {
    std::string text;
    if (std::filesystem::exists(o.csv)) {
      text = io::read_text(o.csv);
      if (!text.empty() && text.back() != '\n') text += '\n';
    } else {
      text = io::csv_header();
    }
    io::write_atomic(o.csv, text + io::csv_row(r));
  }

  json summary;
  summary["suite"] = r.suite_id;
  summary["m"] = r.dims.m();
  summary["n"] = r.dims.n();
  summary["verdict"] = r.verdict;
  summary["trials"] = r.trials;
  summary["passes"] = r.passes;
  summary["failures"] = static_cast<int>(r.failures.size());
  summary["max_residual"] = r.max_residual;
  summary["seed"] = r.seed;
  summary["report"] = path;
  if (r.verdict == "exploratory") {
    json tallies = r.details;
    tallies.erase("evidence");
    summary["details"] = std::move(tallies);
  }
  out << io::canonical_dump(summary);
  return r.failures.empty() ? kExitIn : kExitOut;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conekit: membership tests and constructions for bipartite cones"};
  app.require_subcommand(1);
  Options o;

  auto add_dims = [&](CLI::App* c) {
    c->add_option("--m", o.m, "first factor dimension")->check(CLI::PositiveNumber);
    c->add_option("--n", o.n, "second factor dimension")->check(CLI::PositiveNumber);
  };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "random seed (falls back to CONEKIT_SEED, then 0)");
  };

  CLI::App* check = app.add_subcommand("check", "cone membership of a matrix file");
  check->add_option("kind", o.check_kind)->required()->check(
      CLI::IsMember({"psd", "ppt", "sep", "blockpos"}));
  check->add_option("file", o.file)->required();
  check->add_option("--tol", o.tol);
  check->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
  check->add_option("--iters", o.iters)->check(CLI::PositiveNumber);
  check->add_option("--out", o.out, "also write the report here");
  add_dims(check);
  add_seed(check);

  CLI::App* rank = app.add_subcommand("rank", "Schmidt rank of a vector or operator Schmidt rank");
  rank->add_option("kind", o.rank_kind)->required()->check(CLI::IsMember({"sr", "osr"}));
  rank->add_option("file", o.file)->required();
  rank->add_option("--tol", o.tol);
  add_dims(rank);

  CLI::App* construct = app.add_subcommand("construct", "build a family and validate it");
  construct->add_option("kind", o.construct_kind)->required()->check(
      CLI::IsMember({"collapse", "embed_k", "witness_break", "lift"}));
  construct->add_option("--target", o.target, "target vector (collapse)");
  construct->add_option("--v", o.v_file);
  construct->add_option("--u", o.u_file);
  construct->add_option("--w", o.w_file);
  construct->add_option("--z", o.z_file, "negative direction of the witness");
  construct->add_option("--k", o.k);
  construct->add_option("--tol", o.tol);
  construct->add_option("--out", o.out_dir, "output directory (default .)");
  add_dims(construct);

  CLI::App* verify = app.add_subcommand("verify", "run a seeded verification suite");
  verify->add_option("suite", o.suite)->required()->check(CLI::IsMember(suite_ids()));
  verify->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  verify->add_option("--k", o.k)->check(CLI::NonNegativeNumber);
  verify->add_option("--out", o.out, "report path (default <suite>-report.json)");
  verify->add_option("--csv", o.csv, "append a summary row to this CSV file");
  verify->add_option("--target", o.target);
  verify->add_option("--witness", o.witness);
  verify->add_option("--inputs", o.inputs, "extra input matrices (ppt-stability)");
  add_dims(verify);
  add_seed(verify);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (rank->parsed()) return cmd_rank(o, out);
    if (construct->parsed()) return cmd_construct(o, out);
    return cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const DimError& e) {
    err << "dimension mismatch: " << e.what() << "\n";
    return kExitDimension;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace conekit::cli
