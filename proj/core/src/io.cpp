#include "conekit/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "conekit/errors.hpp"

namespace conekit::io {
namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) throw Error("cannot serialize a non-finite number");
  if (x == 0.0) return std::signbit(x) ? "-0.0" : "0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

bool is_flat(const json& a) {
  for (const auto& e : a) {
    if (e.is_array() || e.is_object()) return false;
  }
  return true;
}

void emit(const json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case json::value_t::null:
      out += "null";
      return;
    case json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      return;
    case json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    case json::value_t::string:
      out += v.dump();
      return;
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      if (is_flat(v)) {
        out += '[';
        bool first = true;
        for (const auto& e : v) {
          if (!first) out += ", ";
          first = false;
          emit(e, indent, out);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += inner;
        emit(v[i], indent + 1, out);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      out += pad + ']';
      return;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += inner + json(it.key()).dump() + ": ";
        emit(it.value(), indent + 1, out);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      out += pad + '}';
      return;
    }
    default:
      throw Error("unsupported JSON value in canonical_dump");
  }
}

double number_at(const json& e) {
  if (!e.is_number()) throw ParseError("matrix entries must be numbers");
  const double x = e.get<double>();
  if (!std::isfinite(x)) throw ParseError("matrix entries must be finite");
  return x;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

RealVector real_row(const json& row, Eigen::Index size) {
  if (!row.is_array()) throw ParseError("expected an array of numbers");
  if (static_cast<Eigen::Index>(row.size()) != size) {
    throw DimError("array of length " + std::to_string(row.size()) + ", expected " +
                   std::to_string(size));
  }
  RealVector out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = number_at(row[static_cast<std::size_t>(i)]);
  return out;
}

Eigen::MatrixXd real_block(const json& rows, Eigen::Index size) {
  if (!rows.is_array()) throw ParseError("expected a nested array");
  if (static_cast<Eigen::Index>(rows.size()) != size) {
    throw DimError("matrix with " + std::to_string(rows.size()) + " rows, expected " +
                   std::to_string(size));
  }
  Eigen::MatrixXd out(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    out.row(i) = real_row(rows[static_cast<std::size_t>(i)], size).transpose();
  }
  return out;
}

int positive_int(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1 || v.get<std::int64_t>() > 1 << 16) {
    throw ParseError(std::string("field '") + key + "' must be a positive integer");
  }
  return static_cast<int>(v.get<std::int64_t>());
}

}  // namespace

std::string canonical_dump(const json& value) {
  std::string out;
  emit(value, 0, out);
  out += '\n';
  return out;
}

json matrix_to_json(const Matrix& a) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json rr = json::array();
    json ir = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      rr.push_back(a(i, j).real());
      ir.push_back(a(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

json vector_to_json(const Vector& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j, Eigen::Index size) {
  const Eigen::MatrixXd re = real_block(field(j, "re"), size);
  const Eigen::MatrixXd im = real_block(field(j, "im"), size);
  Matrix out(size, size);
  out.real() = re;
  out.imag() = im;
  return out;
}

Vector vector_from_json(const json& j, Eigen::Index size) {
  const RealVector re = real_row(field(j, "re"), size);
  const RealVector im = real_row(field(j, "im"), size);
  Vector out(size);
  out.real() = re;
  out.imag() = im;
  return out;
}

MatrixFile MatrixFile::from(const CMat& a) {
  MatrixFile f;
  f.dims = a.dims();
  f.matrix = a.entries();
  return f;
}

MatrixFile MatrixFile::from(const CVec& v) {
  MatrixFile f;
  f.dims = v.dims();
  f.vector = v.entries();
  return f;
}

CMat MatrixFile::as_matrix() const {
  if (!matrix) throw DimError("file holds a vector where a matrix was expected");
  return CMat(dims, *matrix);
}

CVec MatrixFile::as_vector() const {
  if (!vector) throw DimError("file holds a matrix where a vector was expected");
  return CVec(dims, *vector);
}

json to_json(const MatrixFile& f) {
  json j = f.matrix ? matrix_to_json(*f.matrix) : vector_to_json(*f.vector);
  j["m"] = f.dims.m();
  j["n"] = f.dims.n();
  if (!f.meta.empty()) j["meta"] = f.meta;
  return j;
}

MatrixFile matrix_file_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix file must be a JSON object");
  MatrixFile f;
  f.dims = BipartiteDims(positive_int(j, "m"), positive_int(j, "n"));
  const json& re = field(j, "re");
  if (!re.is_array() || re.empty()) throw ParseError("field 're' must be a non-empty array");
  const auto size = static_cast<Eigen::Index>(f.dims.total());
  if (re[0].is_array()) {
    f.matrix = matrix_from_json(j, size);
  } else {
    f.vector = vector_from_json(j, size);
  }
  if (j.contains("meta")) {
    const json& meta = j.at("meta");
    if (!meta.is_object()) throw ParseError("field 'meta' must be an object");
    for (auto it = meta.begin(); it != meta.end(); ++it) {
      if (!it.value().is_string()) throw ParseError("meta values must be strings");
      f.meta[it.key()] = it.value().get<std::string>();
    }
  }
  return f;
}

MatrixFile parse_matrix_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return matrix_file_from_json(j);
}

MatrixFile read_matrix_file(const std::string& path) { return parse_matrix_file(read_text(path)); }

json to_json(const MembershipReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["min_eig"] = r.min_eig;
  j["tol"] = r.tol;
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  if (r.certificate) {
    const Certificate& c = *r.certificate;
    json cj;
    cj["kind"] = to_string(c.kind);
    cj["value"] = c.value;
    cj["label"] = c.label;
    if (c.vector) cj["vector"] = vector_to_json(*c.vector);
    if (c.left) cj["left"] = vector_to_json(*c.left);
    if (c.right) cj["right"] = vector_to_json(*c.right);
    j["certificate"] = std::move(cj);
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

json to_json(const KrausFamily& f) {
  json j;
  j["format"] = "conekit.kraus_family";
  j["m"] = f.dims.m();
  j["n"] = f.dims.n();
  j["mode"] = to_string(f.mode);
  j["locality"] = to_string(f.locality);
  j["osr_bound"] = f.osr_bound ? json(*f.osr_bound) : json(nullptr);
  j["seed"] = f.seed ? json(*f.seed) : json(nullptr);
  json ops = json::array();
  for (const auto& a : f.ops) ops.push_back(matrix_to_json(a.entries()));
  j["ops"] = std::move(ops);
  return j;
}

KrausFamily family_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("Kraus family must be a JSON object");
  const BipartiteDims dims(positive_int(j, "m"), positive_int(j, "n"));
  KrausFamily f{dims, {}, Normalization::Exact, std::nullopt, Locality::Global, std::nullopt};
  const json& mode = field(j, "mode");
  if (mode == "exact") {
    f.mode = Normalization::Exact;
  } else if (mode == "contractive") {
    f.mode = Normalization::Contractive;
  } else {
    throw ParseError("mode must be 'exact' or 'contractive'");
  }
  if (j.contains("locality")) {
    const json& loc = j.at("locality");
    if (loc == "local") {
      f.locality = Locality::Local;
    } else if (loc != "global") {
      throw ParseError("locality must be 'local' or 'global'");
    }
  }
  if (j.contains("osr_bound") && !j.at("osr_bound").is_null()) {
    f.osr_bound = positive_int(j, "osr_bound");
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_unsigned()) throw ParseError("seed must be unsigned");
    f.seed = j.at("seed").get<std::uint64_t>();
  }
  const json& ops = field(j, "ops");
  if (!ops.is_array()) throw ParseError("ops must be an array");
  for (const auto& op : ops) f.ops.emplace_back(dims, matrix_from_json(op, dims.total()));
  return f;
}

json to_json(const SuiteReport& r, bool include_wall_time) {
  json j;
  j["suite_id"] = r.suite_id;
  j["m"] = r.dims.m();
  j["n"] = r.dims.n();
  j["trials"] = r.trials;
  j["passes"] = r.passes;
  j["seed"] = r.seed;
  j["verdict"] = r.verdict;
  j["max_residual"] = r.max_residual;
  j["tolerances"] = json::object();
  for (const auto& [key, value] : r.tolerances) j["tolerances"][key] = value;
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back(json{{"trial", f.trial},
                            {"trial_seed", f.trial_seed},
                            {"residual", f.residual},
                            {"payload", f.payload}});
  }
  j["failures"] = std::move(failures);
  j["details"] = r.details;
  if (include_wall_time) j["wall_time"] = r.wall_time;
  return j;
}

std::string csv_header() { return "suite_id,dims,trials,passes,max_residual,seed\n"; }

std::string csv_row(const SuiteReport& r) {
  std::ostringstream os;
  os << r.suite_id << ',' << r.dims.m() << 'x' << r.dims.n() << ',' << r.trials << ','
     << r.passes << ',' << format_double(r.max_residual) << ',' << r.seed << '\n';
  return os.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

}  // namespace conekit::io
