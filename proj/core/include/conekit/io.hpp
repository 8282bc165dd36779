#pragma once

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "conekit/cone_membership.hpp"
#include "conekit/cstar_constructions.hpp"
#include "conekit/theorem_suites.hpp"
#include "conekit/types.hpp"

namespace conekit::io {

using nlohmann::json;

/// Canonical text form: two-space indentation, sorted keys, numeric arrays
/// on one line and doubles printed with 17 significant digits. Parsing and
/// re-emitting a canonical document reproduces it byte for byte.
std::string canonical_dump(const json& value);

json matrix_to_json(const Matrix& a);
json vector_to_json(const Vector& v);
/// Throws ParseError on structure / non-finite entries and DimError on shape.
Matrix matrix_from_json(const json& j, Eigen::Index size);
Vector vector_from_json(const json& j, Eigen::Index size);

/// On-disk matrix or vector: {"m", "n", "re", "im", "meta"?}. `re` / `im`
/// are M x M nested arrays for a matrix and length-M arrays for a vector.
struct MatrixFile {
  BipartiteDims dims{1, 1};
  std::optional<Matrix> matrix;
  std::optional<Vector> vector;
  std::map<std::string, std::string> meta;

  static MatrixFile from(const CMat& a);
  static MatrixFile from(const CVec& v);
  CMat as_matrix() const;
  CVec as_vector() const;
  bool is_vector() const { return vector.has_value(); }
};

json to_json(const MatrixFile& f);
MatrixFile matrix_file_from_json(const json& j);
MatrixFile parse_matrix_file(const std::string& text);
MatrixFile read_matrix_file(const std::string& path);

json to_json(const MembershipReport& r);
json to_json(const KrausFamily& f);
KrausFamily family_from_json(const json& j);
/// Suite report; `include_wall_time = false` gives the reproducible part.
json to_json(const SuiteReport& r, bool include_wall_time = true);
/// One newline-terminated CSV row: suite_id,dims,trials,passes,max_residual,seed.
std::string csv_row(const SuiteReport& r);
std::string csv_header();

std::string read_text(const std::string& path);
/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace conekit::io
