#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "invforge/linalg.hpp"
#include "invforge/tensor.hpp"

namespace invforge {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"kind": "rational"}, {"kind": "cyclotomic", "order": n} or {"kind": "rational_function"}.
ScalarField field_from_json(const Json& j, const std::string& where = "field");
Json field_to_json(const ScalarField& f);

/// A scalar given as a literal string (or an integer). FieldError on a bad literal.
Scalar scalar_from_json(const Json& j, const ScalarField& f, const std::string& where);

/// Rows of scalar literals.
Matrix<Scalar> matrix_from_json(const Json& j, const ScalarField& f, const std::string& where);
Json matrix_to_json(const Matrix<Scalar>& m);
Json vector_to_json(const Vec<Scalar>& v);

/// Validated structure from the file schema: schema_version, field, dim and
/// tensors [{name, p, q, entries: [{up, down, value}]}]. Unlisted entries are 0;
/// a repeated index is a SchemaError.
Structure structure_from_json(const Json& j);
/// Canonical form: tensors in structure order, nonzero entries in flat-index order.
Json structure_to_json(const Structure& s);

/// Whole documents. ParseError carries the parser's line/column.
Json parse_json_text(const std::string& text, const std::string& source);
/// IoError when the file cannot be read.
Json read_json_file(const std::filesystem::path& path);

Structure parse_structure_file(const std::filesystem::path& path);
/// Canonical text (two-space indentation, trailing newline).
std::string emit_structure(const Structure& s);

}  // namespace invforge
