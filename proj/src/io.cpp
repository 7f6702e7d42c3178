#include "invforge/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace invforge {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, where + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where, std::string("missing \"") + key + "\"");
  return *it;
}

int int_member(const Json& j, const char* key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_number_integer()) schema(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::vector<int> index_list(const Json& j, int expected_len, int dim, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an index array");
  if (static_cast<int>(j.size()) != expected_len) {
    schema(where, "expected " + std::to_string(expected_len) + " indices, got " + std::to_string(j.size()));
  }
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) schema(where, "indices must be integers");
    const int v = x.get<int>();
    if (v < 0 || v >= dim) schema(where, "index " + std::to_string(v) + " out of range 0.." + std::to_string(dim - 1));
    out.push_back(v);
  }
  return out;
}

}  // namespace

ScalarField field_from_json(const Json& j, const std::string& where) {
  const Json& kind = member(j, "kind", where);
  if (!kind.is_string()) schema(where + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "rational") return ScalarField::rational();
  if (k == "rational_function") return ScalarField::rational_function();
  if (k == "cyclotomic") {
    const int n = int_member(j, "order", where);
    if (n < 1) schema(where + ".order", "must be positive");
    return ScalarField::cyclotomic(n);
  }
  schema(where + ".kind", "unknown field kind \"" + k + "\"");
}

Json field_to_json(const ScalarField& f) {
  Json j;
  if (f.is_cyclotomic()) {
    j["kind"] = "cyclotomic";
    j["order"] = f.order;
  } else {
    j["kind"] = f.is_rational_function() ? "rational_function" : "rational";
  }
  return j;
}

Scalar scalar_from_json(const Json& j, const ScalarField& f, const std::string& where) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number_integer()) {
    text = std::to_string(j.get<long long>());
  } else {
    schema(where, "scalars are written as strings");
  }
  try {
    return parse_scalar(text, f);
  } catch (const Error& e) {
    throw Error(ErrorCode::FieldError, where + ": \"" + text + "\": " + e.what());
  }
}

Matrix<Scalar> matrix_from_json(const Json& j, const ScalarField& f, const std::string& where) {
  if (!j.is_array() || j.empty()) schema(where, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) schema(where, "rows must be nonempty arrays");
  Matrix<Scalar> m(j.size(), cols, Scalar::zero(f));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) schema(rw, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json(j[r][c], f, rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json matrix_to_json(const Matrix<Scalar>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vec<Scalar>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

Structure structure_from_json(const Json& j) {
  const Json& ver = member(j, "schema_version", "structure");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
    schema("structure.schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  const ScalarField f = field_from_json(member(j, "field", "structure"), "structure.field");
  const int dim = int_member(j, "dim", "structure");
  if (dim < 1) schema("structure.dim", "must be positive");
  Structure s(dim, f);
  auto it = j.find("tensors");
  if (it == j.end()) return s;
  if (!it->is_array()) schema("structure.tensors", "expected an array");
  std::set<std::string> names;
  for (std::size_t ti = 0; ti < it->size(); ++ti) {
    const Json& tj = (*it)[ti];
    const std::string where = "structure.tensors[" + std::to_string(ti) + "]";
    const Json& name = member(tj, "name", where);
    if (!name.is_string() || name.get<std::string>().empty()) schema(where + ".name", "expected a nonempty string");
    if (!names.insert(name.get<std::string>()).second) schema(where + ".name", "duplicate tensor name");
    const int p = int_member(tj, "p", where), q = int_member(tj, "q", where);
    if (p < 0 || q < 0) schema(where, "p and q must be nonnegative");
    Tensor t(TensorType{p, q}, dim, f);
    std::set<std::size_t> seen;
    auto ent = tj.find("entries");
    if (ent != tj.end()) {
      if (!ent->is_array()) schema(where + ".entries", "expected an array");
      for (std::size_t ei = 0; ei < ent->size(); ++ei) {
        const Json& e = (*ent)[ei];
        const std::string ew = where + ".entries[" + std::to_string(ei) + "]";
        const auto up = index_list(member(e, "up", ew), p, dim, ew + ".up");
        const auto down = index_list(member(e, "down", ew), q, dim, ew + ".down");
        const std::size_t flat = t.flat_index(up, down);
        if (!seen.insert(flat).second) schema(ew, "duplicate entry for the same indices");
        t.entries()[flat] = scalar_from_json(member(e, "value", ew), f, ew + ".value");
      }
    }
    s.add(name.get<std::string>(), std::move(t));
  }
  return s;
}

Json structure_to_json(const Structure& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["field"] = field_to_json(s.field());
  j["dim"] = s.dim();
  j["tensors"] = Json::array();
  const auto n = static_cast<std::size_t>(s.dim());
  for (const auto& [name, t] : s.tensors()) {
    Json tj;
    tj["name"] = name;
    tj["p"] = t.type().p;
    tj["q"] = t.type().q;
    tj["entries"] = Json::array();
    const int slots = t.type().p + t.type().q;
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      if (t.entries()[flat].is_zero()) continue;
      std::vector<int> idx(static_cast<std::size_t>(slots));
      std::size_t rest = flat;
      for (int k = slots - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(rest % n);
        rest /= n;
      }
      Json e;
      e["up"] = std::vector<int>(idx.begin(), idx.begin() + t.type().p);
      e["down"] = std::vector<int>(idx.begin() + t.type().p, idx.end());
      e["value"] = t.entries()[flat].to_string();
      tj["entries"].push_back(std::move(e));
    }
    j["tensors"].push_back(std::move(tj));
  }
  return j;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Recover line and column from the byte offset.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

Structure parse_structure_file(const std::filesystem::path& path) { return structure_from_json(read_json_file(path)); }

std::string emit_structure(const Structure& s) { return structure_to_json(s).dump(2) + "\n"; }

}  // namespace invforge
