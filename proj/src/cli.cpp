#include "invforge/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "invforge/autlie.hpp"
#include "invforge/closure.hpp"
#include "invforge/identities.hpp"
#include "invforge/io.hpp"
#include "invforge/morphcalc.hpp"
#include "invforge/structures.hpp"
#include "invforge/traceinv.hpp"

namespace invforge {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string structure;
  std::string job;
  std::string bound;
  std::optional<int> degree;
  std::string format = "json";
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> budget;
  bool force_large = false;
};

/// A structure plus the construction it came from, when built from parameters.
struct Loaded {
  Structure structure{1, ScalarField::rational()};
  std::optional<TwistedGroupAlgebra> twisted;
};

class Context {
 public:
  Context(Options o) : opt(std::move(o)) {
    if (!opt.job.empty()) {
      job = read_json_file(opt.job);
      if (!job.is_object()) throw Error(ErrorCode::SchemaError, "job: expected an object");
      base = fs::path(opt.job).parent_path();
      auto v = job.find("schema_version");
      if (v == job.end() || !v->is_number_integer() || v->get<int>() != kSchemaVersion) {
        throw Error(ErrorCode::SchemaError, "job.schema_version: missing or unsupported");
      }
      if (auto p = job.find("params"); p != job.end()) {
        if (!p->is_object()) throw Error(ErrorCode::SchemaError, "job.params: expected an object");
        params = *p;
      }
    }
  }

  const Json* param(const char* key) const {
    auto it = params.find(key);
    return it == params.end() ? nullptr : &*it;
  }
  const Json& require(const char* key) const {
    const Json* p = param(key);
    if (!p) throw Error(ErrorCode::SchemaError, std::string("job.params: missing \"") + key + "\"");
    return *p;
  }
  int int_param(const char* key, int fallback) const {
    const Json* p = param(key);
    if (!p) return fallback;
    if (!p->is_number_integer()) throw Error(ErrorCode::SchemaError, std::string("job.params.") + key + ": expected an integer");
    return p->get<int>();
  }

  Loaded load() const {
    if (!opt.structure.empty()) return Loaded{parse_structure_file(opt.structure), std::nullopt};
    auto it = job.find("structure");
    if (it == job.end()) throw Error(ErrorCode::SchemaError, "no structure given (use --structure or a job file)");
    if (it->is_string()) {
      fs::path p = it->get<std::string>();
      if (p.is_relative()) p = base / p;
      return Loaded{parse_structure_file(p), std::nullopt};
    }
    if (it->is_object() && it->contains("builder")) return build(*it, "job.structure");
    return Loaded{structure_from_json(*it), std::nullopt};
  }

  std::uint64_t budget(std::uint64_t fallback) const { return opt.budget.value_or(fallback); }

  Options opt;
  Json job = Json::object();
  Json params = Json::object();
  fs::path base;

 private:
  static Loaded build(const Json& spec, const std::string& where);
};

int lcm_all(const std::vector<int>& v) {
  int l = 1;
  for (int x : v) l = std::lcm(l, x);
  return l;
}

std::vector<int> int_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, where + ": expected an integer array");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw Error(ErrorCode::SchemaError, where + ": expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

ScalarField field_or(const Json& spec, const ScalarField& fallback, const std::string& where) {
  auto it = spec.find("field");
  return it == spec.end() ? fallback : field_from_json(*it, where + ".field");
}

TwistedGroupAlgebra twisted_from_json(const Json& spec, const std::string& where) {
  const auto orders = int_list(spec.at("orders"), where + ".orders");
  if (orders.empty()) throw Error(ErrorCode::SchemaError, where + ".orders: must be nonempty");
  const ScalarField f = field_or(spec, ScalarField::cyclotomic(lcm_all(orders)), where);
  const GroupTable g = GroupTable::cyclic_product(orders);
  Cocycle2 alpha = trivial_cocycle(g, f);
  if (auto c = spec.find("cocycle"); c != spec.end()) {
    const std::string kind = c->value("kind", "trivial");
    if (kind == "bicharacter") {
      if (orders.size() != 2 || orders[0] != orders[1]) {
        throw Error(ErrorCode::ParamInvalid, where + ".cocycle: bicharacter needs orders [n, n]");
      }
      alpha = bicharacter_cocycle(orders[0], f, c->value("power", 1));
    } else if (kind == "table") {
      const auto m = matrix_from_json(c->at("alpha"), f, where + ".cocycle.alpha");
      if (m.rows() != static_cast<std::size_t>(g.order) || m.cols() != m.rows()) {
        throw Error(ErrorCode::SchemaError, where + ".cocycle.alpha: expected an |G| x |G| table");
      }
      for (std::size_t x = 0; x < m.rows(); ++x) {
        for (std::size_t y = 0; y < m.cols(); ++y) alpha.alpha[x][y] = m(x, y);
      }
    } else if (kind != "trivial") {
      throw Error(ErrorCode::SchemaError, where + ".cocycle.kind: unknown \"" + kind + "\"");
    }
  }
  return build_twisted_group_algebra(g, alpha);
}

TaftParams taft_from_json(const Json& spec, const std::string& where) {
  TaftParams p;
  p.n = spec.value("n", 2);
  p.field = field_or(spec, ScalarField::cyclotomic(p.n), where);
  p.a = scalar_from_json(spec.value("a", Json("1")), p.field, where + ".a");
  p.b = scalar_from_json(spec.value("b", Json("0")), p.field, where + ".b");
  return p;
}

TaftProductParams taft_product_from_json(const Json& spec, const std::string& where) {
  if (!spec.contains("factors") || !spec["factors"].is_array() || spec["factors"].empty()) {
    throw Error(ErrorCode::SchemaError, where + ".factors: expected a nonempty array");
  }
  std::vector<int> ns;
  for (const auto& f : spec["factors"]) ns.push_back(f.value("n", 2));
  TaftProductParams p;
  p.field = field_or(spec, ScalarField::cyclotomic(lcm_all(ns)), where);
  const std::size_t z = ns.size();
  for (std::size_t i = 0; i < z; ++i) {
    const Json& f = spec["factors"][i];
    const std::string fw = where + ".factors[" + std::to_string(i) + "]";
    p.factors.push_back(TaftFactor{ns[i], f.value("c", 1), scalar_from_json(f.value("a", Json("1")), p.field, fw + ".a"),
                                   scalar_from_json(f.value("b", Json("0")), p.field, fw + ".b")});
  }
  p.bexp.assign(z, std::vector<int>(z, 0));
  p.lambda.assign(z, std::vector<Scalar>(z, Scalar::zero(p.field)));
  if (auto b = spec.find("bexp"); b != spec.end()) {
    if (!b->is_array() || b->size() != z) throw Error(ErrorCode::SchemaError, where + ".bexp: expected a z x z array");
    for (std::size_t i = 0; i < z; ++i) {
      const auto row = int_list((*b)[i], where + ".bexp");
      if (row.size() != z) throw Error(ErrorCode::SchemaError, where + ".bexp: expected a z x z array");
      p.bexp[i] = row;
    }
  }
  if (auto l = spec.find("lambda"); l != spec.end()) {
    const auto m = matrix_from_json(*l, p.field, where + ".lambda");
    if (m.rows() != z || m.cols() != z) throw Error(ErrorCode::SchemaError, where + ".lambda: expected a z x z array");
    for (std::size_t i = 0; i < z; ++i) {
      for (std::size_t j = 0; j < z; ++j) p.lambda[i][j] = m(i, j);
    }
  }
  return p;
}

Loaded Context::build(const Json& spec, const std::string& where) {
  const std::string b = spec["builder"].is_string() ? spec["builder"].get<std::string>() : "";
  if (b == "twisted-group") {
    auto w = twisted_from_json(spec, where);
    Structure s = w.structure;
    return Loaded{std::move(s), std::move(w)};
  }
  if (b == "taft") return Loaded{build_taft(taft_from_json(spec, where)).structure, std::nullopt};
  if (b == "taft-product") return Loaded{build_taft_product(taft_product_from_json(spec, where)).structure, std::nullopt};
  if (b == "matrix-algebra" || b == "diagonal-algebra") {
    const int n = spec.value("n", 2);
    const ScalarField f = field_or(spec, ScalarField::rational(), where);
    return Loaded{b == "matrix-algebra" ? matrix_algebra(n, f) : diagonal_algebra(n, f), std::nullopt};
  }
  throw Error(ErrorCode::SchemaError, where + ".builder: unknown builder \"" + b + "\"");
}

DegreeBound parse_bound(const Context& c, DegreeBound fallback) {
  DegreeBound b = fallback;
  if (!c.opt.bound.empty()) {
    const auto comma = c.opt.bound.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("comma");
      b.P = std::stoi(c.opt.bound.substr(0, comma));
      b.Q = std::stoi(c.opt.bound.substr(comma + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParamInvalid, "--bound expects P,Q");
    }
  } else if (const Json* j = c.param("bound")) {
    const auto v = int_list(*j, "job.params.bound");
    if (v.size() != 2) throw Error(ErrorCode::SchemaError, "job.params.bound: expected [P, Q]");
    b.P = v[0];
    b.Q = v[1];
  }
  if (b.P < 0 || b.Q < 0) throw Error(ErrorCode::ParamInvalid, "bound must be nonnegative");
  return b;
}

DegreeBound seed_bound(const Structure& s) {
  DegreeBound b{0, 0, 64};
  for (const auto& [name, t] : s.tensors()) {
    b.P = std::max(b.P, t.type().p);
    b.Q = std::max(b.Q, t.type().q);
  }
  return b;
}

Json scalar_list(const std::vector<Scalar>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

Json header(const std::string& command, const Structure* s) {
  Json j;
  j["command"] = command;
  if (s) {
    j["field"] = s->field().to_string();
    j["dim"] = s->dim();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Commands

Json cmd_closure(const Context& c) {
  const auto s = c.load().structure;
  const DegreeBound b = parse_bound(c, DegreeBound{2, 2, 64});
  const auto st = compute_closure(s, b, c.budget(50'000'000));
  Json j = header("closure", &s);
  j["bound"] = {b.P, b.Q};
  j["converged"] = st.converged;
  j["rounds"] = st.rounds;
  Json dims = Json::object();
  for (int p = 0; p <= b.P; ++p) {
    for (int q = 0; q <= b.Q; ++q) dims["X^{" + std::to_string(p) + "," + std::to_string(q) + "}"] = st.dimension({p, q});
  }
  j["dimensions"] = dims;
  return j;
}

Json field_report_json(const InvariantFieldReport& r) {
  Json j;
  j["q_basis"] = scalar_list(r.q_basis);
  j["q_dimension"] = r.q_basis.size();
  j["field_closed"] = r.field_closed;
  j["galois_stabilizer"] = r.galois_stabilizer;
  j["fixed_field_degree"] = r.fixed_field_degree;
  return j;
}

Json cmd_invariant_field(const Context& c) {
  const auto s = c.load().structure;
  const DegreeBound b = parse_bound(c, seed_bound(s));
  const auto st = compute_closure(s, b, c.budget(50'000'000));
  Json j = header("invariant-field", &s);
  j["bound"] = {b.P, b.Q};
  j["converged"] = st.converged;
  j["X^{0,0}"] = field_report_json(invariant_field_report(st));
  return j;
}

Json cmd_aut_lie(const Context& c) {
  const auto s = c.load().structure;
  const auto r = aut_lie_algebra(s);
  Json j = header("aut-lie", &s);
  j["dimension"] = r.dimension;
  Json basis = Json::array();
  for (const auto& d : r.basis) basis.push_back(matrix_to_json(d));
  j["basis"] = basis;
  return j;
}

Json identity_json(const IdentitySpace& sp) {
  Json list = Json::array();
  for (const auto& v : sp.basis) {
    Json e;
    e["polynomial"] = render_identity(sp.perms, v);
    e["coefficients"] = vector_to_json(v);
    list.push_back(e);
  }
  return list;
}

Json cmd_identities(const Context& c) {
  const auto s = c.load().structure;
  const int d = c.opt.degree ? *c.opt.degree : c.int_param("degree", 2);
  const auto sp = multilinear_identity_space(s, d, c.budget(20'000'000));
  Json j = header("identities", &s);
  j["degree"] = d;
  j["dimension"] = sp.basis.size();
  // The standard polynomial: the sign vector over S_d.
  Vec<Scalar> sign;
  for (const auto& p : sp.perms) sign.push_back(Scalar::from_int(s.field(), perm_sign(p)));
  auto rows = sp.basis;
  const std::size_t base_rank = rows.empty() ? 0 : rank(Matrix<Scalar>::from_rows(rows, sp.perms.size(), Scalar::zero(s.field())));
  rows.push_back(sign);
  const std::size_t with_sign = rank(Matrix<Scalar>::from_rows(rows, sp.perms.size(), Scalar::zero(s.field())));
  j["sign_vector"] = vector_to_json(sign);
  j["sign_vector_in_span"] = with_sign == base_rank;
  j["identities"] = identity_json(sp);
  return j;
}

Json cmd_graded_identities(const Context& c) {
  const auto s = c.load().structure;
  const auto grades = int_list(c.require("grades"), "job.params.grades");
  const auto sp = graded_identity_space(s, grades, c.budget(20'000'000));
  Json j = header("graded-identities", &s);
  j["grades"] = grades;
  j["dimension"] = sp.basis.size();
  j["identities"] = identity_json(sp);
  return j;
}

Json value_json(const Value& v) {
  Json j;
  if (const auto* x = std::get_if<Scalar>(&v)) return x->to_string();
  if (const auto* m = std::get_if<PresentedMap>(&v)) {
    j["kind"] = "map";
    j["rows"] = m->matrix.rows();
    j["cols"] = m->matrix.cols();
    if (m->matrix.rows() > 0 && m->matrix.cols() > 0) j["matrix"] = matrix_to_json(m->matrix);
    return j;
  }
  const auto& sp = std::get<SpacePtr>(v);
  j["kind"] = "space";
  j["dim"] = sp->size();
  return j;
}

std::vector<std::pair<std::string, Expression>> named_expressions(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, where + ": expected an object of name: expression");
  std::vector<std::pair<std::string, Expression>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) throw Error(ErrorCode::SchemaError, where + "." + it.key() + ": expected a string");
    out.emplace_back(it.key(), parse_expression(it.value().get<std::string>()));
  }
  return out;
}

Json cmd_eval(const Context& c) {
  const auto s = c.load().structure;
  Bindings bindings;
  if (const Json* b = c.param("bindings")) {
    for (auto& [name, e] : named_expressions(*b, "job.params.bindings")) bindings[name] = std::move(e);
  }
  const auto exprs = named_expressions(c.require("expressions"), "job.params.expressions");
  Json j = header("eval", &s);
  Json results = Json::object();
  for (const auto& [name, e] : exprs) results[name] = value_json(eval_expression(e, s, bindings));
  j["results"] = results;
  if (const Json* sp = c.param("specialize")) {
    if (!s.field().is_rational_function()) throw Error(ErrorCode::ParamInvalid, "specialize needs a rational_function structure");
    Json list = Json::array();
    for (const auto& x : *sp) {
      const Scalar t = scalar_from_json(x, ScalarField::rational(), "job.params.specialize");
      const Structure sx = s.specialize(t.q_coords()[0]);
      Json row;
      row["t"] = t.to_string();
      for (const auto& [name, e] : exprs) row[name] = value_json(eval_expression(e, sx, bindings));
      list.push_back(row);
    }
    j["specializations"] = list;
  }
  return j;
}

TwistedGroupAlgebra twisted_for(const Context& c) {
  if (c.job.contains("structure")) {
    auto l = c.load();
    if (!l.twisted) throw Error(ErrorCode::ParamInvalid, "structure must use the twisted-group builder");
    return std::move(*l.twisted);
  }
  return twisted_from_json(c.params, "job.params");
}

Json cmd_twisted_group(const Context& c) {
  const auto w = twisted_for(c);
  const auto& s = w.structure;
  Json j = header("twisted-group", &s);
  j["group_order"] = w.group.order;
  j["cocycle_ok"] = check_cocycle(w.group, w.alpha).ok;
  std::vector<std::pair<int, int>> pairs;
  if (const Json* p = c.param("pairs")) {
    for (const auto& x : *p) {
      const auto v = int_list(x, "job.params.pairs");
      if (v.size() != 2) throw Error(ErrorCode::SchemaError, "job.params.pairs: expected [g, h] entries");
      pairs.emplace_back(v[0], v[1]);
    }
  } else {
    const auto& d = w.group.decomposition;
    for (std::size_t a = 0; a < d.size(); ++a) {
      for (std::size_t b = 0; b < d.size(); ++b) {
        if (a != b) pairs.emplace_back(d[a].first, d[b].first);
      }
    }
  }
  Json comm = Json::array();
  for (const auto& [g, h] : pairs) {
    if (g < 0 || h < 0 || g >= w.group.order || h >= w.group.order) {
      throw Error(ErrorCode::ParamInvalid, "group element out of range");
    }
    Json e;
    e["g"] = g;
    e["h"] = h;
    e["commutator_element"] = w.group.commutator(g, h);
    e["w"] = vector_to_json(twisted_commutator(w, g, h));
    e["scalar"] = commutator_scalar(w, g, h).to_string();
    comm.push_back(e);
  }
  j["commutators"] = comm;
  if (const Json* words = c.param("words")) {
    Json out = Json::array();
    for (const auto& word : *words) {
      std::vector<std::pair<int, int>> wd;
      for (const auto& x : word) {
        const auto v = int_list(x, "job.params.words");
        if (v.size() != 2) throw Error(ErrorCode::SchemaError, "job.params.words: expected [g, h] letters");
        wd.emplace_back(v[0], v[1]);
      }
      Json e;
      e["word"] = word;
      e["alpha_tilde"] = alpha_tilde(w, wd).to_string();
      out.push_back(e);
    }
    j["alpha_tilde"] = out;
  }
  if (c.params.value("emit_structure", false)) j["structure"] = structure_to_json(s);
  return j;
}

Json generic_form_json(const GenericFormReport& r) {
  Json j;
  j["mu"] = r.mu.to_string();
  j["mu_order"] = r.mu_order;
  j["K0"] = r.k0;
  j["K0_degree"] = r.k0_degree;
  Json comm = Json::array();
  for (const auto& [a, b, v] : r.commutation) comm.push_back({{"i", a}, {"j", b}, {"c", v.to_string()}});
  j["commutation"] = comm;
  j["powers"] = scalar_list(r.powers);
  j["galois_stabilizer"] = r.galois_stabilizer;
  j["generic_form"] = r.text;
  return j;
}

Json cmd_generic_form(const Context& c) {
  const auto w = twisted_for(c);
  Json j = header("generic-form", &w.structure);
  const Json body = generic_form_json(mu_and_generic_form(w));
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

Json cmd_taft_build(const Context& c) {
  const auto p = taft_from_json(c.params, "job.params");
  const auto t = build_taft(p);
  Json j = header("taft-build", &t.structure);
  j["n"] = t.n;
  j["zeta"] = t.zeta.to_string();
  j["checks"] = "passed";
  if (c.params.value("emit_structure", true)) j["structure"] = structure_to_json(t.structure);
  return j;
}

std::vector<TaftFactor> shape_from_json(const Json& j, const ScalarField& f) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::SchemaError, "job.params.shape: expected a nonempty array");
  std::vector<TaftFactor> out;
  for (const auto& x : j) out.push_back(TaftFactor{x.value("n", 2), x.value("c", 1), Scalar::one(f), Scalar::zero(f)});
  return out;
}

Json product_invariants_json(const TaftProductInvariants& inv) {
  Json j;
  j["b"] = scalar_list(inv.b);
  Json z = Json::array();
  for (const auto& row : inv.zeta_bij) z.push_back(scalar_list(row));
  j["zeta_b"] = z;
  const auto pairs = [](const std::map<std::pair<int, int>, Scalar>& m) {
    Json a = Json::array();
    for (const auto& [ij, v] : m) a.push_back({{"i", ij.first + 1}, {"j", ij.second + 1}, {"value", v.to_string()}});
    return a;
  };
  j["Lambda"] = pairs(inv.Lambda);
  j["lambda"] = pairs(inv.lambda);
  Json cyc = Json::array();
  for (const auto& [cycle, v] : inv.cycles) {
    std::vector<int> one_based;
    for (int x : cycle) one_based.push_back(x + 1);
    cyc.push_back({{"cycle", one_based}, {"value", v.to_string()}});
  }
  j["cycles"] = cyc;
  return j;
}

Json cmd_taft_extract(const Context& c) {
  const auto s = c.load().structure;
  Json j = header("taft-extract", &s);
  if (const Json* shape = c.param("shape")) {
    const Json body = product_invariants_json(extract_product_invariants(s, shape_from_json(*shape, s.field())));
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    return j;
  }
  const auto inv = extract_taft_invariants(s);
  j["a"] = inv.a.to_string();
  j["b"] = inv.b.to_string();
  Json dims = Json::array();
  for (const auto& row : inv.wij_dims) dims.push_back(row);
  j["W_dims"] = dims;
  j["note"] = inv.note;
  return j;
}

Json cmd_taft_product(const Context& c) {
  const auto p = taft_product_from_json(c.params, "job.params");
  if (auto v = taft_product_violation(p)) throw Error(ErrorCode::ParamInvalid, *v);
  const auto t = build_taft_product(p);
  Json j = header("taft-product", &t.structure);
  j["factors"] = p.factors.size();
  j["zeta"] = t.zeta.to_string();
  j["checks"] = "passed";
  const Json body = product_invariants_json(extract_product_invariants(t.structure, p.factors));
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  if (c.params.value("emit_structure", false)) j["structure"] = structure_to_json(t.structure);
  return j;
}

Json cmd_galois_twist(const Context& c) {
  const std::int64_t k = c.int_param("k", 1);
  auto l = c.load();
  if (l.twisted) {
    const auto& w = *l.twisted;
    const auto tw = galois_twist(w, k);
    const auto before = mu_and_generic_form(w);
    const auto after = mu_and_generic_form(tw);
    Json j = header("galois-twist", &tw.structure);
    j["k"] = k;
    j["mu"] = before.mu.to_string();
    j["mu_twisted"] = after.mu.to_string();
    j["sigma_k_mu"] = before.mu.galois(k).to_string();
    j["mu_fixed"] = before.mu == after.mu;
    j["generic_form"] = after.text;
    if (c.params.value("emit_structure", false)) j["structure"] = structure_to_json(tw.structure);
    return j;
  }
  const auto tw = galois_twist(l.structure, k);
  Json j = header("galois-twist", &tw);
  j["k"] = k;
  j["structure"] = structure_to_json(tw);
  return j;
}

std::vector<Matrix<Scalar>> matrices_from_json(const Json& j, const ScalarField& f, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, where + ": expected an array of matrices");
  std::vector<Matrix<Scalar>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], f, where + "[" + std::to_string(i) + "]"));
  return out;
}

Json cmd_procesi(const Context& c) {
  const ScalarField f = field_or(c.params, ScalarField::rational(), "job.params");
  CycleInvariantSpec spec;
  spec.t = c.int_param("t", 1);
  const Json& cyc = c.require("cycles");
  if (!cyc.is_array()) throw Error(ErrorCode::SchemaError, "job.params.cycles: expected an array");
  for (const auto& x : cyc) spec.cycles.push_back(int_list(x, "job.params.cycles"));
  const auto ms = matrices_from_json(c.require("matrices"), f, "job.params.matrices");
  Json j = header("procesi", nullptr);
  j["t"] = spec.t;
  j["cycles"] = cyc;
  j["value"] = procesi_T(spec, ms).to_string();
  return j;
}

Json cmd_formanek(const Context& c) {
  const ScalarField f = field_or(c.params, ScalarField::rational(), "job.params");
  Json j = header("formanek", nullptr);
  if (const Json* m = c.param("matrices")) {
    j["f"] = formanek_f(matrices_from_json(*m, f, "job.params.matrices"), c.opt.force_large).to_string();
    return j;
  }
  if (c.param("x")) {
    const auto x = matrix_from_json(c.require("x"), f, "job.params.x");
    const auto y = matrix_from_json(c.require("y"), f, "job.params.y");
    j["D"] = formanek_D(x, y, c.opt.force_large).to_string();
    return j;
  }
  const Json* r = c.param("random");
  if (!r) throw Error(ErrorCode::SchemaError, "job.params: expected matrices, x/y or random");
  const int n = r->value("n", 2), trials = r->value("trials", 100), lo = r->value("lo", -2), hi = r->value("hi", 2);
  if (n < 1 || trials < 0 || lo > hi) throw Error(ErrorCode::ParamInvalid, "random: need n >= 1, trials >= 0, lo <= hi");
  std::mt19937_64 rng(c.opt.seed);
  std::uniform_int_distribution<int> dist(lo, hi);
  const auto nn = static_cast<std::size_t>(n);
  int nonzero = 0, agree = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Matrix<Scalar>> ms;
    std::vector<Vec<Scalar>> rows;
    for (std::size_t k = 0; k < nn * nn; ++k) {
      Matrix<Scalar> m(nn, nn, Scalar::zero(f));
      for (std::size_t a = 0; a < nn; ++a) {
        for (std::size_t b = 0; b < nn; ++b) m(a, b) = Scalar::from_int(f, dist(rng));
      }
      rows.push_back(m.data());
      ms.push_back(std::move(m));
    }
    const bool nz = !formanek_f(ms, c.opt.force_large).is_zero();
    const bool basis = rank(Matrix<Scalar>::from_rows(rows, nn * nn, Scalar::zero(f))) == nn * nn;
    nonzero += nz;
    agree += nz == basis;
  }
  j["seed"] = c.opt.seed;
  j["n"] = n;
  j["trials"] = trials;
  j["nonzero"] = nonzero;
  j["agrees_with_rank"] = agree;
  return j;
}

using Handler = std::function<Json(const Context&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"closure", cmd_closure},
      {"invariant-field", cmd_invariant_field},
      {"aut-lie", cmd_aut_lie},
      {"identities", cmd_identities},
      {"graded-identities", cmd_graded_identities},
      {"eval", cmd_eval},
      {"twisted-group", cmd_twisted_group},
      {"generic-form", cmd_generic_form},
      {"taft-build", cmd_taft_build},
      {"taft-extract", cmd_taft_extract},
      {"taft-product", cmd_taft_product},
      {"galois-twist", cmd_galois_twist},
      {"procesi", cmd_procesi},
      {"formanek", cmd_formanek},
  };
  return h;
}

void render_text(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  const bool nested = j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& x) { return x.is_object(); });
  if (nested) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    return;
  }
  out << prefix << ": ";
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.find('\n') != std::string::npos) {
      out << "\n";
      std::istringstream lines(s);
      for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
      return;
    }
    out << s;
  } else {
    out << j.dump();
  }
  out << "\n";
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownCommand: return kExitUsage;
    case ErrorCode::IoError: return kExitIo;
    default: return kExitDomain;
  }
}

std::string usage() {
  std::string u = "usage: invariant-forge <command> [--structure PATH] [--job PATH] [options]\ncommands:";
  for (const auto& name : cli_commands()) u += " " + name;
  return u + "\n";
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, h] : handlers()) v.push_back(name);
    return v;
  }();
  return names;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    (args.empty() ? err : out) << usage();
    return args.empty() ? kExitUsage : kExitOk;
  }
  const std::string command = args[0];
  auto h = std::find_if(handlers().begin(), handlers().end(), [&](const auto& p) { return p.first == command; });
  if (h == handlers().end()) {
    err << Error(ErrorCode::UnknownCommand, "\"" + command + "\"").what() << "\n" << usage();
    return kExitUsage;
  }

  Options opt;
  CLI::App app("invariant-forge " + command);
  app.add_option("--structure", opt.structure, "structure file");
  app.add_option("--job", opt.job, "job file");
  app.add_option("--bound", opt.bound, "closure bound P,Q");
  app.add_option("--degree", opt.degree, "identity degree");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", opt.seed, "seed for randomized modes");
  app.add_option("--budget", opt.budget, "work budget");
  app.add_flag("--force-large", opt.force_large, "allow evaluations above the size guard");
  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const Context ctx(opt);
    const Json report = h->second(ctx);
    if (opt.format == "text") {
      render_text(report, "", out);
    } else {
      out << report.dump(2) << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (opt.format == "json") {
      Json j;
      j["command"] = command;
      j["error"] = {{"code", std::string(error_name(e.code()))}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    }
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "SchemaError: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "InternalCheckFailed: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace invforge
