#include "invforge/morphcalc.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace invforge {

namespace {

Vec<Scalar> zero_vec(std::size_t n, const ScalarField& f) { return Vec<Scalar>(n, Scalar::zero(f)); }

std::string vec_string(const Vec<Scalar>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "]";
}

/// u (x) v in the product ambient space, following the tensor_product slot convention.
Vec<Scalar> vec_tensor(const Vec<Scalar>& u, TensorType a, const Vec<Scalar>& v, TensorType b, int dim,
                       const ScalarField& f) {
  const auto layout = index::product_layout(dim, a, b);
  Vec<Scalar> out = zero_vec(u.size() * v.size(), f);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (!v[j].is_zero()) out[layout.x_part[i] + layout.y_part[j]] = u[i] * v[j];
    }
  }
  return out;
}

Matrix<Scalar> kronecker(const Matrix<Scalar>& a, const Matrix<Scalar>& b, const ScalarField& f) {
  Matrix<Scalar> k(a.rows() * b.rows(), a.cols() * b.cols(), Scalar::zero(f));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) k(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
      }
    }
  }
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// PresentedSpace

void PresentedSpace::finish() {
  const std::size_t n = ambient_size();
  span_ = rel_;
  for (const auto& q : basis_) span_.insert(q);
  qred_ = EchelonBasis<Scalar>(n);
  std::vector<Vec<Scalar>> reduced;
  for (auto q : basis_) {
    rel_.reduce(q);
    if (!qred_.insert(q)) throw Error(ErrorCode::InternalCheckFailed, "presented basis is dependent modulo relations");
    reduced.push_back(std::move(q));
  }
  const std::size_t k = basis_.size();
  Matrix<Scalar> m(k, k, Scalar::zero(field_));
  for (std::size_t i = 0; i < k; ++i) {
    const auto c = *qred_.coordinates(reduced[i]);
    for (std::size_t j = 0; j < k; ++j) m(j, i) = c[j];
  }
  to_basis_ = inverse(m);
}

PresentedSpace PresentedSpace::full(TensorType ambient, int dim, const ScalarField& field) {
  PresentedSpace s(ambient, dim, field);
  const std::size_t n = s.ambient_size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec<Scalar> e = zero_vec(n, field);
    e[i] = Scalar::one(field);
    s.basis_.push_back(std::move(e));
  }
  s.full_ = true;
  s.finish();
  return s;
}

PresentedSpace PresentedSpace::from_spans(TensorType ambient, int dim, const ScalarField& field,
                                          const std::vector<Vec<Scalar>>& span_s, const std::vector<Vec<Scalar>>& r) {
  PresentedSpace s(ambient, dim, field);
  EchelonBasis<Scalar> sb(s.ambient_size());
  for (const auto& v : span_s) sb.insert(v);
  for (const auto& v : r) {
    if (!sb.contains(v)) throw Error(ErrorCode::TypeError, "relation " + vec_string(v) + " lies outside the subspace");
    s.rel_.insert(v);
  }
  EchelonBasis<Scalar> acc = s.rel_;
  for (const auto& v : span_s) {
    if (acc.insert(v)) s.basis_.push_back(v);
  }
  s.full_ = s.rel_.dim() == 0 && s.basis_.size() == s.ambient_size();
  if (s.full_) {
    // keep the standard basis for whole spaces
    return full(ambient, dim, field);
  }
  s.finish();
  return s;
}

PresentedSpace PresentedSpace::from_basis(TensorType ambient, int dim, const ScalarField& field,
                                          std::vector<Vec<Scalar>> basis, const std::vector<Vec<Scalar>>& r) {
  PresentedSpace s(ambient, dim, field);
  for (const auto& v : r) s.rel_.insert(v);
  s.basis_ = std::move(basis);
  s.finish();
  return s;
}

PresentedSpace PresentedSpace::tensor(const PresentedSpace& a, const PresentedSpace& b) {
  if (a.dim_ != b.dim_) throw Error(ErrorCode::DimMismatch, "tensor product of spaces over different W");
  if (a.field_ != b.field_) throw Error(ErrorCode::FieldMismatch, "tensor product of spaces over different fields");
  const TensorType t{a.ambient_.p + b.ambient_.p, a.ambient_.q + b.ambient_.q};
  std::vector<Vec<Scalar>> basis;
  for (const auto& x : a.basis_) {
    for (const auto& y : b.basis_) basis.push_back(vec_tensor(x, a.ambient_, y, b.ambient_, a.dim_, a.field_));
  }
  std::vector<Vec<Scalar>> rel;
  const auto sa = a.s_span(), sb = b.s_span();
  for (const auto& r : a.rel_.rows()) {
    for (const auto& y : sb) rel.push_back(vec_tensor(r, a.ambient_, y, b.ambient_, a.dim_, a.field_));
  }
  for (const auto& x : sa) {
    for (const auto& r : b.rel_.rows()) rel.push_back(vec_tensor(x, a.ambient_, r, b.ambient_, a.dim_, a.field_));
  }
  PresentedSpace s = from_basis(t, a.dim_, a.field_, std::move(basis), rel);
  s.full_ = a.full_ && b.full_ && a.ambient_.q == 0;
  s.factors_ = {std::make_shared<const PresentedSpace>(a), std::make_shared<const PresentedSpace>(b)};
  return s;
}

std::vector<Vec<Scalar>> PresentedSpace::s_span() const {
  std::vector<Vec<Scalar>> out = rel_.rows();
  out.insert(out.end(), basis_.begin(), basis_.end());
  return out;
}

bool PresentedSpace::contains(const Vec<Scalar>& v) const { return span_.contains(v); }

bool PresentedSpace::in_relations(const Vec<Scalar>& v) const { return rel_.contains(v); }

Vec<Scalar> PresentedSpace::coordinates(const Vec<Scalar>& v) const {
  if (v.size() != ambient_size()) throw Error(ErrorCode::DimMismatch, "vector has the wrong ambient length");
  if (full_) return v;
  Vec<Scalar> w = v;
  rel_.reduce(w);
  const auto c = qred_.coordinates(w);
  if (!c) throw Error(ErrorCode::NotWellDefined, "vector " + vec_string(v) + " lies outside the presented space");
  return to_basis_ * *c;
}

Vec<Scalar> PresentedSpace::lift(const Vec<Scalar>& coords) const {
  Vec<Scalar> out = zero_vec(ambient_size(), field_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (coords[i].is_zero()) continue;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (!basis_[i][j].is_zero()) out[j] += coords[i] * basis_[i][j];
    }
  }
  return out;
}

bool same_space(const PresentedSpace& a, const PresentedSpace& b) {
  return a.ambient_ == b.ambient_ && a.dim_ == b.dim_ && a.field_ == b.field_ && a.rel_ == b.rel_ && a.span_ == b.span_;
}

// ---------------------------------------------------------------------------
// Maps

PresentedMap PresentedMap::from_tensor(const Tensor& x) {
  auto dom = std::make_shared<const PresentedSpace>(PresentedSpace::full({x.type().q, 0}, x.dim(), x.field()));
  auto cod = std::make_shared<const PresentedSpace>(PresentedSpace::full({x.type().p, 0}, x.dim(), x.field()));
  return {dom, cod, as_map(x)};
}

Vec<Scalar> PresentedMap::apply(const Vec<Scalar>& v) const {
  const Vec<Scalar> image = matrix * dom->coordinates(v);
  return cod->is_full() ? image : cod->lift(image);
}

Matrix<Scalar> transition(const PresentedSpace& from, const PresentedSpace& to) {
  if (!same_space(from, to)) throw Error(ErrorCode::TypeError, "spaces differ");
  std::vector<Vec<Scalar>> cols;
  for (const auto& q : from.basis()) cols.push_back(to.coordinates(q));
  return Matrix<Scalar>::from_columns(cols, to.size(), Scalar::zero(to.field()));
}

PresentedSpace kernel_image(const PresentedMap& f, KernelOrImage which) {
  const auto& dom = *f.dom;
  const auto& cod = *f.cod;
  const Scalar zero = Scalar::zero(dom.field());
  if (which == KernelOrImage::Kernel) {
    std::vector<Vec<Scalar>> s = dom.relations().rows();
    for (const auto& v : nullspace(f.matrix, zero)) s.push_back(dom.lift(v));
    return PresentedSpace::from_spans(dom.ambient(), dom.dim(), dom.field(), s, dom.relations().rows());
  }
  std::vector<Vec<Scalar>> s = cod.relations().rows();
  for (std::size_t i = 0; i < f.matrix.cols(); ++i) s.push_back(cod.lift(f.matrix.column(i)));
  return PresentedSpace::from_spans(cod.ambient(), cod.dim(), cod.field(), s, cod.relations().rows());
}

PresentedMap induced_map(const PresentedMap& f, const SpacePtr& dom, const SpacePtr& cod) {
  if (dom->ambient() != f.dom->ambient() || cod->ambient() != f.cod->ambient()) {
    throw Error(ErrorCode::TypeError, "induced map: ambient types do not match the map");
  }
  for (const auto& v : dom->s_span()) {
    if (!f.dom->contains(v)) throw Error(ErrorCode::NotWellDefined, "map is undefined on " + vec_string(v));
  }
  for (const auto& r : dom->relations().rows()) {
    const auto w = f.apply(r);
    if (!cod->in_relations(w)) {
      throw Error(ErrorCode::NotWellDefined, "relation " + vec_string(r) + " maps to " + vec_string(w) + " outside the target relations");
    }
  }
  Matrix<Scalar> m(cod->size(), dom->size(), Scalar::zero(dom->field()));
  for (std::size_t i = 0; i < dom->size(); ++i) {
    const auto w = f.apply(dom->basis()[i]);
    if (!cod->contains(w)) {
      throw Error(ErrorCode::NotWellDefined, "basis vector " + vec_string(dom->basis()[i]) + " maps to " + vec_string(w) + " outside the target");
    }
    const auto c = cod->coordinates(w);
    for (std::size_t j = 0; j < c.size(); ++j) m(j, i) = c[j];
  }
  return {dom, cod, m};
}

PresentedMap gram(const PresentedMap& f, GramSide side) {
  if (f.cod->size() != 1) {
    throw Error(ErrorCode::TargetNotLine, "pairing target has dimension " + std::to_string(f.cod->size()));
  }
  const auto& factors = f.dom->factors();
  if (factors.size() != 2) throw Error(ErrorCode::TypeError, "Gram construction needs a pairing on a tensor product of two spaces");
  const std::size_t a = factors[0]->size(), b = factors[1]->size();
  if (a != b) throw Error(ErrorCode::TypeError, "Gram construction needs factors of equal dimension");
  Matrix<Scalar> beta(a, b, Scalar::zero(f.dom->field()));
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) beta(i, j) = f.matrix(0, i * b + j);
  }
  return {factors[0], factors[1], side == GramSide::Left ? beta : beta.transpose()};
}

// ---------------------------------------------------------------------------
// Expression construction and printing

namespace {

Expression node(Expression::Kind k, std::vector<Expression> args) {
  Expression e;
  e.kind = k;
  e.args = std::move(args);
  return e;
}

using K = Expression::Kind;

struct Spelling {
  K kind;
  const char* name;
};

constexpr Spelling kSpellings[] = {
    {K::Identity, "id"},         {K::Space, "space"},         {K::Compose, "compose"}, {K::Add, "add"},
    {K::ScalarMul, "scale"},     {K::TensorProd, "tensor"},   {K::Contract, "contract"}, {K::Permute, "permute"},
    {K::Kernel, "kernel"},       {K::Image, "image"},         {K::Quotient, "quotient"}, {K::InducedMap, "induced"},
    {K::GramLeft, "gramL"},      {K::GramRight, "gramR"},     {K::Invert, "invert"},   {K::Trace, "trace"},
};

const char* spelling(K k) {
  for (const auto& s : kSpellings) {
    if (s.kind == k) return s.name;
  }
  return "?";
}

std::string perm_string(const Perm& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + std::to_string(p[i]);
  return s + "]";
}

}  // namespace

Expression Expression::ref(std::string name) {
  Expression e;
  e.kind = K::TensorRef;
  e.name = std::move(name);
  return e;
}
Expression Expression::identity() { return node(K::Identity, {}); }
Expression Expression::space(int p, int q) {
  Expression e = node(K::Space, {});
  e.ints = {p, q};
  return e;
}
Expression Expression::compose(Expression f, Expression g) { return node(K::Compose, {std::move(f), std::move(g)}); }
Expression Expression::add(Expression f, Expression g) { return node(K::Add, {std::move(f), std::move(g)}); }
Expression Expression::scale(std::string literal, Expression f) {
  Expression e = node(K::ScalarMul, {std::move(f)});
  e.literal = std::move(literal);
  return e;
}
Expression Expression::tensor(Expression a, Expression b) { return node(K::TensorProd, {std::move(a), std::move(b)}); }
Expression Expression::contract(Expression x, int up, int down) {
  Expression e = node(K::Contract, {std::move(x)});
  e.ints = {up, down};
  return e;
}
Expression Expression::permute(Expression x, Perm sigma, Perm tau) {
  Expression e = node(K::Permute, {std::move(x)});
  e.sigma = std::move(sigma);
  e.tau = std::move(tau);
  return e;
}
Expression Expression::kernel(Expression f) { return node(K::Kernel, {std::move(f)}); }
Expression Expression::image(Expression f) { return node(K::Image, {std::move(f)}); }
Expression Expression::quotient(Expression space, Expression sub) { return node(K::Quotient, {std::move(space), std::move(sub)}); }
Expression Expression::induced(Expression f, Expression dom, Expression cod) {
  return node(K::InducedMap, {std::move(f), std::move(dom), std::move(cod)});
}
Expression Expression::gram_left(Expression f) { return node(K::GramLeft, {std::move(f)}); }
Expression Expression::gram_right(Expression f) { return node(K::GramRight, {std::move(f)}); }
Expression Expression::invert(Expression f) { return node(K::Invert, {std::move(f)}); }
Expression Expression::trace(Expression f) { return node(K::Trace, {std::move(f)}); }

std::string Expression::to_string() const {
  if (kind == K::TensorRef) return name;
  std::string s = spelling(kind);
  std::vector<std::string> parts;
  if (kind == K::Space) {
    parts = {std::to_string(ints[0]), std::to_string(ints[1])};
  } else if (kind == K::ScalarMul) {
    parts.push_back("\"" + literal + "\"");
  }
  for (const auto& a : args) parts.push_back(a.to_string());
  if (kind == K::Contract) {
    parts.push_back(std::to_string(ints[0]));
    parts.push_back(std::to_string(ints[1]));
  } else if (kind == K::Permute) {
    parts.push_back(perm_string(sigma));
    parts.push_back(perm_string(tau));
  }
  if (kind == K::Identity && parts.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
  return s + ")";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  Expression parse() {
    Expression e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(s_[start]))) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  int integer() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '-')) fail("expected an integer");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  std::string string_literal() {
    skip();
    if (!accept('"')) fail("expected a quoted scalar");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') ++pos_;
    if (pos_ == s_.size()) fail("unterminated string");
    std::string out(s_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  Perm perm() {
    expect('[');
    Perm p;
    if (!accept(']')) {
      do {
        p.push_back(integer());
      } while (accept(','));
      expect(']');
    }
    return p;
  }

  Expression expr() {
    const std::string name = ident();
    K kind{};
    bool known = false;
    for (const auto& sp : kSpellings) {
      if (name == sp.name) {
        kind = sp.kind;
        known = true;
      }
    }
    if (!known) return Expression::ref(name);
    if (kind == K::Identity) {
      if (!accept('(')) return Expression::identity();
      if (accept(')')) return Expression::identity();
      Expression e = node(K::Identity, {expr()});
      expect(')');
      return e;
    }
    expect('(');
    Expression e;
    switch (kind) {
      case K::Space: {
        const int p = integer();
        expect(',');
        e = Expression::space(p, integer());
        break;
      }
      case K::ScalarMul: {
        std::string lit = string_literal();
        expect(',');
        e = Expression::scale(std::move(lit), expr());
        break;
      }
      case K::Contract: {
        Expression x = expr();
        expect(',');
        const int up = integer();
        expect(',');
        e = Expression::contract(std::move(x), up, integer());
        break;
      }
      case K::Permute: {
        Expression x = expr();
        expect(',');
        Perm sigma = perm();
        expect(',');
        e = Expression::permute(std::move(x), std::move(sigma), perm());
        break;
      }
      case K::Compose:
      case K::Add:
      case K::TensorProd:
      case K::Quotient: {
        Expression a = expr();
        expect(',');
        e = node(kind, {std::move(a), expr()});
        break;
      }
      case K::InducedMap: {
        Expression f = expr();
        expect(',');
        Expression d = expr();
        expect(',');
        e = Expression::induced(std::move(f), std::move(d), expr());
        break;
      }
      default:
        e = node(kind, {expr()});
    }
    expect(')');
    return e;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) { return ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Evaluator {
 public:
  Evaluator(const Structure& s, const Bindings& b) : s_(s), b_(b) {}

  Value eval(const Expression& e) {
    switch (e.kind) {
      case K::TensorRef:
        return resolve(e.name);
      case K::Identity: {
        SpacePtr sp = e.args.empty() ? full({1, 0}) : space(e.args[0]);
        const Scalar z = Scalar::zero(s_.field()), o = Scalar::one(s_.field());
        return PresentedMap{sp, sp, Matrix<Scalar>::identity(sp->size(), z, o)};
      }
      case K::Space:
        if (e.ints[0] < 0 || e.ints[1] < 0) throw Error(ErrorCode::TypeError, "negative space type");
        return full({e.ints[0], e.ints[1]});
      case K::Compose: {
        const auto f = map(e.args[0]), g = map(e.args[1]);
        require_same(*g.cod, *f.dom, "compose");
        return PresentedMap{g.dom, f.cod, f.matrix * (transition(*g.cod, *f.dom) * g.matrix)};
      }
      case K::Add: {
        const auto f = map(e.args[0]), g = map(e.args[1]);
        require_same(*f.dom, *g.dom, "add");
        require_same(*f.cod, *g.cod, "add");
        const auto gm = transition(*g.cod, *f.cod) * (g.matrix * transition(*f.dom, *g.dom));
        return PresentedMap{f.dom, f.cod, f.matrix + gm};
      }
      case K::ScalarMul: {
        auto f = map(e.args[0]);
        f.matrix = scale(parse_scalar(e.literal, s_.field()), f.matrix);
        return f;
      }
      case K::TensorProd: {
        const Value a = eval(e.args[0]), b = eval(e.args[1]);
        if (std::holds_alternative<SpacePtr>(a) && std::holds_alternative<SpacePtr>(b)) {
          return std::make_shared<const PresentedSpace>(
              PresentedSpace::tensor(*std::get<SpacePtr>(a), *std::get<SpacePtr>(b)));
        }
        if (std::holds_alternative<PresentedMap>(a) && std::holds_alternative<PresentedMap>(b)) {
          const auto& f = std::get<PresentedMap>(a);
          const auto& g = std::get<PresentedMap>(b);
          auto dom = std::make_shared<const PresentedSpace>(PresentedSpace::tensor(*f.dom, *g.dom));
          auto cod = std::make_shared<const PresentedSpace>(PresentedSpace::tensor(*f.cod, *g.cod));
          return PresentedMap{dom, cod, kronecker(f.matrix, g.matrix, s_.field())};
        }
        throw Error(ErrorCode::TypeError, "tensor needs two maps or two spaces");
      }
      case K::Contract: {
        const Tensor x = ambient_tensor(e.args[0], "contract");
        return PresentedMap::from_tensor(invforge::contract(x, e.ints[0], e.ints[1]));
      }
      case K::Permute: {
        const Tensor x = ambient_tensor(e.args[0], "permute");
        return PresentedMap::from_tensor(invforge::permute(x, e.sigma, e.tau));
      }
      case K::Kernel:
        return std::make_shared<const PresentedSpace>(kernel_image(map(e.args[0]), KernelOrImage::Kernel));
      case K::Image:
        return std::make_shared<const PresentedSpace>(kernel_image(map(e.args[0]), KernelOrImage::Image));
      case K::Quotient: {
        const SpacePtr a = space(e.args[0]), b = space(e.args[1]);
        if (a->ambient() != b->ambient()) throw Error(ErrorCode::TypeError, "quotient of spaces in different ambients");
        for (const auto& v : b->s_span()) {
          if (!a->contains(v)) throw Error(ErrorCode::TypeError, "quotient: subspace is not contained in the space");
        }
        std::vector<Vec<Scalar>> r = a->relations().rows();
        for (const auto& v : b->s_span()) r.push_back(v);
        return std::make_shared<const PresentedSpace>(
            PresentedSpace::from_spans(a->ambient(), a->dim(), a->field(), a->s_span(), r));
      }
      case K::InducedMap:
        return induced_map(map(e.args[0]), space(e.args[1]), space(e.args[2]));
      case K::GramLeft:
        return gram(map(e.args[0]), GramSide::Left);
      case K::GramRight:
        return gram(map(e.args[0]), GramSide::Right);
      case K::Invert: {
        const auto f = map(e.args[0]);
        if (f.matrix.rows() != f.matrix.cols()) throw Error(ErrorCode::TypeError, "invert needs a square map");
        return PresentedMap{f.cod, f.dom, inverse(f.matrix)};
      }
      case K::Trace: {
        const auto f = map(e.args[0]);
        require_same(*f.dom, *f.cod, "trace");
        if (f.dom->size() == 0) return Scalar::zero(s_.field());
        return invforge::trace(transition(*f.cod, *f.dom) * f.matrix);
      }
    }
    throw Error(ErrorCode::TypeError, "unknown expression");
  }

 private:
  SpacePtr full(TensorType t) {
    return std::make_shared<const PresentedSpace>(PresentedSpace::full(t, s_.dim(), s_.field()));
  }

  Value resolve(const std::string& name) {
    if (auto it = memo_.find(name); it != memo_.end()) return it->second;
    if (auto it = b_.find(name); it != b_.end()) {
      if (!active_.insert(name).second) throw Error(ErrorCode::TypeError, "binding '" + name + "' refers to itself");
      Value v = eval(it->second);
      active_.erase(name);
      memo_.emplace(name, v);
      return v;
    }
    if (s_.has(name)) return PresentedMap::from_tensor(s_.get(name));
    throw Error(ErrorCode::TypeError, "unknown name '" + name + "'");
  }

  PresentedMap map(const Expression& e) {
    Value v = eval(e);
    if (auto* m = std::get_if<PresentedMap>(&v)) return *m;
    throw Error(ErrorCode::TypeError, "'" + e.to_string() + "' is not a map");
  }

  SpacePtr space(const Expression& e) {
    Value v = eval(e);
    if (auto* sp = std::get_if<SpacePtr>(&v)) return *sp;
    throw Error(ErrorCode::TypeError, "'" + e.to_string() + "' is not a space");
  }

  Tensor ambient_tensor(const Expression& e, const char* op) {
    const auto f = map(e);
    const TensorType d = f.dom->ambient(), c = f.cod->ambient();
    if (!f.dom->is_full() || !f.cod->is_full() || d.q != 0 || c.q != 0) {
      throw Error(ErrorCode::TypeError, std::string(op) + " needs a map between whole tensor powers of W");
    }
    return from_map(f.matrix, d.p, c.p, s_.dim(), s_.field());
  }

  static void require_same(const PresentedSpace& a, const PresentedSpace& b, const char* op) {
    if (!same_space(a, b)) throw Error(ErrorCode::TypeError, std::string(op) + ": spaces do not agree");
  }

  const Structure& s_;
  const Bindings& b_;
  std::map<std::string, Value> memo_;
  std::set<std::string> active_;
};

}  // namespace

Value eval_expression(const Expression& e, const Structure& s, const Bindings& bindings) {
  return Evaluator(s, bindings).eval(e);
}

}  // namespace invforge
