#include "invforge/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

namespace invforge {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroInversion: return "ZeroInversion";
    case ErrorCode::NotCyclotomic: return "NotCyclotomic";
    case ErrorCode::BadGaloisIndex: return "BadGaloisIndex";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::SlotOutOfRange: return "SlotOutOfRange";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::TypeArithmeticMismatch: return "TypeArithmeticMismatch";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::NotWellDefined: return "NotWellDefined";
    case ErrorCode::TargetNotLine: return "TargetNotLine";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::WrongTensorType: return "WrongTensorType";
    case ErrorCode::NotAGrading: return "NotAGrading";
    case ErrorCode::CocycleInvalid: return "CocycleInvalid";
    case ErrorCode::WordNotRelator: return "WordNotRelator";
    case ErrorCode::NotAbelian: return "NotAbelian";
    case ErrorCode::MissingDecomposition: return "MissingDecomposition";
    case ErrorCode::ParamInvalid: return "ParamInvalid";
    case ErrorCode::InternalCheckFailed: return "InternalCheckFailed";
    case ErrorCode::NotTaftShaped: return "NotTaftShaped";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::FieldError: return "FieldError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// integers

std::int64_t gcd_int(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm_int(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t mod_floor(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

int euler_phi(int n) {
  int result = n;
  int m = n;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

// ---------------------------------------------------------------------------
// QPoly

QPoly::QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly QPoly::constant(const Rational& c) { return QPoly(std::vector<Rational>{c}); }

QPoly QPoly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
  v[static_cast<std::size_t>(degree)] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  for (auto& c : c_) c.canonicalize();
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rational QPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(i)];
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
  return QPoly(std::move(v));
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return QPoly(std::move(v));
}

QPoly operator*(const Rational& c, const QPoly& a) {
  QPoly r = a;
  for (auto& x : r.c_) x *= c;
  r.trim();
  return r;
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorCode::ZeroInversion, "polynomial division by zero");
  std::vector<Rational> rem = c_;
  const int dd = divisor.degree();
  if (degree() < dd) return {QPoly(), *this};
  std::vector<Rational> quot(static_cast<std::size_t>(degree() - dd + 1));
  const Rational& lead = divisor.leading();
  for (int k = degree(); k >= dd; --k) {
    const Rational c = rem[static_cast<std::size_t>(k)] / lead;
    if (sgn(c) == 0) continue;
    quot[static_cast<std::size_t>(k - dd)] = c;
    for (int i = 0; i <= dd; ++i) {
      rem[static_cast<std::size_t>(k - dd + i)] -= c * divisor.c_[static_cast<std::size_t>(i)];
    }
  }
  return {QPoly(std::move(quot)), QPoly(std::move(rem))};
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  return Rational(1 / leading()) * *this;
}

Rational QPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

std::string rational_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Descending-degree rendering shared by polynomials and cyclotomic residues.
std::string render_terms(const std::vector<Rational>& c, std::string_view var) {
  std::string out;
  bool first = true;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    const Rational& coef = c[static_cast<std::size_t>(k)];
    if (sgn(coef) == 0) continue;
    const bool neg = sgn(coef) < 0;
    const Rational mag = abs(coef);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    if (k >= 1) {
      mono = std::string(var);
      if (k > 1) mono += "^" + std::to_string(k);
    }
    if (k == 0) {
      out += rational_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += rational_string(mag) + "*" + mono;
    }
  }
  return first ? "0" : out;
}

}  // namespace

std::string QPoly::to_string(std::string_view var) const { return render_terms(c_, var); }

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  while (!y.is_zero()) {
    QPoly r = x.divmod(y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

XgcdResult xgcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  QPoly s0 = QPoly::constant(1), s1;
  QPoly t0, t1 = QPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    QPoly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    QPoly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Rational inv = 1 / r0.leading();
  return {inv * r0, inv * s0, inv * t0};
}

QPoly cyclotomic_polynomial(int n) {
  if (n < 1) throw Error(ErrorCode::ParamInvalid, "cyclotomic order must be positive");
  // x^n - 1 = prod_{d | n} Phi_d
  QPoly result = QPoly::monomial(1, n) - QPoly::constant(1);
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) result = result.divmod(cyclotomic_polynomial(d)).first;
  }
  return result;
}

// ---------------------------------------------------------------------------
// fields

ScalarField ScalarField::cyclotomic(int n) {
  if (n < 1) throw Error(ErrorCode::ParamInvalid, "cyclotomic order must be >= 1");
  return {Kind::Cyclotomic, n};
}

int ScalarField::q_degree() const {
  switch (kind) {
    case Kind::Rational: return 1;
    case Kind::Cyclotomic: return euler_phi(order);
    case Kind::RationalFunction: break;
  }
  throw Error(ErrorCode::UnsupportedField, "Q(t) has infinite degree over Q");
}

std::string ScalarField::to_string() const {
  switch (kind) {
    case Kind::Rational: return "rational";
    case Kind::Cyclotomic: return "cyclotomic(" + std::to_string(order) + ")";
    case Kind::RationalFunction: return "rational_function(t)";
  }
  return "?";
}

const CycloContext& cyclo_context(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<CycloContext>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto ctx = std::make_unique<CycloContext>();
    ctx->order = n;
    ctx->modulus = cyclotomic_polynomial(n);
    ctx->phi = ctx->modulus.degree();
    const auto phi = static_cast<std::size_t>(ctx->phi);
    std::vector<Rational> cur(phi);
    cur[0] = 1;
    ctx->power_table.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      ctx->power_table.push_back(cur);
      // multiply by x and reduce with the monic modulus
      std::vector<Rational> next(phi);
      const Rational top = cur[phi - 1];
      for (std::size_t i = phi - 1; i > 0; --i) next[i] = cur[i - 1];
      next[0] = 0;
      for (std::size_t i = 0; i < phi; ++i) next[i] -= top * ctx->modulus.coeff(static_cast<int>(i));
      cur = std::move(next);
    }
    slot = std::move(ctx);
  }
  return *slot;
}

std::vector<Rational> cyclo_reduce(const CycloContext& ctx, const std::vector<Rational>& coeffs) {
  const auto phi = static_cast<std::size_t>(ctx.phi);
  std::vector<Rational> out(phi);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (sgn(coeffs[k]) == 0) continue;
    if (k < phi) {
      out[k] += coeffs[k];
      continue;
    }
    const auto& row = ctx.power_table[k % static_cast<std::size_t>(ctx.order)];
    for (std::size_t j = 0; j < phi; ++j) {
      if (sgn(row[j]) != 0) out[j] += coeffs[k] * row[j];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CycloElem

CycloElem::CycloElem(const CycloContext& ctx, std::vector<Rational> coeffs) : ctx_(&ctx) {
  if (coeffs.size() == static_cast<std::size_t>(ctx.phi)) {
    c_ = std::move(coeffs);
  } else {
    c_ = cyclo_reduce(ctx, coeffs);
  }
  for (auto& c : c_) c.canonicalize();
}

CycloElem CycloElem::zero(int n) {
  const auto& ctx = cyclo_context(n);
  return CycloElem(ctx, std::vector<Rational>(static_cast<std::size_t>(ctx.phi)));
}

CycloElem CycloElem::from_rational(int n, const Rational& c) {
  CycloElem e = zero(n);
  e.c_[0] = c;
  return e;
}

CycloElem CycloElem::zeta_power(int n, std::int64_t k) {
  const auto& ctx = cyclo_context(n);
  return CycloElem(ctx, ctx.power_table[static_cast<std::size_t>(mod_floor(k, n))]);
}

bool CycloElem::is_zero() const {
  for (const auto& c : c_) {
    if (sgn(c) != 0) return false;
  }
  return true;
}

CycloElem CycloElem::operator-() const {
  CycloElem r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

CycloElem operator+(const CycloElem& a, const CycloElem& b) {
  CycloElem r = a;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
  return r;
}

CycloElem operator-(const CycloElem& a, const CycloElem& b) {
  CycloElem r = a;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
  return r;
}

CycloElem operator*(const CycloElem& a, const CycloElem& b) {
  const std::size_t phi = a.c_.size();
  std::vector<Rational> prod(2 * phi - 1);
  for (std::size_t i = 0; i < phi; ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < phi; ++j) {
      if (sgn(b.c_[j]) != 0) prod[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return CycloElem(*a.ctx_, cyclo_reduce(*a.ctx_, prod));
}

CycloElem CycloElem::inverse() const {
  if (is_zero()) throw Error(ErrorCode::ZeroInversion, "inverse of zero in Q(zeta_" + std::to_string(order()) + ")");
  auto r = xgcd(QPoly(c_), ctx_->modulus);
  // Phi_n is irreducible, so the gcd is 1 and s is the inverse.
  auto s = r.s.divmod(ctx_->modulus).second;
  std::vector<Rational> v(static_cast<std::size_t>(ctx_->phi));
  for (int i = 0; i <= s.degree(); ++i) v[static_cast<std::size_t>(i)] = s.coeff(i);
  return CycloElem(*ctx_, std::move(v));
}

CycloElem CycloElem::galois(std::int64_t k) const {
  const std::int64_t n = ctx_->order;
  std::vector<Rational> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    const auto& row = ctx_->power_table[static_cast<std::size_t>(mod_floor(static_cast<std::int64_t>(i) * k, n))];
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (sgn(row[j]) != 0) out[j] += c_[i] * row[j];
    }
  }
  return CycloElem(*ctx_, std::move(out));
}

// ---------------------------------------------------------------------------
// RatFunc

RatFunc::RatFunc(QPoly num, QPoly den) {
  if (den.is_zero()) throw Error(ErrorCode::ZeroInversion, "rational function with zero denominator");
  if (num.is_zero()) {
    den_ = QPoly::constant(1);
    return;
  }
  QPoly g = gcd(num, den);
  num = num.divmod(g).first;
  den = den.divmod(g).first;
  const Rational lead = den.leading();
  num_ = Rational(1 / lead) * num;
  den_ = Rational(1 / lead) * den;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw Error(ErrorCode::ZeroInversion, "inverse of zero in Q(t)");
  return RatFunc(den_, num_);
}

Rational RatFunc::eval(const Rational& x) const {
  const Rational d = den_.eval(x);
  if (sgn(d) == 0) throw Error(ErrorCode::ZeroInversion, "specialization hits a pole");
  return num_.eval(x) / d;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::zero(const ScalarField& f) { return from_rational(f, 0); }

Scalar Scalar::one(const ScalarField& f) { return from_rational(f, 1); }

Scalar Scalar::from_rational(const ScalarField& f, const Rational& q) {
  switch (f.kind) {
    case ScalarField::Kind::Rational: return Scalar(q);
    case ScalarField::Kind::Cyclotomic: return Scalar(CycloElem::from_rational(f.order, q));
    case ScalarField::Kind::RationalFunction: return Scalar(RatFunc::from_rational(q));
  }
  return Scalar(q);
}

Scalar Scalar::zeta(const ScalarField& f, std::int64_t k) {
  if (!f.is_cyclotomic()) throw Error(ErrorCode::NotCyclotomic, "zeta requested in " + f.to_string());
  return Scalar(CycloElem::zeta_power(f.order, k));
}

Scalar Scalar::variable(const ScalarField& f) {
  if (!f.is_rational_function()) throw Error(ErrorCode::FieldError, "variable t requested in " + f.to_string());
  return Scalar(RatFunc::variable());
}

bool Scalar::is_zero() const {
  switch (v_.index()) {
    case 0: return sgn(std::get<0>(v_)) == 0;
    case 1: return std::get<1>(v_).is_zero();
    default: return std::get<2>(v_).is_zero();
  }
}

bool Scalar::is_one() const { return is_rational_value() && rational_value() == 1; }

bool Scalar::is_rational_value() const {
  switch (v_.index()) {
    case 0: return true;
    case 1: {
      const auto& c = std::get<1>(v_).coeffs();
      for (std::size_t i = 1; i < c.size(); ++i) {
        if (sgn(c[i]) != 0) return false;
      }
      return true;
    }
    default: {
      const auto& f = std::get<2>(v_);
      return f.num().degree() <= 0 && f.den().degree() == 0;
    }
  }
}

Rational Scalar::rational_value() const {
  switch (v_.index()) {
    case 0: return std::get<0>(v_);
    case 1: return std::get<1>(v_).coeffs()[0];
    default: return std::get<2>(v_).num().coeff(0);
  }
}

const CycloElem& Scalar::cyclo() const {
  if (v_.index() != 1) throw Error(ErrorCode::NotCyclotomic, "scalar is not cyclotomic");
  return std::get<1>(v_);
}

const RatFunc& Scalar::ratfunc() const {
  if (v_.index() != 2) throw Error(ErrorCode::FieldError, "scalar is not a rational function");
  return std::get<2>(v_);
}

void Scalar::require_same_field(const Scalar& o) const {
  if (field_ != o.field_) {
    throw Error(ErrorCode::FieldMismatch, field_.to_string() + " vs " + o.field_.to_string());
  }
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  std::visit([](auto& x) { x = -x; }, r.v_);
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same_field(o);
  switch (v_.index()) {
    case 0: std::get<0>(v_) += std::get<0>(o.v_); break;
    case 1: std::get<1>(v_) = std::get<1>(v_) + std::get<1>(o.v_); break;
    default: std::get<2>(v_) = std::get<2>(v_) + std::get<2>(o.v_); break;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same_field(o);
  switch (v_.index()) {
    case 0: std::get<0>(v_) -= std::get<0>(o.v_); break;
    case 1: std::get<1>(v_) = std::get<1>(v_) - std::get<1>(o.v_); break;
    default: std::get<2>(v_) = std::get<2>(v_) - std::get<2>(o.v_); break;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  require_same_field(o);
  switch (v_.index()) {
    case 0: std::get<0>(v_) *= std::get<0>(o.v_); break;
    case 1: std::get<1>(v_) = std::get<1>(v_) * std::get<1>(o.v_); break;
    default: std::get<2>(v_) = std::get<2>(v_) * std::get<2>(o.v_); break;
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  require_same_field(o);
  return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.field_ != b.field_) return false;
  switch (a.v_.index()) {
    case 0: return std::get<0>(a.v_) == std::get<0>(b.v_);
    case 1: return std::get<1>(a.v_) == std::get<1>(b.v_);
    default: return std::get<2>(a.v_) == std::get<2>(b.v_);
  }
}

Scalar Scalar::inverse() const {
  switch (v_.index()) {
    case 0: {
      const auto& q = std::get<0>(v_);
      if (sgn(q) == 0) throw Error(ErrorCode::ZeroInversion, "inverse of zero in Q");
      return Scalar(Rational(1 / q));
    }
    case 1: return Scalar(std::get<1>(v_).inverse());
    default: return Scalar(std::get<2>(v_).inverse());
  }
}

Scalar Scalar::pow(std::int64_t e) const {
  Scalar base = e < 0 ? inverse() : *this;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Scalar acc = one(field_);
  while (k > 0) {
    if (k & 1U) acc *= base;
    k >>= 1U;
    if (k > 0) base *= base;
  }
  return acc;
}

Scalar Scalar::galois(std::int64_t k) const {
  if (v_.index() == 1) return Scalar(std::get<1>(v_).galois(k));
  if (v_.index() == 2) throw Error(ErrorCode::NotCyclotomic, "Galois action on Q(t)");
  return *this;
}

std::vector<Rational> Scalar::q_coords() const {
  switch (v_.index()) {
    case 0: return {std::get<0>(v_)};
    case 1: return std::get<1>(v_).coeffs();
    default: throw Error(ErrorCode::UnsupportedField, "Q(t) has no finite Q-coordinates");
  }
}

Scalar Scalar::from_q_coords(const ScalarField& f, const Rational* coords) {
  switch (f.kind) {
    case ScalarField::Kind::Rational: return Scalar(coords[0]);
    case ScalarField::Kind::Cyclotomic: {
      const auto& ctx = cyclo_context(f.order);
      return Scalar(CycloElem(ctx, std::vector<Rational>(coords, coords + ctx.phi)));
    }
    case ScalarField::Kind::RationalFunction: break;
  }
  throw Error(ErrorCode::UnsupportedField, "Q(t) has no finite Q-coordinates");
}

Scalar Scalar::specialize(const Rational& x) const {
  if (v_.index() == 2) return Scalar(std::get<2>(v_).eval(x));
  if (v_.index() == 0) return *this;
  throw Error(ErrorCode::FieldError, "specialization applies to Q(t) scalars");
}

std::string Scalar::to_string() const {
  switch (v_.index()) {
    case 0: return rational_string(std::get<0>(v_));
    case 1: return render_terms(std::get<1>(v_).coeffs(), "z");
    default: {
      const auto& f = std::get<2>(v_);
      const std::string num = f.num().to_string("t");
      if (f.den().degree() == 0) return num;
      const bool num_compound = f.num().degree() >= 1 &&
                                std::count_if(f.num().coeffs().begin(), f.num().coeffs().end(),
                                              [](const Rational& c) { return sgn(c) != 0; }) > 1;
      const std::string n = num_compound ? "(" + num + ")" : num;
      return n + "/(" + f.den().to_string("t") + ")";
    }
  }
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

Scalar galois_apply(std::int64_t k, const Scalar& s) {
  const auto& f = s.field();
  if (f.is_rational_function()) throw Error(ErrorCode::NotCyclotomic, "Galois action needs a cyclotomic scalar");
  const int n = f.order;
  if (gcd_int(mod_floor(k, n), n) != 1) {
    throw Error(ErrorCode::BadGaloisIndex, "gcd(" + std::to_string(k) + ", " + std::to_string(n) + ") != 1");
  }
  return s.galois(k);
}

Scalar invert_scalar(const Scalar& s) { return s.inverse(); }

// ---------------------------------------------------------------------------
// scalar literal parser

namespace {

class ScalarParser {
 public:
  ScalarParser(std::string_view text, const ScalarField& field) : s_(text), f_(field) {}

  Scalar parse() {
    Scalar v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::FieldError,
                "bad scalar literal \"" + std::string(s_) + "\" at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool starts_primary() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 'z' || c == 't';
  }

  Scalar expr() {
    Scalar acc = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Scalar term() {
    Scalar acc = unary();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        acc *= unary();
      } else if (peek('/')) {
        ++pos_;
        Scalar d = unary();
        if (d.is_zero()) fail("division by zero");
        acc /= d;
      } else if (starts_primary()) {
        acc *= unary();
      } else {
        return acc;
      }
    }
  }

  Scalar unary() {
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Scalar power() {
    Scalar base = primary();
    if (peek('^')) {
      ++pos_;
      Scalar e = unary();
      if (!e.is_rational_value() || e.rational_value().get_den() != 1) fail("exponent must be an integer");
      const Integer ez = e.rational_value().get_num();
      if (!ez.fits_slong_p()) fail("exponent too large");
      const long k = ez.get_si();
      if (k < 0 && base.is_zero()) fail("negative power of zero");
      return base.pow(k);
    }
    return base;
  }

  Scalar primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Scalar v = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Scalar::from_rational(f_, Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (c == 'z') {
      ++pos_;
      if (!f_.is_cyclotomic()) fail("'z' requires a cyclotomic field, field is " + f_.to_string());
      int m = f_.order;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        m = std::stoi(std::string(s_.substr(start, pos_ - start)));
        if (m < 1 || f_.order % m != 0) {
          fail("z" + std::to_string(m) + " is not in Q(zeta_" + std::to_string(f_.order) +
               "); declare the field with order lcm(" + std::to_string(m) + ", " + std::to_string(f_.order) + ")");
        }
      }
      return Scalar::zeta(f_, f_.order / m);
    }
    if (c == 't') {
      ++pos_;
      if (!f_.is_rational_function()) fail("'t' requires the rational_function field, field is " + f_.to_string());
      return Scalar::variable(f_);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  ScalarField f_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(std::string_view text, const ScalarField& field) {
  try {
    return ScalarParser(text, field).parse();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FieldError) throw;
    throw Error(ErrorCode::FieldError, "bad scalar literal \"" + std::string(text) + "\": " + e.what());
  }
}

}  // namespace invforge
