#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "invforge/error.hpp"

namespace invforge {

using Rational = mpq_class;
using Integer = mpz_class;

// ---------------------------------------------------------------------------
// Univariate polynomials over Q
// ---------------------------------------------------------------------------

/// Dense polynomial over Q, coefficient i multiplies x^i. Always trimmed, so
/// the zero polynomial has no coefficients and degree -1.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rational> coeffs);
  static QPoly constant(const Rational& c);
  static QPoly monomial(const Rational& c, int degree);
  static QPoly x() { return monomial(1, 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  const Rational& leading() const { return c_.back(); }

  QPoly operator-() const;
  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const Rational& c, const QPoly& a);
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

  /// Euclidean division; throws ZeroInversion for a zero divisor.
  std::pair<QPoly, QPoly> divmod(const QPoly& divisor) const;
  QPoly monic() const;
  Rational eval(const Rational& x) const;

  std::string to_string(std::string_view var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
QPoly gcd(const QPoly& a, const QPoly& b);

/// Returns (g, s, t) with s*a + t*b = g, g the monic gcd.
struct XgcdResult {
  QPoly g, s, t;
};
XgcdResult xgcd(const QPoly& a, const QPoly& b);

/// Phi_n(x), by dividing x^n - 1 by Phi_d for every proper divisor d.
QPoly cyclotomic_polynomial(int n);

int euler_phi(int n);
std::int64_t gcd_int(std::int64_t a, std::int64_t b);
std::int64_t lcm_int(std::int64_t a, std::int64_t b);
/// Representative of a mod n in [0, n).
std::int64_t mod_floor(std::int64_t a, std::int64_t n);

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

struct ScalarField {
  enum class Kind { Rational, Cyclotomic, RationalFunction };

  Kind kind = Kind::Rational;
  int order = 1;  // cyclotomic order n; 1 for the other kinds

  static ScalarField rational() { return {Kind::Rational, 1}; }
  static ScalarField cyclotomic(int n);
  static ScalarField rational_function() { return {Kind::RationalFunction, 1}; }

  bool is_cyclotomic() const { return kind == Kind::Cyclotomic; }
  bool is_rational_function() const { return kind == Kind::RationalFunction; }
  /// Q-dimension of the field: phi(n) for cyclotomic, 1 for Q. Undefined
  /// (throws UnsupportedField) for Q(t).
  int q_degree() const;

  std::string to_string() const;

  friend bool operator==(const ScalarField& a, const ScalarField& b) {
    return a.kind == b.kind && a.order == b.order;
  }
  friend bool operator!=(const ScalarField& a, const ScalarField& b) { return !(a == b); }
};

/// Precomputed data for Q(zeta_n): Phi_n and the reductions of x^k mod Phi_n
/// for 0 <= k < n. Instances live for the lifetime of the process.
struct CycloContext {
  int order = 1;
  int phi = 1;
  QPoly modulus;
  std::vector<std::vector<Rational>> power_table;  // power_table[k] = x^k mod Phi_n
};

const CycloContext& cyclo_context(int n);

/// Element of Q[x]/(Phi_n), stored as its unique reduced residue.
class CycloElem {
 public:
  CycloElem(const CycloContext& ctx, std::vector<Rational> coeffs);
  static CycloElem zero(int n);
  static CycloElem from_rational(int n, const Rational& c);
  /// zeta_n^k for any integer k.
  static CycloElem zeta_power(int n, std::int64_t k);

  int order() const { return ctx_->order; }
  const CycloContext& context() const { return *ctx_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;

  CycloElem operator-() const;
  friend CycloElem operator+(const CycloElem& a, const CycloElem& b);
  friend CycloElem operator-(const CycloElem& a, const CycloElem& b);
  friend CycloElem operator*(const CycloElem& a, const CycloElem& b);
  friend bool operator==(const CycloElem& a, const CycloElem& b) { return a.c_ == b.c_; }

  CycloElem inverse() const;
  /// sigma_k : zeta -> zeta^k. Caller guarantees gcd(k, n) = 1.
  CycloElem galois(std::int64_t k) const;

 private:
  const CycloContext* ctx_;
  std::vector<Rational> c_;
};

/// Reduce an arbitrary-length coefficient list (of x^0, x^1, ...) into
/// Q(zeta_n) using the power table.
std::vector<Rational> cyclo_reduce(const CycloContext& ctx, const std::vector<Rational>& coeffs);

/// num/den in lowest terms with monic denominator.
class RatFunc {
 public:
  RatFunc() : num_(), den_(QPoly::constant(1)) {}
  RatFunc(QPoly num, QPoly den);
  static RatFunc from_rational(const Rational& c) { return RatFunc(QPoly::constant(c), QPoly::constant(1)); }
  static RatFunc variable() { return RatFunc(QPoly::x(), QPoly::constant(1)); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFunc operator-() const { return RatFunc(-num_, den_); }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  RatFunc inverse() const;
  /// Substitute t = x. Throws ZeroInversion when x is a pole.
  Rational eval(const Rational& x) const;

 private:
  QPoly num_, den_;
};

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

/// An element of one of the supported fields. Binary operations require both
/// operands to live in the same field and throw FieldMismatch otherwise.
class Scalar {
 public:
  Scalar() : field_(ScalarField::rational()), v_(Rational(0)) {}
  explicit Scalar(const Rational& q) : field_(ScalarField::rational()), v_(q) {}
  explicit Scalar(CycloElem c) : field_(ScalarField::cyclotomic(c.order())), v_(std::move(c)) {}
  explicit Scalar(RatFunc f) : field_(ScalarField::rational_function()), v_(std::move(f)) {}

  static Scalar zero(const ScalarField& f);
  static Scalar one(const ScalarField& f);
  static Scalar from_rational(const ScalarField& f, const Rational& q);
  static Scalar from_int(const ScalarField& f, long v) { return from_rational(f, Rational(v)); }
  /// zeta_n^k in Q(zeta_n).
  static Scalar zeta(const ScalarField& f, std::int64_t k = 1);
  /// The variable t of Q(t).
  static Scalar variable(const ScalarField& f);

  const ScalarField& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;
  /// True when the value lies in Q (regardless of the ambient field).
  bool is_rational_value() const;
  /// Valid only when is_rational_value().
  Rational rational_value() const;

  const CycloElem& cyclo() const;
  const RatFunc& ratfunc() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar inverse() const;
  Scalar pow(std::int64_t e) const;
  /// sigma_k on cyclotomic scalars; identity on rationals.
  Scalar galois(std::int64_t k) const;

  /// Coordinates over Q: phi(n) coefficients for cyclotomic, one for Q.
  std::vector<Rational> q_coords() const;
  static Scalar from_q_coords(const ScalarField& f, const Rational* coords);

  /// Specialize t -> x, giving a rational scalar.
  Scalar specialize(const Rational& x) const;

  std::string to_string() const;

 private:
  void require_same_field(const Scalar& o) const;

  ScalarField field_;
  std::variant<Rational, CycloElem, RatFunc> v_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// sigma_k applied to s. NotCyclotomic for Q(t) scalars, BadGaloisIndex when
/// gcd(k, n) != 1.
Scalar galois_apply(std::int64_t k, const Scalar& s);

/// s^-1, ZeroInversion when s = 0.
Scalar invert_scalar(const Scalar& s);

/// Parses the scalar literal grammar: + - * / ^ ( ), integer literals, the
/// root of unity `z` (or `z<m>` for a primitive m-th root, m dividing the
/// field order) and the variable `t`. Throws FieldError.
Scalar parse_scalar(std::string_view text, const ScalarField& field);

}  // namespace invforge
