#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invforge/closure.hpp"
#include "invforge/linalg.hpp"
#include "invforge/tensor.hpp"

namespace invforge {

// ---------------------------------------------------------------------------
// Small algebras used throughout

/// M_n with basis E_ij at index i*n + j; tensors m and unit.
Structure matrix_algebra(int n, const ScalarField& field);
/// K x ... x K (n copies) with coordinatewise product; tensors m and unit.
Structure diagonal_algebra(int n, const ScalarField& field);

/// The u with m(u, e_i) = e_i = m(e_i, u) for all i, if any.
std::optional<Vec<Scalar>> find_unit(const Structure& s);

/// Exhaustive check of (xy)z = x(yz) on basis triples; returns the first failing triple.
std::optional<std::array<int, 3>> associativity_violation(const Tensor& m);

// ---------------------------------------------------------------------------
// Groups and 2-cocycles

struct GroupTable {
  int order = 1;
  std::vector<std::vector<int>> mul;
  int identity = 0;
  std::vector<int> inverse;
  /// (generator index, order n_i) presenting an abelian group as a product of cyclic groups.
  std::vector<std::pair<int, int>> decomposition;

  /// Validates the table and fills identity and inverse. ParamInvalid on failure.
  static GroupTable from_table(std::vector<std::vector<int>> mul, std::vector<std::pair<int, int>> decomposition = {});
  /// C_{n_1} x ... x C_{n_r}; element (e_1..e_r) at mixed-radix index with the last exponent fastest.
  static GroupTable cyclic_product(const std::vector<int>& orders);

  int mult(int x, int y) const { return mul[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; }
  int inv(int x) const { return inverse[static_cast<std::size_t>(x)]; }
  int commutator(int g, int h) const { return mult(mult(g, h), mult(inv(g), inv(h))); }
  int power(int x, int e) const;
  bool is_abelian() const;
};

struct Cocycle2 {
  std::vector<std::vector<Scalar>> alpha;  // N x N, nonzero
  const Scalar& operator()(int x, int y) const { return alpha[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; }
};

struct CocycleCheck {
  bool ok = true;
  int x = -1, y = -1, z = -1;  // first violating triple
};

CocycleCheck check_cocycle(const GroupTable& g, const Cocycle2& alpha);

/// The constant cocycle 1.
Cocycle2 trivial_cocycle(const GroupTable& g, const ScalarField& field);
/// On C_n x C_n (from cyclic_product({n, n})): alpha(g^i h^j, g^k h^l) = zeta_n^(power*j*k).
Cocycle2 bicharacter_cocycle(int n, const ScalarField& field, int power = 1);

/// zeta_n inside Q(zeta_N) for n | N (zeta_N^(N/n)); ParamInvalid otherwise.
Scalar primitive_root(const ScalarField& field, int n);
/// Multiplicative order of a root of unity in the field; InternalCheckFailed when s is not one.
int root_of_unity_order(const Scalar& s);

// ---------------------------------------------------------------------------
// Twisted group algebras

struct TwistedGroupAlgebra {
  GroupTable group;
  Cocycle2 alpha;
  Structure structure;  // m, unit, e0 .. e_{N-1}
};

/// CocycleInvalid unless alpha is a nonvanishing 2-cocycle; verifies associativity.
TwistedGroupAlgebra build_twisted_group_algebra(const GroupTable& g, const Cocycle2& alpha);

/// U_g in basis coordinates, and U_g^{-1} = alpha(1,1)^{-1} alpha(g,g^{-1})^{-1} U_{g^{-1}}.
Vec<Scalar> group_element(const TwistedGroupAlgebra& w, int g);
Vec<Scalar> group_element_inverse(const TwistedGroupAlgebra& w, int g);

/// w_{g,h} = U_g U_h U_g^{-1} U_h^{-1} by multiplication in the algebra.
Vec<Scalar> twisted_commutator(const TwistedGroupAlgebra& w, int g, int h);
/// Coefficient c_{g,h} of U_{[g,h]} in w_{g,h}.
Scalar commutator_scalar(const TwistedGroupAlgebra& w, int g, int h);
/// Scalar lambda with w_{g1,h1} ... w_{gr,hr} = lambda * 1; WordNotRelator when the
/// commutators do not multiply to 1 in G.
Scalar alpha_tilde(const TwistedGroupAlgebra& w, const std::vector<std::pair<int, int>>& word);

struct GenericFormReport {
  Scalar mu;
  int mu_order = 1;
  int k0_degree = 1;
  std::string k0;  // "Q" or "Q(zeta_L)"
  /// c_{x_i,x_j} for ordered generator pairs i != j (0-based generator positions).
  std::vector<std::tuple<int, int, Scalar>> commutation;
  std::vector<Scalar> powers;        // U_{x_i}^{n_i} = powers[i] * 1
  std::vector<int> galois_stabilizer;  // of Q(mu), from the span of the powers of mu
  std::string text;
};

/// NotAbelian / MissingDecomposition when G lacks an abelian cyclic decomposition.
GenericFormReport mu_and_generic_form(const TwistedGroupAlgebra& w);

/// sigma_k applied to every tensor; BadGaloisIndex when gcd(k, n) != 1.
Structure galois_twist(const Structure& s, std::int64_t k);
/// Twist of both the cocycle and the structure tensors.
TwistedGroupAlgebra galois_twist(const TwistedGroupAlgebra& w, std::int64_t k);

// ---------------------------------------------------------------------------
// Taft algebras and their products

struct TaftFactor {
  int n = 2;
  int c = 1;     // g x g^-1 = zeta^c x with zeta a primitive lcm(n_i)-th root
  Scalar a;      // g~^n = a
  Scalar b;      // t^n = b
};

struct TaftProductParams {
  ScalarField field;
  std::vector<TaftFactor> factors;
  std::vector<std::vector<int>> bexp;        // b_ij, g~_i g~_j = zeta^{b_ij} g~_j g~_i
  std::vector<std::vector<Scalar>> lambda;   // t_i t_j - t_j t_i = lambda_ij g~_i^-1 g~_j^-1
};

struct TaftParams {
  ScalarField field;
  int n = 2;
  Scalar a;
  Scalar b;
};

/// The assembled comodule algebra. Basis monomials g~_1^{e_1}..g~_z^{e_z} t_1^{f_1}..t_z^{f_z},
/// mixed radix in that order with the last exponent fastest. Operators are
/// named gamma<i>, xi<i> (1-based) for products and gamma, xi for a single factor.
struct TaftAlgebra {
  TaftProductParams params;
  int n = 2;                  // lcm of the n_i
  Scalar zeta;                // primitive n-th root
  Structure structure;
};

/// ParamInvalid citing the violated constraint; InternalCheckFailed if a
/// built-in verification fails.
TaftAlgebra build_taft_product(const TaftProductParams& p);
TaftAlgebra build_taft(const TaftParams& p);

/// The validity predicate; returns the violated constraint, if any.
std::optional<std::string> taft_product_violation(const TaftProductParams& p);

struct TaftInvariants {
  Scalar a;  // representative only: the class a (K^x)^n is the invariant
  Scalar b;
  std::vector<std::vector<int>> wij_dims;  // dim W_{i,j}
  std::string note;
};

/// Recovers (a, b) from m, unit and the gamma/xi operators; NotTaftShaped
/// naming the failed dimension check.
TaftInvariants extract_taft_invariants(const Structure& s);

struct TaftProductInvariants {
  std::vector<Scalar> b;                          // b_i
  std::vector<std::vector<Scalar>> zeta_bij;      // zeta^{b_ij}
  std::map<std::pair<int, int>, Scalar> Lambda;   // connected pairs i < j
  std::map<std::pair<int, int>, Scalar> lambda;   // raw lambda_ij relative to the extracted g~_i
  std::map<std::vector<int>, Scalar> cycles;      // cycle invariants, cycles of length >= 3
};

/// Needs the factor shape (n_i, c_i) of the product.
TaftProductInvariants extract_product_invariants(const Structure& s, const std::vector<TaftFactor>& shape);

}  // namespace invforge
