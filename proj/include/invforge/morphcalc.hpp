#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "invforge/linalg.hpp"
#include "invforge/tensor.hpp"

namespace invforge {

/// S/R inside the ambient space W^{p,q}. Vectors are flat entry vectors of
/// length n^{p+q}. The presented space has a fixed basis: the classes of the
/// complement vectors, which together with R span S.
class PresentedSpace {
 public:
  /// The whole ambient space with its standard basis.
  static PresentedSpace full(TensorType ambient, int dim, const ScalarField& field);
  /// span(s) / span(r); verifies span(r) is contained in span(s).
  static PresentedSpace from_spans(TensorType ambient, int dim, const ScalarField& field,
                                   const std::vector<Vec<Scalar>>& s, const std::vector<Vec<Scalar>>& r);
  /// (A (x) B) with basis a_i (x) b_j in row-major (i, j) order and
  /// R = R_A (x) S_B + S_A (x) R_B.
  static PresentedSpace tensor(const PresentedSpace& a, const PresentedSpace& b);

  TensorType ambient() const { return ambient_; }
  int dim() const { return dim_; }
  const ScalarField& field() const { return field_; }
  std::size_t ambient_size() const { return ipow(static_cast<std::size_t>(dim_), ambient_.p + ambient_.q); }
  /// Dimension of S/R.
  std::size_t size() const { return basis_.size(); }
  const std::vector<Vec<Scalar>>& basis() const { return basis_; }
  const EchelonBasis<Scalar>& relations() const { return rel_; }
  bool is_full() const { return full_; }
  /// Factors when built by tensor(); empty otherwise.
  const std::vector<std::shared_ptr<const PresentedSpace>>& factors() const { return factors_; }

  /// Spanning set of S: the relations followed by the complement basis.
  std::vector<Vec<Scalar>> s_span() const;
  bool contains(const Vec<Scalar>& v) const;
  bool in_relations(const Vec<Scalar>& v) const;
  /// Coordinates of the class of v (v must lie in S) in the basis.
  Vec<Scalar> coordinates(const Vec<Scalar>& v) const;
  /// A representative of the class with the given coordinates.
  Vec<Scalar> lift(const Vec<Scalar>& coords) const;

  /// Same ambient space, same S and same R (bases may differ).
  friend bool same_space(const PresentedSpace& a, const PresentedSpace& b);

 private:
  PresentedSpace(TensorType ambient, int dim, const ScalarField& field)
      : ambient_(ambient), dim_(dim), field_(field), rel_(ambient_size()), span_(ambient_size()), qred_(ambient_size()) {}
  static PresentedSpace from_basis(TensorType ambient, int dim, const ScalarField& field, std::vector<Vec<Scalar>> basis,
                                   const std::vector<Vec<Scalar>>& r);
  void finish();

  TensorType ambient_;
  int dim_;
  ScalarField field_;
  bool full_ = false;
  std::vector<Vec<Scalar>> basis_;
  EchelonBasis<Scalar> rel_;
  EchelonBasis<Scalar> span_;   // echelon form of S
  EchelonBasis<Scalar> qred_;   // echelon form of the basis reduced mod R
  Matrix<Scalar> to_basis_{0, 0, Scalar()};  // qred_ row coordinates -> basis coordinates
  std::vector<std::shared_ptr<const PresentedSpace>> factors_;
};

using SpacePtr = std::shared_ptr<const PresentedSpace>;

/// Linear map dom -> cod with matrix (dim cod x dim dom) in the fixed bases.
struct PresentedMap {
  SpacePtr dom;
  SpacePtr cod;
  Matrix<Scalar> matrix;

  /// The ambient map of a (p,q) tensor: W^{(x)q} -> W^{(x)p}.
  static PresentedMap from_tensor(const Tensor& x);
  /// f applied to a representative v of a class in dom; returns a representative in cod.
  Vec<Scalar> apply(const Vec<Scalar>& v) const;
};

/// Matrix expressing the basis of `from` in the basis of `to` (same space).
Matrix<Scalar> transition(const PresentedSpace& from, const PresentedSpace& to);

enum class KernelOrImage { Kernel, Image };
PresentedSpace kernel_image(const PresentedMap& f, KernelOrImage which);

/// The map induced by f between presentations; NotWellDefined (with a witness)
/// when f does not carry S into S' and R into R'.
PresentedMap induced_map(const PresentedMap& f, const SpacePtr& dom, const SpacePtr& cod);

enum class GramSide { Left, Right };
/// For f : Q1 (x) Q2 -> L with dim L = 1: left gives beta[i][j] = coefficient
/// of f(q_i (x) q_j), right gives its transpose; both as maps Q1 -> Q2.
PresentedMap gram(const PresentedMap& f, GramSide side);

// ---------------------------------------------------------------------------
// Expressions

struct Expression {
  enum class Kind {
    TensorRef,
    Identity,
    Space,
    Compose,
    Add,
    ScalarMul,
    TensorProd,
    Contract,
    Permute,
    Kernel,
    Image,
    Quotient,
    InducedMap,
    GramLeft,
    GramRight,
    Invert,
    Trace,
  };

  Kind kind = Kind::TensorRef;
  std::string name;               // TensorRef
  std::string literal;            // ScalarMul
  std::vector<int> ints;          // Contract (up, down), Space (p, q)
  Perm sigma, tau;                // Permute
  std::vector<Expression> args;

  static Expression ref(std::string name);
  static Expression identity();
  static Expression space(int p, int q);
  static Expression compose(Expression f, Expression g);
  static Expression add(Expression f, Expression g);
  static Expression scale(std::string literal, Expression f);
  static Expression tensor(Expression a, Expression b);
  static Expression contract(Expression e, int up, int down);
  static Expression permute(Expression e, Perm sigma, Perm tau);
  static Expression kernel(Expression f);
  static Expression image(Expression f);
  static Expression quotient(Expression space, Expression sub);
  static Expression induced(Expression f, Expression dom, Expression cod);
  static Expression gram_left(Expression f);
  static Expression gram_right(Expression f);
  static Expression invert(Expression f);
  static Expression trace(Expression f);

  std::string to_string() const;
};

/// Function-call syntax, e.g. `trace(compose(invert(gramR(ind)), gramL(ind)))`.
/// Scalars in scale() are quoted strings, permutations bracketed lists.
Expression parse_expression(std::string_view text);

using Value = std::variant<PresentedMap, SpacePtr, Scalar>;

/// Named sub-expressions that references resolve to before structure tensors.
using Bindings = std::map<std::string, Expression>;

Value eval_expression(const Expression& e, const Structure& s, const Bindings& bindings = {});

}  // namespace invforge
