#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invforge/linalg.hpp"
#include "invforge/permutation.hpp"
#include "invforge/scalars.hpp"

namespace invforge {

/// (p, q): p copies of W ("up" slots) and q copies of W* ("down" slots).
struct TensorType {
  int p = 0;
  int q = 0;

  std::string to_string() const { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }
  friend bool operator==(const TensorType& a, const TensorType& b) { return a.p == b.p && a.q == b.q; }
  friend bool operator!=(const TensorType& a, const TensorType& b) { return !(a == b); }
  friend bool operator<(const TensorType& a, const TensorType& b) {
    return a.p != b.p ? a.p < b.p : a.q < b.q;
  }
};

std::size_t ipow(std::size_t base, int exp);

// Index arithmetic shared by the Scalar tensors below and the blocked
// Q-coordinate vectors used by the closure engine. Flat indices are row-major
// over the slot list (up_0, ..., up_{p-1}, down_0, ..., down_{q-1}).
namespace index {

/// src[o * dim + k] = flat index in the (p,q) tensor feeding output o with
/// the contracted pair set to k.
std::vector<std::size_t> contraction_sources(int dim, int p, int q, int up, int down);

/// dst[s] = flat index where entry s of a (p,q) tensor lands after permuting
/// up slots by sigma and down slots by tau (slot i moves to sigma[i]).
std::vector<std::size_t> permutation_targets(int dim, int p, int q, const Perm& sigma, const Perm& tau);

/// Flat index in the product tensor for entry (i, j) of x (type a) and y (type b).
struct ProductLayout {
  std::vector<std::size_t> x_part;  // contribution of each x flat index
  std::vector<std::size_t> y_part;  // contribution of each y flat index
};
ProductLayout product_layout(int dim, TensorType a, TensorType b);

}  // namespace index

class Tensor {
 public:
  Tensor(TensorType type, int dim, const ScalarField& field);
  Tensor(TensorType type, int dim, const ScalarField& field, std::vector<Scalar> entries);

  static Tensor identity(int dim, const ScalarField& field);
  static Tensor scalar(const Scalar& s, int dim);
  static Tensor basis_vector(int dim, const ScalarField& field, int i);
  static Tensor dual_basis_vector(int dim, const ScalarField& field, int i);

  TensorType type() const { return type_; }
  int dim() const { return dim_; }
  const ScalarField& field() const { return field_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Scalar>& entries() const { return entries_; }
  std::vector<Scalar>& entries() { return entries_; }

  std::size_t flat_index(const std::vector<int>& up, const std::vector<int>& down) const;
  Scalar& at(const std::vector<int>& up, const std::vector<int>& down) { return entries_[flat_index(up, down)]; }
  const Scalar& at(const std::vector<int>& up, const std::vector<int>& down) const {
    return entries_[flat_index(up, down)];
  }

  bool is_zero() const;
  Tensor galois(std::int64_t k) const;
  Tensor specialize(const Rational& t) const;

  /// Entries expanded over Q (phi(n) coordinates per entry for cyclotomic fields).
  std::vector<Rational> q_coords() const;
  static Tensor from_q_coords(TensorType type, int dim, const ScalarField& field, const std::vector<Rational>& coords);

  Tensor operator-() const;
  friend Tensor operator+(const Tensor& a, const Tensor& b);
  friend Tensor operator-(const Tensor& a, const Tensor& b);
  friend Tensor operator*(const Scalar& s, const Tensor& a);
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.type_ == b.type_ && a.dim_ == b.dim_ && a.field_ == b.field_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }

 private:
  TensorType type_;
  int dim_;
  ScalarField field_;
  std::vector<Scalar> entries_;
};

/// Type (p+r, q+s); up slots of x then of y, down slots of x then of y.
Tensor tensor_product(const Tensor& x, const Tensor& y);

/// Sums over the chosen up/down slot pair.
Tensor contract(const Tensor& x, int up, int down);

/// Slot i of the up factors moves to position sigma[i]; likewise tau on the
/// down factors.
Tensor permute(const Tensor& x, const Perm& sigma, const Perm& tau);

/// Matrix of x viewed as a map W^{from} -> W^{to}. Requires
/// x.type() == (to.p + from.q, to.q + from.p): output factors come first,
/// then the duals of the input factors. Rows index W^{to}, columns W^{from}.
Matrix<Scalar> reshape(const Tensor& x, TensorType from, TensorType to);
Tensor unreshape(const Matrix<Scalar>& m, TensorType from, TensorType to, int dim, const ScalarField& field);

/// A (p,q) tensor as the map W^{(x)q} -> W^{(x)p}.
inline Matrix<Scalar> as_map(const Tensor& x) {
  return reshape(x, TensorType{x.type().q, 0}, TensorType{x.type().p, 0});
}
inline Tensor from_map(const Matrix<Scalar>& m, int inputs, int outputs, int dim, const ScalarField& field) {
  return unreshape(m, TensorType{inputs, 0}, TensorType{outputs, 0}, dim, field);
}

/// a o b for tensors read as maps (a.q must equal b.p).
Tensor compose(const Tensor& a, const Tensor& b);

/// Spanning set (in reduced echelon form) of the image of
///   K_T(f_1..f_k, v_1..v_{k+1}) = sum_sigma sign(sigma) prod_i f_i(T v_sigma(i)) v_sigma(k+1)
/// for T a (rows x cols) matrix U = K^cols -> V = K^rows. Inputs with a
/// repeated v are skipped: K_T is alternating in the v's, so they vanish.
/// DimensionOverflow when the number of term evaluations exceeds `budget`.
std::vector<Vec<Scalar>> antisym_image(const Matrix<Scalar>& t, int k, const ScalarField& field,
                                       std::uint64_t budget = 10'000'000);

/// A vector space of dimension `dim` with named structure tensors.
class Structure {
 public:
  Structure(int dim, const ScalarField& field);

  int dim() const { return dim_; }
  const ScalarField& field() const { return field_; }
  const std::vector<std::pair<std::string, Tensor>>& tensors() const { return tensors_; }

  void add(const std::string& name, Tensor t);
  bool has(const std::string& name) const;
  const Tensor& get(const std::string& name) const;

  Structure galois(std::int64_t k) const;
  /// Q(t) structure specialized at t = x, giving a Q structure.
  Structure specialize(const Rational& x) const;
  /// Every tensor transported along the basis change g (columns = images of
  /// the old basis vectors): up slots get g, down slots get g^{-T}.
  Structure change_basis(const Matrix<Scalar>& g) const;

 private:
  int dim_;
  ScalarField field_;
  std::vector<std::pair<std::string, Tensor>> tensors_;
};

/// Transport a single tensor along g (see Structure::change_basis).
Tensor change_basis(const Tensor& x, const Matrix<Scalar>& g);

/// Apply a (1,1) operator or multiplication (1,2) tensor to basis-coordinate vectors.
Vec<Scalar> apply_operator(const Tensor& op, const Vec<Scalar>& v);
Vec<Scalar> multiply(const Tensor& m, const Vec<Scalar>& a, const Vec<Scalar>& b);

}  // namespace invforge
