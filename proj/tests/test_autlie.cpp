#include <doctest.h>

#include <random>

#include "invforge/autlie.hpp"
#include "invforge/structures.hpp"
#include "support.hpp"

using namespace invforge;
using namespace testing_support;

namespace {

Vec<Scalar> flat(const Matrix<Scalar>& m) { return m.data(); }

/// Span membership of the commutator [a, b] in the basis.
bool bracket_in_span(const std::vector<Matrix<Scalar>>& basis, const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  std::vector<Vec<Scalar>> rows;
  for (const auto& d : basis) rows.push_back(flat(d));
  const std::size_t r = oracle_rank(to_rational_rows(rows));
  rows.push_back(flat(a * b - b * a));
  return oracle_rank(to_rational_rows(rows)) == r;
}

Matrix<Scalar> ad(const Matrix<Scalar>& a) {
  // Matrix of X -> aX - Xa on M_2 in the E_ij basis (index i*2 + j).
  const Scalar zero = Scalar::zero(a(0, 0).field());
  Matrix<Scalar> out(4, 4, zero);
  for (std::size_t col = 0; col < 4; ++col) {
    Matrix<Scalar> x(2, 2, zero);
    x(col / 2, col % 2) = Scalar::one(zero.field());
    const Matrix<Scalar> y = a * x - x * a;
    for (std::size_t row = 0; row < 4; ++row) out(row, col) = y(row / 2, row % 2);
  }
  return out;
}

}  // namespace

TEST_CASE("empty structure gives gl(W)") {
  for (int n : {1, 2, 3}) {
    const auto r = aut_lie_algebra(Structure(n, ScalarField::rational()));
    CHECK(r.dimension == static_cast<std::size_t>(n * n));
  }
}

TEST_CASE("M_2 has the inner derivations") {
  const ScalarField q = ScalarField::rational();
  const Structure m2 = matrix_algebra(2, q);
  const auto r = aut_lie_algebra(m2);
  CHECK(r.dimension == 3);
  // Oracle: ad(E_ij) are derivations and span a 3-dim space containing the result.
  std::vector<Vec<Scalar>> inner;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      Matrix<Scalar> e(2, 2, Scalar::zero(q));
      e(i, j) = Scalar::one(q);
      const auto d = ad(e);
      for (const auto& [name, t] : m2.tensors()) CHECK(derivation_action(d, t).is_zero());
      inner.push_back(flat(d));
    }
  }
  CHECK(oracle_rank(to_rational_rows(inner)) == 3);
  auto both = inner;
  for (const auto& d : r.basis) both.push_back(flat(d));
  CHECK(oracle_rank(to_rational_rows(both)) == 3);
}

TEST_CASE("nondegenerately twisted C2 x C2 with projections has finite automorphisms") {
  const ScalarField f = ScalarField::cyclotomic(4);
  const auto w = build_twisted_group_algebra(GroupTable::cyclic_product({2, 2}), bicharacter_cocycle(2, f));
  CHECK(aut_lie_algebra(w.structure).dimension == 0);
  // Dropping the projections leaves the inner derivations of M_2.
  Structure plain(4, f);
  plain.add("m", w.structure.get("m"));
  CHECK(aut_lie_algebra(plain).dimension == 3);
}

TEST_CASE("solutions form a Lie algebra and annihilate the tensors") {
  std::mt19937_64 rng(kSeed);
  const ScalarField q = ScalarField::rational();
  std::vector<Structure> cases = {matrix_algebra(2, q), diagonal_algebra(3, q), Structure(2, q)};
  Structure op(3, q);
  op.add("T", random_tensor(rng, {1, 1}, 3, q));
  cases.push_back(op);
  Structure form(3, q);
  Tensor b(TensorType{0, 2}, 3, q);
  b.at({}, {0, 0}) = b.at({}, {1, 1}) = Scalar::one(q);
  b.at({}, {2, 2}) = -Scalar::one(q);
  form.add("b", b);
  cases.push_back(form);
  for (const auto& s : cases) {
    const auto r = aut_lie_algebra(s);
    for (const auto& d : r.basis) {
      for (const auto& [name, t] : s.tensors()) CHECK(derivation_action(d, t).is_zero());
    }
    for (const auto& a : r.basis) {
      for (const auto& c : r.basis) CHECK(bracket_in_span(r.basis, a, c));
    }
  }
  // so(2,1) has dimension 3.
  CHECK(aut_lie_algebra(form).dimension == 3);
}

TEST_CASE("dimension is invariant under basis change") {
  std::mt19937_64 rng(kSeed + 7);
  const ScalarField q = ScalarField::rational();
  const std::vector<Structure> cases = {matrix_algebra(2, q), diagonal_algebra(3, q)};
  for (const auto& s : cases) {
    const auto base = aut_lie_algebra(s).dimension;
    for (int trial = 0; trial < 5; ++trial) {
      Matrix<Scalar> g = random_matrix(rng, static_cast<std::size_t>(s.dim()), static_cast<std::size_t>(s.dim()), q);
      while (determinant(g).is_zero()) g = random_matrix(rng, static_cast<std::size_t>(s.dim()), static_cast<std::size_t>(s.dim()), q);
      CHECK(aut_lie_algebra(s.change_basis(g)).dimension == base);
    }
  }
}
