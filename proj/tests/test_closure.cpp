#include <chrono>
#include <random>

#include "doctest.h"
#include "invforge/closure.hpp"
#include "support.hpp"

using namespace invforge;
using namespace testing_support;

namespace {

const ScalarField F8 = ScalarField::cyclotomic(8);

Structure diag_structure(const Scalar& a, const Scalar& b) {
  Tensor t({1, 1}, 2, a.field());
  t.at({0}, {0}) = a;
  t.at({1}, {1}) = b;
  Structure s(2, a.field());
  s.add("T", t);
  return s;
}

bool contained_in(const ClosureState& small, const ClosureState& big) {
  for (const auto& [t, basis] : small.bases) {
    for (const auto& x : small.basis_tensors(t)) {
      if (!big.contains(x)) return false;
    }
  }
  return true;
}

std::vector<Tensor> all_basis_tensors(const ClosureState& st) {
  std::vector<Tensor> out;
  for (const auto& [t, basis] : st.bases) {
    for (auto& x : st.basis_tensors(t)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

TEST_CASE("empty structure in dimension 2") {
  const auto Q = ScalarField::rational();
  const auto st = compute_closure(Structure(2, Q), {2, 2, 64});
  CHECK(st.converged);
  CHECK(st.dimension({0, 0}) == 1);
  CHECK(st.dimension({1, 1}) == 1);
  CHECK(st.dimension({2, 2}) == 2);
  CHECK(st.dimension({1, 0}) == 0);
  CHECK(st.dimension({2, 1}) == 0);
  // Schur-Weyl: identity and swap span X^{2,2}
  const Tensor id = Tensor::identity(2, Q);
  const Tensor idid = tensor_product(id, id);
  CHECK(st.contains(idid));
  CHECK(st.contains(permute(idid, {1, 0}, {0, 1})));
}

TEST_CASE("empty structure in dimension 3 at bound (3,3)") {
  const auto start = std::chrono::steady_clock::now();
  const auto st = compute_closure(Structure(3, ScalarField::rational()), {3, 3, 64});
  CHECK(st.converged);
  CHECK(st.dimension({2, 2}) == 2);
  CHECK(st.dimension({3, 3}) == 6);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));
}

TEST_CASE("diagonal examples over Q(zeta_8)") {
  const auto full = compute_closure(diag_structure(Scalar::zeta(F8), Scalar::zero(F8)), {1, 1, 64});
  CHECK(full.dimension({0, 0}) == 4);
  const auto rep = invariant_field_report(full);
  CHECK(rep.field_closed);
  CHECK(rep.galois_stabilizer == std::vector<int>{1});
  CHECK(rep.fixed_field_degree == 4);

  const Scalar r2 = Scalar::zeta(F8) + Scalar::zeta(F8, -1);
  for (int b : {1, 2, 3}) {
    const auto st = compute_closure(diag_structure(r2, -r2), {b, b, 64});
    CHECK(st.dimension({0, 0}) == 1);
    const auto r = invariant_field_report(st);
    CHECK(r.galois_stabilizer == std::vector<int>{1, 3, 5, 7});
    CHECK(r.fixed_field_degree == 1);
  }
}

TEST_CASE("report on explicit spans") {
  const Scalar one = Scalar::one(F8), r2 = Scalar::zeta(F8) + Scalar::zeta(F8, -1);
  auto r = invariant_field_report({one}, F8);
  CHECK(r.galois_stabilizer == std::vector<int>{1, 3, 5, 7});
  CHECK(r.fixed_field_degree == 1);
  r = invariant_field_report({one, r2}, F8);
  CHECK(r.field_closed);
  CHECK(r.galois_stabilizer == std::vector<int>{1, 7});
  CHECK(r.fixed_field_degree == 2);
  r = invariant_field_report({one, Scalar::zeta(F8)}, F8);
  CHECK_FALSE(r.field_closed);
}

TEST_CASE("rational functions are rejected") {
  try {
    compute_closure(Structure(2, ScalarField::rational_function()), {1, 1, 4});
    FAIL("expected UnsupportedField");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedField);
  }
}

TEST_CASE("monotonicity in the bound") {
  const Scalar z = Scalar::zeta(F8);
  const auto s = diag_structure(z, Scalar::one(F8));
  const auto a = compute_closure(s, {1, 1, 64});
  const auto b = compute_closure(s, {2, 1, 64});
  const auto c = compute_closure(s, {2, 2, 64});
  CHECK(contained_in(a, b));
  CHECK(contained_in(b, c));
  CHECK(contained_in(a, c));
}

TEST_CASE("idempotence") {
  const auto s = diag_structure(Scalar::zeta(F8, 2), Scalar::zero(F8));
  const DegreeBound bound{2, 2, 64};
  const auto st = compute_closure(s, bound);
  REQUIRE(st.converged);
  const auto again = compute_closure_from(s.dim(), s.field(), all_basis_tensors(st), bound);
  for (const auto& [t, basis] : st.bases) CHECK(again.bases.at(t) == basis);
}

TEST_CASE("converged states are closed under the generating operations") {
  const auto Q = ScalarField::rational();
  Tensor n({1, 1}, 2, Q);
  n.at({0}, {1}) = Scalar::one(Q);
  Structure s(2, Q);
  s.add("N", n);
  const DegreeBound bound{2, 2, 64};
  const auto st = compute_closure(s, bound);
  REQUIRE(st.converged);
  std::mt19937_64 rng(kSeed);
  std::vector<TensorType> types;
  for (const auto& [t, basis] : st.bases) {
    if (basis.dim() > 0) types.push_back(t);
  }
  auto pick = [&](TensorType t) {
    const auto b = st.basis_tensors(t);
    return b[static_cast<std::size_t>(small_int(rng, 0, static_cast<int>(b.size()) - 1))];
  };
  for (int i = 0; i < 200; ++i) {
    const TensorType ta = types[static_cast<std::size_t>(small_int(rng, 0, static_cast<int>(types.size()) - 1))];
    const TensorType tb = types[static_cast<std::size_t>(small_int(rng, 0, static_cast<int>(types.size()) - 1))];
    const Tensor a = pick(ta);
    if (ta.p + tb.p <= bound.P && ta.q + tb.q <= bound.Q) CHECK(st.contains(tensor_product(a, pick(tb))));
    if (ta.p > 0 && ta.q > 0) {
      CHECK(st.contains(contract(a, static_cast<int>(small_int(rng, 0, ta.p - 1)), static_cast<int>(small_int(rng, 0, ta.q - 1)))));
    }
    if (ta.p == 2) CHECK(st.contains(permute(a, {1, 0}, identity_perm(ta.q))));
    if (ta.q == 2) CHECK(st.contains(permute(a, identity_perm(ta.p), {1, 0})));
  }
}

TEST_CASE("Galois equivariance") {
  const auto s = diag_structure(Scalar::zeta(F8), Scalar::zero(F8));
  const auto st = compute_closure(s, {1, 1, 64});
  for (int k : {3, 5, 7}) {
    const auto twisted = compute_closure(s.galois(k), {1, 1, 64});
    for (const auto& x : st.basis_tensors({0, 0})) CHECK(twisted.contains(x.galois(k)));
    CHECK(twisted.dimension({0, 0}) == st.dimension({0, 0}));
  }
}

TEST_CASE("bound validation and budget") {
  const auto s = diag_structure(Scalar::zeta(F8), Scalar::zero(F8));
  Structure big = s;
  big.add("m", Tensor({1, 2}, 2, F8));
  try {
    compute_closure(big, {1, 1, 4});
    FAIL("expected ParamInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParamInvalid);
  }
  try {
    compute_closure(s, {2, 2, 64}, 100);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
  const auto partial = compute_closure(s, {2, 2, 1});
  CHECK_FALSE(partial.converged);
  CHECK(partial.rounds == 1);
}
