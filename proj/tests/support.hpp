#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "invforge/linalg.hpp"
#include "invforge/scalars.hpp"
#include "invforge/tensor.hpp"

namespace testing_support {

using namespace invforge;

/// Fixed by default; INVFORGE_SEED overrides it for exploratory runs.
inline std::uint64_t seed_from_env() {
  const char* v = std::getenv("INVFORGE_SEED");
  return v ? std::stoull(v) : 20240611;
}

inline const std::uint64_t kSeed = seed_from_env();

inline Rational small_rational(std::mt19937_64& rng, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, 3);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline long small_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Scalar random_scalar(std::mt19937_64& rng, const ScalarField& f) {
  if (f.is_rational_function()) {
    std::vector<Rational> n, d;
    for (int i = 0; i < 3; ++i) n.push_back(small_rational(rng));
    for (int i = 0; i < 2; ++i) d.push_back(small_rational(rng));
    QPoly den(d);
    if (den.is_zero()) den = QPoly::constant(1);
    return Scalar(RatFunc(QPoly(n), den));
  }
  if (f.is_cyclotomic()) {
    std::vector<Rational> c;
    for (int i = 0; i < f.q_degree(); ++i) c.push_back(small_rational(rng));
    return Scalar::from_q_coords(f, c.data());
  }
  return Scalar(small_rational(rng));
}

inline Matrix<Scalar> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, const ScalarField& f,
                                    int lo = -2, int hi = 2) {
  Matrix<Scalar> m(r, c, Scalar::zero(f));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Scalar::from_int(f, small_int(rng, lo, hi));
  }
  return m;
}

inline Tensor random_tensor(std::mt19937_64& rng, TensorType t, int dim, const ScalarField& f) {
  Tensor x(t, dim, f);
  for (auto& e : x.entries()) e = Scalar::from_int(f, small_int(rng, -2, 2));
  return x;
}

/// Plain Gaussian elimination on a copy, independent of linalg.hpp: rank over Q.
inline std::size_t oracle_rank(std::vector<std::vector<Rational>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const Rational f = rows[i][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<Rational>> to_rational_rows(const std::vector<Vec<Scalar>>& vs) {
  std::vector<std::vector<Rational>> out;
  for (const auto& v : vs) {
    std::vector<Rational> row;
    for (const auto& s : v) {
      for (auto& c : s.q_coords()) row.push_back(c);
    }
    out.push_back(row);
  }
  return out;
}

/// dim span(a) == dim span(b) == dim span(a u b).
inline bool same_span(const std::vector<Vec<Scalar>>& a, const std::vector<Vec<Scalar>>& b) {
  auto ra = to_rational_rows(a), rb = to_rational_rows(b);
  auto both = ra;
  both.insert(both.end(), rb.begin(), rb.end());
  const auto x = oracle_rank(ra), y = oracle_rank(rb);
  return x == y && oracle_rank(both) == x;
}

}  // namespace testing_support
