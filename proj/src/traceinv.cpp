#include "invforge/traceinv.hpp"

#include <functional>

namespace invforge {

namespace {

std::size_t square_size(const std::vector<Matrix<Scalar>>& xs) {
  if (xs.empty()) throw Error(ErrorCode::ArityMismatch, "no matrices supplied");
  const std::size_t n = xs[0].rows();
  for (const auto& x : xs) {
    if (x.rows() != n || x.cols() != n) throw Error(ErrorCode::DimMismatch, "matrices must be square of equal size");
  }
  if (n == 0) throw Error(ErrorCode::DimMismatch, "matrices must be nonempty");
  return n;
}

}  // namespace

Scalar procesi_T(const CycleInvariantSpec& spec, const std::vector<Matrix<Scalar>>& xs) {
  if (static_cast<int>(xs.size()) != spec.t) {
    throw Error(ErrorCode::ArityMismatch, "expected " + std::to_string(spec.t) + " matrices, got " + std::to_string(xs.size()));
  }
  square_size(xs);
  std::vector<bool> seen(static_cast<std::size_t>(spec.t), false);
  for (const auto& c : spec.cycles) {
    if (c.empty()) throw Error(ErrorCode::ParamInvalid, "empty cycle");
    for (int i : c) {
      if (i < 0 || i >= spec.t || seen[static_cast<std::size_t>(i)]) {
        throw Error(ErrorCode::ParamInvalid, "cycles must partition the arguments");
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
  for (bool b : seen) {
    if (!b) throw Error(ErrorCode::ParamInvalid, "cycles must partition the arguments");
  }
  Scalar acc = Scalar::one(xs[0](0, 0).field());
  for (const auto& c : spec.cycles) {
    Matrix<Scalar> p = xs[static_cast<std::size_t>(c[0])];
    for (std::size_t k = 1; k < c.size(); ++k) p = p * xs[static_cast<std::size_t>(c[k])];
    acc *= trace(p);
  }
  return acc;
}

Scalar formanek_f(const std::vector<Matrix<Scalar>>& ms, bool force) {
  const std::size_t n = square_size(ms);
  const std::size_t count = n * n;
  if (ms.size() != count) {
    throw Error(ErrorCode::ArityMismatch, "expected " + std::to_string(count) + " matrices, got " + std::to_string(ms.size()));
  }
  if (n >= 4 && !force) {
    throw Error(ErrorCode::BudgetExceeded, "f on " + std::to_string(count) + " matrices has " + std::to_string(count) +
                                               "! terms; pass the force option to evaluate anyway");
  }
  const ScalarField field = ms[0](0, 0).field();
  const Scalar zero = Scalar::zero(field);
  // Depth-first over permutations. Within block b (size 2b+1) the running
  // product is carried along; a finished block contributes its trace.
  std::vector<bool> used(count, false);
  Scalar total = zero;
  std::function<void(std::size_t, std::size_t, std::size_t, const Matrix<Scalar>*, const Scalar&, bool)> rec =
      [&](std::size_t placed, std::size_t block, std::size_t in_block, const Matrix<Scalar>* prod, const Scalar& coeff,
          bool odd) {
        if (placed == count) {
          total += odd ? -coeff : coeff;
          return;
        }
        const std::size_t block_len = 2 * block + 1;
        std::size_t smaller_unused = 0;
        for (std::size_t e = 0; e < count; ++e) {
          if (used[e]) continue;
          const bool parity = odd ^ (smaller_unused % 2 == 1);
          ++smaller_unused;
          Matrix<Scalar> next = prod == nullptr ? ms[e] : *prod * ms[e];
          used[e] = true;
          if (in_block + 1 == block_len) {
            const Scalar tr = trace(next);
            if (!tr.is_zero()) rec(placed + 1, block + 1, 0, nullptr, coeff * tr, parity);
          } else {
            rec(placed + 1, block, in_block + 1, &next, coeff, parity);
          }
          used[e] = false;
        }
      };
  rec(0, 0, 0, nullptr, Scalar::one(field), false);
  return total;
}

Scalar formanek_D(const Matrix<Scalar>& x, const Matrix<Scalar>& y, bool force) {
  const std::size_t n = square_size({x, y});
  const Scalar zero = Scalar::zero(x(0, 0).field()), one = Scalar::one(x(0, 0).field());
  std::vector<Matrix<Scalar>> xp{Matrix<Scalar>::identity(n, zero, one)}, yp{Matrix<Scalar>::identity(n, zero, one)};
  for (std::size_t k = 1; k < n; ++k) {
    xp.push_back(xp.back() * x);
    yp.push_back(yp.back() * y);
  }
  std::vector<Matrix<Scalar>> ms;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ms.push_back(xp[i] * yp[j]);
  }
  return formanek_f(ms, force);
}

}  // namespace invforge
