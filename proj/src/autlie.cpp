#include "invforge/autlie.hpp"

namespace invforge {

namespace {

/// Adds (a acting on slot `slot`) x to `out`.
void add_slot_action(const Matrix<Scalar>& a, const Tensor& x, int slot, Tensor& out) {
  const auto n = static_cast<std::size_t>(x.dim());
  const std::size_t stride = ipow(n, x.type().p + x.type().q - 1 - slot);
  for (std::size_t flat = 0; flat < x.size(); ++flat) {
    const Scalar& e = x.entries()[flat];
    if (e.is_zero()) continue;
    const std::size_t digit = (flat / stride) % n;
    const std::size_t base = flat - digit * stride;
    for (std::size_t i = 0; i < n; ++i) {
      if (!a(i, digit).is_zero()) out.entries()[base + i * stride] += a(i, digit) * e;
    }
  }
}

}  // namespace

Tensor derivation_action(const Matrix<Scalar>& d, const Tensor& x) {
  Tensor out(x.type(), x.dim(), x.field());
  const Matrix<Scalar> dual = scale(-Scalar::one(x.field()), d.transpose());
  for (int s = 0; s < x.type().p; ++s) add_slot_action(d, x, s, out);
  for (int s = 0; s < x.type().q; ++s) add_slot_action(dual, x, x.type().p + s, out);
  return out;
}

AutLieResult aut_lie_algebra(const Structure& s) {
  const auto n = static_cast<std::size_t>(s.dim());
  const Scalar zero = Scalar::zero(s.field()), one = Scalar::one(s.field());
  std::size_t rows = 0;
  for (const auto& [name, t] : s.tensors()) rows += t.size();
  Matrix<Scalar> sys(rows, n * n, zero);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Matrix<Scalar> e(n, n, zero);
      e(a, b) = one;
      std::size_t r = 0;
      for (const auto& [name, t] : s.tensors()) {
        const Tensor img = derivation_action(e, t);
        for (const auto& v : img.entries()) sys(r++, a * n + b) = v;
      }
    }
  }
  AutLieResult out;
  for (const auto& v : nullspace(sys, zero)) {
    Matrix<Scalar> d(n, n, zero);
    for (std::size_t i = 0; i < n * n; ++i) d(i / n, i % n) = v[i];
    out.basis.push_back(std::move(d));
  }
  out.dimension = out.basis.size();
  return out;
}

}  // namespace invforge
