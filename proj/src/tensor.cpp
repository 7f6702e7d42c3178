#include "invforge/tensor.hpp"

#include <numeric>

namespace invforge {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

namespace index {
namespace {

std::vector<std::size_t> strides(int dim, int rank) {
  std::vector<std::size_t> s(static_cast<std::size_t>(rank));
  std::size_t acc = 1;
  for (int i = rank - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = acc;
    acc *= static_cast<std::size_t>(dim);
  }
  return s;
}

/// For every flat index of a rank-`rank` array, the sum over slots s of
/// digit_s * dst_stride[position[s]].
std::vector<std::size_t> place(int dim, int rank, const std::vector<std::size_t>& position,
                               const std::vector<std::size_t>& dst_stride) {
  const std::size_t total = ipow(static_cast<std::size_t>(dim), rank);
  std::vector<std::size_t> out(total, 0);
  std::vector<int> digit(static_cast<std::size_t>(rank), 0);
  std::size_t cur = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    out[flat] = cur;
    // odometer increment, last slot fastest
    for (int s = rank - 1; s >= 0; --s) {
      const auto su = static_cast<std::size_t>(s);
      const std::size_t step = dst_stride[position[su]];
      if (++digit[su] < dim) {
        cur += step;
        break;
      }
      digit[su] = 0;
      cur -= step * static_cast<std::size_t>(dim - 1);
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> contraction_sources(int dim, int p, int q, int up, int down) {
  const int rank = p + q;
  const auto src_stride = strides(dim, rank);
  std::vector<std::size_t> position;
  for (int s = 0; s < rank; ++s) {
    if (s == up || s == p + down) continue;
    position.push_back(static_cast<std::size_t>(s));
  }
  const auto base = place(dim, rank - 2, position, src_stride);
  const std::size_t pair_step = src_stride[static_cast<std::size_t>(up)] + src_stride[static_cast<std::size_t>(p + down)];
  std::vector<std::size_t> out;
  out.reserve(base.size() * static_cast<std::size_t>(dim));
  for (std::size_t b : base) {
    for (int k = 0; k < dim; ++k) out.push_back(b + static_cast<std::size_t>(k) * pair_step);
  }
  return out;
}

std::vector<std::size_t> permutation_targets(int dim, int p, int q, const Perm& sigma, const Perm& tau) {
  const auto dst_stride = strides(dim, p + q);
  std::vector<std::size_t> position;
  for (int i = 0; i < p; ++i) position.push_back(static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)]));
  for (int j = 0; j < q; ++j) position.push_back(static_cast<std::size_t>(p + tau[static_cast<std::size_t>(j)]));
  return place(dim, p + q, position, dst_stride);
}

ProductLayout product_layout(int dim, TensorType a, TensorType b) {
  const int up = a.p + b.p;
  const auto dst_stride = strides(dim, up + a.q + b.q);
  std::vector<std::size_t> xpos, ypos;
  for (int i = 0; i < a.p; ++i) xpos.push_back(static_cast<std::size_t>(i));
  for (int j = 0; j < a.q; ++j) xpos.push_back(static_cast<std::size_t>(up + j));
  for (int i = 0; i < b.p; ++i) ypos.push_back(static_cast<std::size_t>(a.p + i));
  for (int j = 0; j < b.q; ++j) ypos.push_back(static_cast<std::size_t>(up + a.q + j));
  return {place(dim, a.p + a.q, xpos, dst_stride), place(dim, b.p + b.q, ypos, dst_stride)};
}

}  // namespace index

// ---------------------------------------------------------------------------
// Tensor

Tensor::Tensor(TensorType type, int dim, const ScalarField& field)
    : type_(type),
      dim_(dim),
      field_(field),
      entries_(ipow(static_cast<std::size_t>(dim), type.p + type.q), Scalar::zero(field)) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "tensor dimension must be positive");
  if (type.p < 0 || type.q < 0) throw Error(ErrorCode::TypeArithmeticMismatch, "negative tensor type");
}

Tensor::Tensor(TensorType type, int dim, const ScalarField& field, std::vector<Scalar> entries)
    : type_(type), dim_(dim), field_(field), entries_(std::move(entries)) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "tensor dimension must be positive");
  if (entries_.size() != ipow(static_cast<std::size_t>(dim), type.p + type.q)) {
    throw Error(ErrorCode::DimMismatch, "entry count does not match n^(p+q)");
  }
  for (const auto& e : entries_) {
    if (e.field() != field_) throw Error(ErrorCode::FieldMismatch, "tensor entry outside " + field_.to_string());
  }
}

Tensor Tensor::identity(int dim, const ScalarField& field) {
  Tensor t({1, 1}, dim, field);
  for (int i = 0; i < dim; ++i) t.at({i}, {i}) = Scalar::one(field);
  return t;
}

Tensor Tensor::scalar(const Scalar& s, int dim) { return Tensor({0, 0}, dim, s.field(), {s}); }

Tensor Tensor::basis_vector(int dim, const ScalarField& field, int i) {
  Tensor t({1, 0}, dim, field);
  t.at({i}, {}) = Scalar::one(field);
  return t;
}

Tensor Tensor::dual_basis_vector(int dim, const ScalarField& field, int i) {
  Tensor t({0, 1}, dim, field);
  t.at({}, {i}) = Scalar::one(field);
  return t;
}

std::size_t Tensor::flat_index(const std::vector<int>& up, const std::vector<int>& down) const {
  if (static_cast<int>(up.size()) != type_.p || static_cast<int>(down.size()) != type_.q) {
    throw Error(ErrorCode::SlotOutOfRange, "index arity does not match tensor type " + type_.to_string());
  }
  std::size_t flat = 0;
  auto push = [&](int i) {
    if (i < 0 || i >= dim_) throw Error(ErrorCode::SlotOutOfRange, "basis index " + std::to_string(i) + " out of range");
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  };
  for (int i : up) push(i);
  for (int i : down) push(i);
  return flat;
}

bool Tensor::is_zero() const {
  for (const auto& e : entries_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

Tensor Tensor::galois(std::int64_t k) const {
  Tensor r = *this;
  for (auto& e : r.entries_) e = galois_apply(k, e);
  return r;
}

Tensor Tensor::specialize(const Rational& t) const {
  std::vector<Scalar> e;
  e.reserve(entries_.size());
  for (const auto& x : entries_) e.push_back(x.specialize(t));
  return Tensor(type_, dim_, ScalarField::rational(), std::move(e));
}

std::vector<Rational> Tensor::q_coords() const {
  const auto phi = static_cast<std::size_t>(field_.q_degree());
  std::vector<Rational> out;
  out.reserve(entries_.size() * phi);
  for (const auto& e : entries_) {
    auto c = e.q_coords();
    for (auto& x : c) out.push_back(std::move(x));
  }
  return out;
}

Tensor Tensor::from_q_coords(TensorType type, int dim, const ScalarField& field, const std::vector<Rational>& coords) {
  const auto phi = static_cast<std::size_t>(field.q_degree());
  const std::size_t count = ipow(static_cast<std::size_t>(dim), type.p + type.q);
  if (coords.size() != count * phi) throw Error(ErrorCode::DimMismatch, "coordinate vector has the wrong length");
  std::vector<Scalar> e;
  e.reserve(count);
  for (std::size_t i = 0; i < count; ++i) e.push_back(Scalar::from_q_coords(field, coords.data() + i * phi));
  return Tensor(type, dim, field, std::move(e));
}

Tensor Tensor::operator-() const {
  Tensor r = *this;
  for (auto& e : r.entries_) e = -e;
  return r;
}

namespace {

void require_compatible(const Tensor& a, const Tensor& b) {
  if (a.field() != b.field()) throw Error(ErrorCode::FieldMismatch, a.field().to_string() + " vs " + b.field().to_string());
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "dimensions " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Tensor operator+(const Tensor& a, const Tensor& b) {
  require_compatible(a, b);
  if (a.type_ != b.type_) throw Error(ErrorCode::TypeError, "sum of tensors of different types");
  Tensor r = a;
  for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] += b.entries_[i];
  return r;
}

Tensor operator-(const Tensor& a, const Tensor& b) { return a + (-b); }

Tensor operator*(const Scalar& s, const Tensor& a) {
  if (s.field() != a.field_) throw Error(ErrorCode::FieldMismatch, "scalar outside the tensor's field");
  Tensor r = a;
  for (auto& e : r.entries_) e *= s;
  return r;
}

Tensor tensor_product(const Tensor& x, const Tensor& y) {
  require_compatible(x, y);
  const TensorType a = x.type(), b = y.type();
  const auto layout = index::product_layout(x.dim(), a, b);
  Tensor out({a.p + b.p, a.q + b.q}, x.dim(), x.field());
  auto& dst = out.entries();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Scalar& xi = x.entries()[i];
    if (xi.is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const Scalar& yj = y.entries()[j];
      if (yj.is_zero()) continue;
      dst[layout.x_part[i] + layout.y_part[j]] = xi * yj;
    }
  }
  return out;
}

Tensor contract(const Tensor& x, int up, int down) {
  const TensorType t = x.type();
  if (up < 0 || up >= t.p || down < 0 || down >= t.q) {
    throw Error(ErrorCode::SlotOutOfRange, "contract(" + std::to_string(up) + ", " + std::to_string(down) + ") on type " + t.to_string());
  }
  const auto src = index::contraction_sources(x.dim(), t.p, t.q, up, down);
  Tensor out({t.p - 1, t.q - 1}, x.dim(), x.field());
  const auto n = static_cast<std::size_t>(x.dim());
  for (std::size_t o = 0; o < out.size(); ++o) {
    Scalar acc = Scalar::zero(x.field());
    for (std::size_t k = 0; k < n; ++k) {
      const Scalar& e = x.entries()[src[o * n + k]];
      if (!e.is_zero()) acc += e;
    }
    out.entries()[o] = std::move(acc);
  }
  return out;
}

Tensor permute(const Tensor& x, const Perm& sigma, const Perm& tau) {
  const TensorType t = x.type();
  if (static_cast<int>(sigma.size()) != t.p || static_cast<int>(tau.size()) != t.q || !is_perm(sigma) || !is_perm(tau)) {
    throw Error(ErrorCode::DegreeMismatch, "permutation degrees do not match tensor type " + t.to_string());
  }
  const auto dst = index::permutation_targets(x.dim(), t.p, t.q, sigma, tau);
  Tensor out(t, x.dim(), x.field());
  for (std::size_t s = 0; s < x.size(); ++s) out.entries()[dst[s]] = x.entries()[s];
  return out;
}

Matrix<Scalar> reshape(const Tensor& x, TensorType from, TensorType to) {
  const TensorType t = x.type();
  if (t.p != to.p + from.q || t.q != to.q + from.p) {
    throw Error(ErrorCode::TypeArithmeticMismatch, "tensor of type " + t.to_string() + " is not a map " + from.to_string() + " -> " + to.to_string());
  }
  const auto n = static_cast<std::size_t>(x.dim());
  const std::size_t out_dim = ipow(n, to.p + to.q);
  const std::size_t in_dim = ipow(n, from.p + from.q);
  // Row multi-index (out_up, out_down), column (in_up, in_down); tensor index
  // is (out_up, in_down | out_down, in_up).
  const std::size_t s_out_down = ipow(n, to.q);
  const std::size_t s_in_down = ipow(n, from.q);
  const std::size_t s_in_up = ipow(n, from.p);
  Matrix<Scalar> m(out_dim, in_dim, Scalar::zero(x.field()));
  for (std::size_t r = 0; r < out_dim; ++r) {
    const std::size_t out_up = r / s_out_down, out_down = r % s_out_down;
    for (std::size_t c = 0; c < in_dim; ++c) {
      const std::size_t in_up = c / s_in_down, in_down = c % s_in_down;
      const std::size_t up_part = out_up * s_in_down + in_down;
      const std::size_t down_part = out_down * s_in_up + in_up;
      m(r, c) = x.entries()[up_part * (s_out_down * s_in_up) + down_part];
    }
  }
  return m;
}

Tensor unreshape(const Matrix<Scalar>& m, TensorType from, TensorType to, int dim, const ScalarField& field) {
  const auto n = static_cast<std::size_t>(dim);
  const std::size_t out_dim = ipow(n, to.p + to.q);
  const std::size_t in_dim = ipow(n, from.p + from.q);
  if (m.rows() != out_dim || m.cols() != in_dim) throw Error(ErrorCode::TypeArithmeticMismatch, "matrix shape does not match the map type");
  Tensor x({to.p + from.q, to.q + from.p}, dim, field);
  const std::size_t s_out_down = ipow(n, to.q);
  const std::size_t s_in_down = ipow(n, from.q);
  const std::size_t s_in_up = ipow(n, from.p);
  for (std::size_t r = 0; r < out_dim; ++r) {
    const std::size_t out_up = r / s_out_down, out_down = r % s_out_down;
    for (std::size_t c = 0; c < in_dim; ++c) {
      const std::size_t in_up = c / s_in_down, in_down = c % s_in_down;
      const std::size_t up_part = out_up * s_in_down + in_down;
      const std::size_t down_part = out_down * s_in_up + in_up;
      x.entries()[up_part * (s_out_down * s_in_up) + down_part] = m(r, c);
    }
  }
  return x;
}

Tensor compose(const Tensor& a, const Tensor& b) {
  require_compatible(a, b);
  if (a.type().q != b.type().p) {
    throw Error(ErrorCode::TypeError, "cannot compose " + a.type().to_string() + " after " + b.type().to_string());
  }
  return from_map(as_map(a) * as_map(b), b.type().q, a.type().p, a.dim(), a.field());
}

std::vector<Vec<Scalar>> antisym_image(const Matrix<Scalar>& t, int k, const ScalarField& field, std::uint64_t budget) {
  if (k < 1) throw Error(ErrorCode::ParamInvalid, "antisymmetrization degree must be >= 1");
  const std::size_t a = t.cols();  // dim U
  const std::size_t b = t.rows();  // dim V
  EchelonBasis<Scalar> span(a);
  if (static_cast<std::size_t>(k) + 1 > a) return {};

  // evaluation count: b^k f-tuples * C(a, k+1) v-subsets * (k+1)! terms
  long double count = 1;
  for (int i = 0; i < k; ++i) count *= static_cast<long double>(b);
  long double choose = 1;
  for (int i = 0; i < k + 1; ++i) choose = choose * static_cast<long double>(a - static_cast<std::size_t>(i)) / static_cast<long double>(i + 1);
  long double fact = 1;
  for (int i = 2; i <= k + 1; ++i) fact *= i;
  if (count * choose * fact > static_cast<long double>(budget)) {
    throw Error(ErrorCode::DimensionOverflow, "K_T evaluation exceeds budget of " + std::to_string(budget));
  }

  const auto perms = all_perms(k + 1);
  std::vector<int> signs;
  for (const auto& p : perms) signs.push_back(perm_sign(p));
  const Scalar zero = Scalar::zero(field);

  std::vector<std::size_t> f(static_cast<std::size_t>(k), 0);
  std::vector<std::size_t> v(static_cast<std::size_t>(k) + 1);
  for (;;) {
    // v: increasing (k+1)-subsets of [0, a)
    std::iota(v.begin(), v.end(), std::size_t{0});
    for (;;) {
      Vec<Scalar> out(a, zero);
      for (std::size_t pi = 0; pi < perms.size(); ++pi) {
        const auto& p = perms[pi];
        Scalar prod = Scalar::one(field);
        for (int i = 0; i < k && !prod.is_zero(); ++i) {
          prod *= t(f[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])]);
        }
        if (prod.is_zero()) continue;
        Scalar& slot = out[v[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])]];
        if (signs[pi] > 0) {
          slot += prod;
        } else {
          slot -= prod;
        }
      }
      span.insert(std::move(out));
      // next subset
      int i = k;
      while (i >= 0 && v[static_cast<std::size_t>(i)] == a - static_cast<std::size_t>(k + 1 - i)) --i;
      if (i < 0) break;
      ++v[static_cast<std::size_t>(i)];
      for (int j = i + 1; j <= k; ++j) v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j) - 1] + 1;
    }
    // next f tuple
    int i = k - 1;
    while (i >= 0 && ++f[static_cast<std::size_t>(i)] == b) {
      f[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    if (span.dim() == a) break;  // already everything
  }
  return span.rows();
}

// ---------------------------------------------------------------------------
// Structure

Structure::Structure(int dim, const ScalarField& field) : dim_(dim), field_(field) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "structure dimension must be positive");
}

void Structure::add(const std::string& name, Tensor t) {
  if (t.dim() != dim_) throw Error(ErrorCode::DimMismatch, "tensor '" + name + "' has the wrong dimension");
  if (t.field() != field_) throw Error(ErrorCode::FieldMismatch, "tensor '" + name + "' is over " + t.field().to_string());
  for (auto& [n, existing] : tensors_) {
    if (n == name) {
      existing = std::move(t);
      return;
    }
  }
  tensors_.emplace_back(name, std::move(t));
}

bool Structure::has(const std::string& name) const {
  for (const auto& [n, t] : tensors_) {
    if (n == name) return true;
  }
  return false;
}

const Tensor& Structure::get(const std::string& name) const {
  for (const auto& [n, t] : tensors_) {
    if (n == name) return t;
  }
  throw Error(ErrorCode::TypeError, "structure has no tensor named '" + name + "'");
}

Structure Structure::galois(std::int64_t k) const {
  if (field_.is_rational_function()) throw Error(ErrorCode::NotCyclotomic, "Galois twist needs a cyclotomic structure");
  if (field_.is_cyclotomic() && gcd_int(mod_floor(k, field_.order), field_.order) != 1) {
    throw Error(ErrorCode::BadGaloisIndex, "gcd(" + std::to_string(k) + ", " + std::to_string(field_.order) + ") != 1");
  }
  Structure s(dim_, field_);
  for (const auto& [n, t] : tensors_) s.add(n, t.galois(k));
  return s;
}

Structure Structure::specialize(const Rational& x) const {
  Structure s(dim_, ScalarField::rational());
  for (const auto& [n, t] : tensors_) s.add(n, t.specialize(x));
  return s;
}

Tensor change_basis(const Tensor& x, const Matrix<Scalar>& g) {
  const Matrix<Scalar> ginv_t = inverse(g).transpose();
  Tensor cur = x;
  const int p = x.type().p, q = x.type().q;
  // apply g to each up slot and g^{-T} to each down slot
  for (int s = 0; s < p + q; ++s) {
    const Matrix<Scalar>& a = s < p ? g : ginv_t;
    Tensor next(x.type(), x.dim(), x.field());
    const auto n = static_cast<std::size_t>(x.dim());
    const std::size_t stride = ipow(n, p + q - 1 - s);
    for (std::size_t flat = 0; flat < cur.size(); ++flat) {
      const Scalar& e = cur.entries()[flat];
      if (e.is_zero()) continue;
      const std::size_t digit = (flat / stride) % n;
      const std::size_t base = flat - digit * stride;
      for (std::size_t i = 0; i < n; ++i) {
        if (!a(i, digit).is_zero()) next.entries()[base + i * stride] += a(i, digit) * e;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Structure Structure::change_basis(const Matrix<Scalar>& g) const {
  Structure s(dim_, field_);
  for (const auto& [n, t] : tensors_) s.add(n, invforge::change_basis(t, g));
  return s;
}

Vec<Scalar> apply_operator(const Tensor& op, const Vec<Scalar>& v) {
  if (op.type() != TensorType{1, 1}) throw Error(ErrorCode::WrongTensorType, "operator must have type (1,1)");
  return as_map(op) * v;
}

Vec<Scalar> multiply(const Tensor& m, const Vec<Scalar>& a, const Vec<Scalar>& b) {
  if (m.type() != TensorType{1, 2}) throw Error(ErrorCode::WrongTensorType, "multiplication must have type (1,2)");
  const auto n = static_cast<std::size_t>(m.dim());
  Vec<Scalar> out(n, Scalar::zero(m.field()));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      const Scalar ab = a[i] * b[j];
      for (std::size_t k = 0; k < n; ++k) {
        const Scalar& c = m.entries()[(k * n + i) * n + j];
        if (!c.is_zero()) out[k] += c * ab;
      }
    }
  }
  return out;
}

}  // namespace invforge
