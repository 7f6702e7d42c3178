#include "invforge/structures.hpp"

#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace invforge {

namespace {

using Sparse = std::map<std::size_t, Scalar>;

void add_to(Sparse& acc, std::size_t k, const Scalar& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = acc.emplace(k, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) acc.erase(it);
  }
}

Vec<Scalar> basis_vec(std::size_t n, std::size_t i, const ScalarField& f) {
  Vec<Scalar> v(n, Scalar::zero(f));
  v[i] = Scalar::one(f);
  return v;
}

Tensor operator_tensor(const Matrix<Scalar>& a, int dim, const ScalarField& f) { return from_map(a, 1, 1, dim, f); }

Tensor unit_tensor(const Vec<Scalar>& u, int dim, const ScalarField& f) {
  return Tensor(TensorType{1, 0}, dim, f, u);
}

Matrix<Scalar> left_mult(const Tensor& m, const Vec<Scalar>& u) {
  const auto n = static_cast<std::size_t>(m.dim());
  std::vector<Vec<Scalar>> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(multiply(m, u, basis_vec(n, j, m.field())));
  return Matrix<Scalar>::from_columns(cols, n, Scalar::zero(m.field()));
}

Matrix<Scalar> right_mult(const Tensor& m, const Vec<Scalar>& u) {
  const auto n = static_cast<std::size_t>(m.dim());
  std::vector<Vec<Scalar>> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(multiply(m, basis_vec(n, j, m.field()), u));
  return Matrix<Scalar>::from_columns(cols, n, Scalar::zero(m.field()));
}

Matrix<Scalar> shifted(const Matrix<Scalar>& a, const Scalar& s) {
  Matrix<Scalar> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) -= s;
  return out;
}

/// Common null space of the given square matrices.
std::vector<Vec<Scalar>> joint_kernel(const std::vector<Matrix<Scalar>>& ms, std::size_t n, const ScalarField& f) {
  std::size_t rows = 0;
  for (const auto& m : ms) rows += m.rows();
  Matrix<Scalar> big(rows, n, Scalar::zero(f));
  std::size_t r = 0;
  for (const auto& m : ms) {
    for (std::size_t i = 0; i < m.rows(); ++i, ++r) {
      for (std::size_t j = 0; j < n; ++j) big(r, j) = m(i, j);
    }
  }
  if (rows == 0) {
    std::vector<Vec<Scalar>> all;
    for (std::size_t i = 0; i < n; ++i) all.push_back(basis_vec(n, i, f));
    return all;
  }
  return nullspace(big, Scalar::zero(f));
}

/// v scaled so that its first nonzero coordinate is 1.
Vec<Scalar> normalized(Vec<Scalar> v) {
  for (const auto& x : v) {
    if (!x.is_zero()) {
      const Scalar inv = x.inverse();
      for (auto& y : v) y *= inv;
      break;
    }
  }
  return v;
}

/// lambda with v = lambda * w, if v is a multiple of the nonzero w.
std::optional<Scalar> ratio(const Vec<Scalar>& v, const Vec<Scalar>& w) {
  std::optional<Scalar> lam;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].is_zero()) {
      lam = v[i] / w[i];
      break;
    }
  }
  if (!lam) return std::nullopt;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (v[i] != *lam * w[i]) return std::nullopt;
  }
  return lam;
}

Vec<Scalar> power_of(const Tensor& m, const Vec<Scalar>& x, int e, const Vec<Scalar>& unit) {
  Vec<Scalar> acc = unit;
  for (int i = 0; i < e; ++i) acc = multiply(m, acc, x);
  return acc;
}

bool is_identity(const Matrix<Scalar>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i == j ? !a(i, j).is_one() : !a(i, j).is_zero()) return false;
    }
  }
  return true;
}

bool is_zero_matrix(const Matrix<Scalar>& a) {
  for (const auto& x : a.data()) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Matrix<Scalar> mat_pow(const Matrix<Scalar>& a, int e) {
  const Scalar zero = Scalar::zero(a.data().front().field());
  Matrix<Scalar> acc = Matrix<Scalar>::identity(a.rows(), zero, Scalar::one(zero.field()));
  for (int i = 0; i < e; ++i) acc = acc * a;
  return acc;
}

int mod_int(std::int64_t a, int n) { return static_cast<int>(mod_floor(a, n)); }

}  // namespace

// ---------------------------------------------------------------------------

Structure matrix_algebra(int n, const ScalarField& field) {
  const int d = n * n;
  Structure s(d, field);
  Tensor m(TensorType{1, 2}, d, field);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) m.at({i * n + l}, {i * n + j, j * n + l}) = Scalar::one(field);
    }
  }
  Vec<Scalar> u(static_cast<std::size_t>(d), Scalar::zero(field));
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i * n + i)] = Scalar::one(field);
  s.add("m", std::move(m));
  s.add("unit", unit_tensor(u, d, field));
  return s;
}

Structure diagonal_algebra(int n, const ScalarField& field) {
  Structure s(n, field);
  Tensor m(TensorType{1, 2}, n, field);
  for (int i = 0; i < n; ++i) m.at({i}, {i, i}) = Scalar::one(field);
  s.add("m", std::move(m));
  s.add("unit", unit_tensor(Vec<Scalar>(static_cast<std::size_t>(n), Scalar::one(field)), n, field));
  return s;
}

std::optional<Vec<Scalar>> find_unit(const Structure& s) {
  const Tensor& m = s.get("m");
  if (m.type() != TensorType{1, 2}) throw Error(ErrorCode::WrongTensorType, "m must have type (1,2)");
  const auto n = static_cast<std::size_t>(s.dim());
  const Scalar zero = Scalar::zero(s.field());
  Matrix<Scalar> a(2 * n * n, n, zero);
  Vec<Scalar> rhs(2 * n * n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t r = i * n + l;
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) = m.at({static_cast<int>(l)}, {static_cast<int>(k), static_cast<int>(i)});
        a(n * n + r, k) = m.at({static_cast<int>(l)}, {static_cast<int>(i), static_cast<int>(k)});
      }
      if (i == l) rhs[r] = rhs[n * n + r] = Scalar::one(s.field());
    }
  }
  return solve(a, rhs, zero);
}

std::optional<std::array<int, 3>> associativity_violation(const Tensor& m) {
  const int n = m.dim();
  const auto un = static_cast<std::size_t>(n);
  // prod[i][j] = e_i e_j as a sparse vector
  std::vector<std::vector<Sparse>> prod(un, std::vector<Sparse>(un));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Scalar& c = m.at({k}, {i, j});
        if (!c.is_zero()) prod[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].emplace(static_cast<std::size_t>(k), c);
      }
    }
  }
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = 0; j < un; ++j) {
      for (std::size_t k = 0; k < un; ++k) {
        Sparse lhs, rhs;
        for (const auto& [a, ca] : prod[i][j]) {
          for (const auto& [b, cb] : prod[a][k]) add_to(lhs, b, ca * cb);
        }
        for (const auto& [a, ca] : prod[j][k]) {
          for (const auto& [b, cb] : prod[i][a]) add_to(rhs, b, ca * cb);
        }
        if (lhs != rhs) return std::array<int, 3>{static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Groups

GroupTable GroupTable::from_table(std::vector<std::vector<int>> mul, std::vector<std::pair<int, int>> decomposition) {
  GroupTable g;
  g.order = static_cast<int>(mul.size());
  if (g.order < 1) throw Error(ErrorCode::ParamInvalid, "group table is empty");
  for (const auto& row : mul) {
    if (static_cast<int>(row.size()) != g.order) throw Error(ErrorCode::ParamInvalid, "group table is not square");
    for (int x : row) {
      if (x < 0 || x >= g.order) throw Error(ErrorCode::ParamInvalid, "group table entry out of range");
    }
  }
  g.mul = std::move(mul);
  const int n = g.order;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        if (g.mult(g.mult(x, y), z) != g.mult(x, g.mult(y, z))) {
          throw Error(ErrorCode::ParamInvalid, "group table is not associative at (" + std::to_string(x) + "," +
                                                   std::to_string(y) + "," + std::to_string(z) + ")");
        }
      }
    }
  }
  g.identity = -1;
  for (int e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = g.mult(e, x) == x && g.mult(x, e) == x;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw Error(ErrorCode::ParamInvalid, "group table has no identity");
  g.inverse.assign(static_cast<std::size_t>(n), -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (g.mult(x, y) == g.identity && g.mult(y, x) == g.identity) g.inverse[static_cast<std::size_t>(x)] = y;
    }
    if (g.inverse[static_cast<std::size_t>(x)] < 0) {
      throw Error(ErrorCode::ParamInvalid, "element " + std::to_string(x) + " has no inverse");
    }
  }
  if (!decomposition.empty()) {
    long prod = 1;
    for (const auto& [x, ord] : decomposition) {
      if (x < 0 || x >= n || ord < 1) throw Error(ErrorCode::ParamInvalid, "bad decomposition entry");
      if (g.power(x, ord) != g.identity) throw Error(ErrorCode::ParamInvalid, "generator order does not divide n_i");
      for (int d = 1; d < ord; ++d) {
        if (g.power(x, d) == g.identity) throw Error(ErrorCode::ParamInvalid, "generator has smaller order than n_i");
      }
      prod *= ord;
    }
    if (prod != n) throw Error(ErrorCode::ParamInvalid, "decomposition orders do not multiply to |G|");
    std::set<int> reached{g.identity};
    for (const auto& [x, ord] : decomposition) {
      std::set<int> next;
      for (int r : reached) {
        int y = r;
        for (int k = 0; k < ord; ++k, y = g.mult(y, x)) next.insert(y);
      }
      reached = std::move(next);
    }
    if (static_cast<int>(reached.size()) != n) throw Error(ErrorCode::ParamInvalid, "decomposition does not generate G");
  }
  g.decomposition = std::move(decomposition);
  return g;
}

GroupTable GroupTable::cyclic_product(const std::vector<int>& orders) {
  int n = 1;
  for (int o : orders) {
    if (o < 1) throw Error(ErrorCode::ParamInvalid, "cyclic factor order must be positive");
    n *= o;
  }
  const auto digits = [&](int x) {
    std::vector<int> d(orders.size());
    for (std::size_t i = orders.size(); i-- > 0;) {
      d[i] = x % orders[i];
      x /= orders[i];
    }
    return d;
  };
  const auto pack = [&](const std::vector<int>& d) {
    int x = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) x = x * orders[i] + d[i];
    return x;
  };
  std::vector<std::vector<int>> mul(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      auto a = digits(x), b = digits(y);
      for (std::size_t i = 0; i < orders.size(); ++i) a[i] = (a[i] + b[i]) % orders[i];
      mul[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = pack(a);
    }
  }
  std::vector<std::pair<int, int>> dec;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    std::vector<int> d(orders.size(), 0);
    d[i] = 1;
    if (orders[i] > 1) dec.emplace_back(pack(d), orders[i]);
  }
  return from_table(std::move(mul), std::move(dec));
}

int GroupTable::power(int x, int e) const {
  if (e < 0) return power(inv(x), -e);
  int acc = identity;
  for (int i = 0; i < e; ++i) acc = mult(acc, x);
  return acc;
}

bool GroupTable::is_abelian() const {
  for (int x = 0; x < order; ++x) {
    for (int y = 0; y < x; ++y) {
      if (mult(x, y) != mult(y, x)) return false;
    }
  }
  return true;
}

CocycleCheck check_cocycle(const GroupTable& g, const Cocycle2& a) {
  const int n = g.order;
  if (static_cast<int>(a.alpha.size()) != n) throw Error(ErrorCode::DimMismatch, "cocycle size does not match the group");
  for (const auto& row : a.alpha) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorCode::DimMismatch, "cocycle size does not match the group");
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (a(x, y).is_zero()) return {false, x, y, -1};
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        if (a(x, y) * a(g.mult(x, y), z) != a(y, z) * a(x, g.mult(y, z))) return {false, x, y, z};
      }
    }
  }
  return {};
}

Cocycle2 trivial_cocycle(const GroupTable& g, const ScalarField& field) {
  const auto n = static_cast<std::size_t>(g.order);
  return Cocycle2{std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar::one(field)))};
}

Cocycle2 bicharacter_cocycle(int n, const ScalarField& field, int power) {
  const Scalar zeta = primitive_root(field, n);
  const auto N = static_cast<std::size_t>(n * n);
  Cocycle2 c{std::vector<std::vector<Scalar>>(N, std::vector<Scalar>(N, Scalar::one(field)))};
  for (int x = 0; x < n * n; ++x) {
    for (int y = 0; y < n * n; ++y) {
      const int j = x % n, k = y / n;
      c.alpha[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = zeta.pow(mod_int(static_cast<std::int64_t>(power) * j * k, n));
    }
  }
  return c;
}

Scalar primitive_root(const ScalarField& field, int n) {
  if (n < 1) throw Error(ErrorCode::ParamInvalid, "root of unity order must be positive");
  if (n == 1) return Scalar::one(field);
  if (n == 2) return -Scalar::one(field);
  if (field.is_cyclotomic() && field.order % n == 0) return Scalar::zeta(field, field.order / n);
  throw Error(ErrorCode::ParamInvalid, "no designated primitive " + std::to_string(n) + "-th root of unity in " + field.to_string());
}

int root_of_unity_order(const Scalar& s) {
  const ScalarField& f = s.field();
  const int m = f.is_cyclotomic() ? static_cast<int>(lcm_int(f.order, 2)) : 2;
  for (int d = 1; d <= m; ++d) {
    if (m % d == 0 && s.pow(d).is_one()) return d;
  }
  throw Error(ErrorCode::InternalCheckFailed, s.to_string() + " is not a root of unity");
}

// ---------------------------------------------------------------------------
// Twisted group algebras

TwistedGroupAlgebra build_twisted_group_algebra(const GroupTable& g, const Cocycle2& alpha) {
  const auto check = check_cocycle(g, alpha);
  if (!check.ok) {
    if (check.z < 0) {
      throw Error(ErrorCode::CocycleInvalid, "alpha(" + std::to_string(check.x) + "," + std::to_string(check.y) + ") = 0");
    }
    throw Error(ErrorCode::CocycleInvalid, "cocycle identity fails at (" + std::to_string(check.x) + "," +
                                               std::to_string(check.y) + "," + std::to_string(check.z) + ")");
  }
  const int n = g.order;
  const ScalarField field = alpha(0, 0).field();
  Structure s(n, field);
  Tensor m(TensorType{1, 2}, n, field);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) m.at({g.mult(x, y)}, {x, y}) = alpha(x, y);
  }
  if (auto bad = associativity_violation(m)) {
    throw Error(ErrorCode::InternalCheckFailed, "twisted group algebra is not associative");
  }
  Vec<Scalar> u(static_cast<std::size_t>(n), Scalar::zero(field));
  u[static_cast<std::size_t>(g.identity)] = alpha(g.identity, g.identity).inverse();
  s.add("m", std::move(m));
  s.add("unit", unit_tensor(u, n, field));
  for (int x = 0; x < n; ++x) {
    Tensor e(TensorType{1, 1}, n, field);
    e.at({x}, {x}) = Scalar::one(field);
    s.add("e" + std::to_string(x), std::move(e));
  }
  return TwistedGroupAlgebra{g, alpha, std::move(s)};
}

Vec<Scalar> group_element(const TwistedGroupAlgebra& w, int g) {
  return basis_vec(static_cast<std::size_t>(w.group.order), static_cast<std::size_t>(g), w.structure.field());
}

Vec<Scalar> group_element_inverse(const TwistedGroupAlgebra& w, int g) {
  const GroupTable& G = w.group;
  const int gi = G.inv(g);
  Vec<Scalar> v = basis_vec(static_cast<std::size_t>(G.order), static_cast<std::size_t>(gi), w.structure.field());
  v[static_cast<std::size_t>(gi)] = (w.alpha(G.identity, G.identity) * w.alpha(g, gi)).inverse();
  return v;
}

Vec<Scalar> twisted_commutator(const TwistedGroupAlgebra& w, int g, int h) {
  const Tensor& m = w.structure.get("m");
  Vec<Scalar> acc = multiply(m, group_element(w, g), group_element(w, h));
  acc = multiply(m, acc, group_element_inverse(w, g));
  return multiply(m, acc, group_element_inverse(w, h));
}

Scalar commutator_scalar(const TwistedGroupAlgebra& w, int g, int h) {
  const GroupTable& G = w.group;
  const int c = G.commutator(g, h);
  Scalar coeff = twisted_commutator(w, g, h)[static_cast<std::size_t>(c)];
  if (c == G.identity) coeff *= w.alpha(G.identity, G.identity);
  return coeff;
}

Scalar alpha_tilde(const TwistedGroupAlgebra& w, const std::vector<std::pair<int, int>>& word) {
  const GroupTable& G = w.group;
  int prod = G.identity;
  for (const auto& [g, h] : word) prod = G.mult(prod, G.commutator(g, h));
  if (prod != G.identity) {
    throw Error(ErrorCode::WordNotRelator, "the commutator product is " + std::to_string(prod) + ", not the identity");
  }
  const Tensor& m = w.structure.get("m");
  Vec<Scalar> acc(w.structure.get("unit").entries());
  for (const auto& [g, h] : word) acc = multiply(m, acc, twisted_commutator(w, g, h));
  const auto id = static_cast<std::size_t>(G.identity);
  return acc[id] * w.alpha(G.identity, G.identity);
}

GenericFormReport mu_and_generic_form(const TwistedGroupAlgebra& w) {
  const GroupTable& G = w.group;
  if (!G.is_abelian()) throw Error(ErrorCode::NotAbelian, "generic form needs an abelian group");
  if (G.decomposition.empty() && G.order > 1) {
    throw Error(ErrorCode::MissingDecomposition, "supply a cyclic decomposition of G");
  }
  const ScalarField& field = w.structure.field();
  GenericFormReport r;
  const auto& dec = G.decomposition;
  const int gens = static_cast<int>(dec.size());
  // Candidates ordered by pairs (i, j) with i > j: c_{x_i, x_j}.
  std::vector<Scalar> candidates;
  for (int i = 0; i < gens; ++i) {
    for (int j = 0; j < gens; ++j) {
      if (i == j) continue;
      const Scalar c = commutator_scalar(w, dec[static_cast<std::size_t>(i)].first, dec[static_cast<std::size_t>(j)].first);
      r.commutation.emplace_back(i, j, c);
    }
  }
  for (int i = 1; i < gens; ++i) {
    for (int j = 0; j < i; ++j) {
      candidates.push_back(commutator_scalar(w, dec[static_cast<std::size_t>(i)].first, dec[static_cast<std::size_t>(j)].first));
    }
  }
  std::vector<int> orders;
  int L = 1;
  for (const auto& c : candidates) {
    orders.push_back(root_of_unity_order(c));
    L = static_cast<int>(lcm_int(L, orders.back()));
  }
  // mu: a candidate of full order if there is one; otherwise assemble the
  // prime-power parts. Either way the choice commutes with Galois twisting.
  std::optional<Scalar> mu;
  for (std::size_t i = 0; i < candidates.size() && !mu; ++i) {
    if (orders[i] == L) mu = candidates[i];
  }
  if (!mu) {
    Scalar acc = Scalar::one(field);
    int rest = L;
    for (int p = 2; rest > 1; ++p) {
      if (rest % p != 0) continue;
      int pe = 1;
      while (rest % p == 0) {
        rest /= p;
        pe *= p;
      }
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (orders[i] % pe == 0) {
          acc *= candidates[i].pow(orders[i] / pe);
          break;
        }
      }
    }
    mu = acc;
  }
  r.mu = *mu;
  r.mu_order = L;
  r.k0_degree = euler_phi(L);
  r.k0 = r.k0_degree == 1 ? "Q" : "Q(zeta_" + std::to_string(L) + ")";

  const Tensor& m = w.structure.get("m");
  const Vec<Scalar> unit(w.structure.get("unit").entries());
  for (const auto& [x, ord] : dec) {
    const Vec<Scalar> p = power_of(m, group_element(w, x), ord, unit);
    auto lam = ratio(p, unit);
    if (!lam) throw Error(ErrorCode::InternalCheckFailed, "U_x^n is not a scalar");
    r.powers.push_back(*lam);
  }
  std::vector<Scalar> mu_powers;
  for (int k = 0; k < std::max(L, 1); ++k) mu_powers.push_back(r.mu.pow(k));
  r.galois_stabilizer = invariant_field_report(mu_powers, field).galois_stabilizer;

  std::ostringstream os;
  os << "K0 = " << r.k0 << " (degree " << r.k0_degree << "), mu = " << r.mu.to_string() << " of order " << L << "\n";
  os << "generators:";
  for (int i = 0; i < gens; ++i) os << " U" << (i + 1);
  os << "\nrelations:\n";
  for (int i = 0; i < gens; ++i) {
    os << "  U" << (i + 1) << "^" << dec[static_cast<std::size_t>(i)].second << " = a" << (i + 1) << "\n";
  }
  for (const auto& [i, j, c] : r.commutation) {
    if (i < j) os << "  U" << (i + 1) << " U" << (j + 1) << " = (" << c.to_string() << ") U" << (j + 1) << " U" << (i + 1) << "\n";
  }
  os << "base ring: " << r.k0 << "[";
  for (int i = 0; i < gens; ++i) os << (i ? ", " : "") << "a" << (i + 1) << "^(+-1)";
  os << "]\n";
  os << "specialization of this algebra:";
  for (int i = 0; i < gens; ++i) os << (i ? ", a" : " a") << (i + 1) << " = " << r.powers[static_cast<std::size_t>(i)].to_string();
  os << "\n";
  r.text = os.str();
  return r;
}

Structure galois_twist(const Structure& s, std::int64_t k) {
  if (!s.field().is_cyclotomic()) {
    if (s.field().is_rational_function()) throw Error(ErrorCode::NotCyclotomic, "Galois twist needs a cyclotomic field");
    return s;
  }
  return s.galois(k);
}

TwistedGroupAlgebra galois_twist(const TwistedGroupAlgebra& w, std::int64_t k) {
  TwistedGroupAlgebra out{w.group, w.alpha, galois_twist(w.structure, k)};
  for (auto& row : out.alpha.alpha) {
    for (auto& x : row) x = x.galois(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Taft algebras

namespace {

/// Straightening engine for the algebra generated by g~_i (letters 0..z-1)
/// and t_i (letters z..2z-1).
class TaftEngine {
 public:
  TaftEngine(const TaftProductParams& p, int n, Scalar zeta) : p_(p), n_(n), zeta_(std::move(zeta)) {
    z_ = static_cast<int>(p.factors.size());
    dim_ = 1;
    for (const auto& f : p.factors) dim_ *= static_cast<std::size_t>(f.n * f.n);
  }

  std::size_t dim() const { return dim_; }
  int factors() const { return z_; }

  /// Exponent vector (e_1..e_z, f_1..f_z) of a basis index.
  std::vector<int> exponents(std::size_t idx) const {
    std::vector<int> e(static_cast<std::size_t>(2 * z_));
    for (int s = 2 * z_ - 1; s >= 0; --s) {
      const auto r = static_cast<std::size_t>(radix(s));
      e[static_cast<std::size_t>(s)] = static_cast<int>(idx % r);
      idx /= r;
    }
    return e;
  }

  std::size_t index_of(const std::vector<int>& e) const {
    std::size_t idx = 0;
    for (int s = 0; s < 2 * z_; ++s) idx = idx * static_cast<std::size_t>(radix(s)) + static_cast<std::size_t>(e[static_cast<std::size_t>(s)]);
    return idx;
  }

  std::vector<int> word_of(std::size_t idx) const {
    const auto e = exponents(idx);
    std::vector<int> w;
    for (int s = 0; s < 2 * z_; ++s) w.insert(w.end(), static_cast<std::size_t>(e[static_cast<std::size_t>(s)]), s);
    return w;
  }

  const Sparse& normalize(const std::vector<int>& word) {
    auto it = memo_.find(word);
    if (it != memo_.end()) return it->second;
    Sparse out = compute(word);
    return memo_.emplace(word, std::move(out)).first->second;
  }

  Sparse product(std::size_t a, std::size_t b) {
    auto w = word_of(a);
    const auto wb = word_of(b);
    w.insert(w.end(), wb.begin(), wb.end());
    return normalize(w);
  }

 private:
  int radix(int slot) const { return p_.factors[static_cast<std::size_t>(slot % z_)].n; }

  Scalar zpow(std::int64_t e) const { return zeta_.pow(mod_int(e, n_)); }

  Sparse scaled(const Scalar& c, const Sparse& s) const {
    Sparse out;
    if (c.is_zero()) return out;
    for (const auto& [k, v] : s) out.emplace(k, c * v);
    return out;
  }

  Sparse compute(const std::vector<int>& w) {
    const ScalarField& f = p_.field;
    // Runs of n_i equal letters collapse to a_i or b_i.
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      const int letter = w[pos];
      const auto len = static_cast<std::size_t>(radix(letter));
      if (pos + len > w.size()) break;
      bool run = true;
      for (std::size_t k = 1; k < len && run; ++k) run = w[pos + k] == letter;
      if (!run) continue;
      const auto& fac = p_.factors[static_cast<std::size_t>(letter % z_)];
      const Scalar& c = letter < z_ ? fac.a : fac.b;
      if (c.is_zero()) return {};
      std::vector<int> rest(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
      rest.insert(rest.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + len), w.end());
      return scaled(c, normalize(rest));
    }
    for (std::size_t pos = 0; pos + 1 < w.size(); ++pos) {
      const int x = w[pos], y = w[pos + 1];
      if (x <= y) continue;
      std::vector<int> swapped = w;
      std::swap(swapped[pos], swapped[pos + 1]);
      if (x < z_) {
        // g~_x g~_y = zeta^{b_xy} g~_y g~_x
        return scaled(zpow(p_.bexp[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]), normalize(swapped));
      }
      if (y < z_) {
        // t_j g~_i = zeta^{-c_i delta_ij} g~_i t_j
        const int j = x - z_, i = y;
        const std::int64_t e = i == j ? -p_.factors[static_cast<std::size_t>(i)].c : 0;
        return scaled(zpow(e), normalize(swapped));
      }
      // t_i t_j = t_j t_i + lambda_ij g~_i^-1 g~_j^-1 for i > j
      const int i = x - z_, j = y - z_;
      Sparse out = normalize(swapped);
      const Scalar& lam = p_.lambda[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!lam.is_zero()) {
        const auto& fi = p_.factors[static_cast<std::size_t>(i)];
        const auto& fj = p_.factors[static_cast<std::size_t>(j)];
        std::vector<int> inh(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
        inh.insert(inh.end(), static_cast<std::size_t>(fi.n - 1), i);
        inh.insert(inh.end(), static_cast<std::size_t>(fj.n - 1), j);
        inh.insert(inh.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + 2), w.end());
        const Scalar c = lam * fi.a.inverse() * fj.a.inverse();
        for (const auto& [k, v] : normalize(inh)) add_to(out, k, c * v);
      }
      return out;
    }
    std::vector<int> e(static_cast<std::size_t>(2 * z_), 0);
    for (int letter : w) ++e[static_cast<std::size_t>(letter)];
    return Sparse{{index_of(e), Scalar::one(f)}};
  }

  TaftProductParams p_;
  int n_;
  Scalar zeta_;
  int z_ = 0;
  std::size_t dim_ = 1;
  std::map<std::vector<int>, Sparse> memo_;
};

std::string operator_name(const char* base, int i, bool single) {
  return single ? std::string(base) : std::string(base) + std::to_string(i + 1);
}

/// Completes lambda_ji = -zeta^{b_ij} lambda_ij when only one of the pair is given.
TaftProductParams completed(TaftProductParams p, const Scalar& zeta, int n) {
  const auto z = p.factors.size();
  for (std::size_t i = 0; i < z; ++i) {
    for (std::size_t j = 0; j < z; ++j) {
      if (i == j) continue;
      if (p.lambda[j][i].is_zero() && !p.lambda[i][j].is_zero()) {
        p.lambda[j][i] = -zeta.pow(mod_int(p.bexp[i][j], n)) * p.lambda[i][j];
      }
    }
  }
  return p;
}

int product_order(const std::vector<TaftFactor>& fs) {
  int n = 1;
  for (const auto& f : fs) n = static_cast<int>(lcm_int(n, f.n));
  return n;
}

void fill_defaults(TaftProductParams& p) {
  const auto z = p.factors.size();
  if (p.bexp.empty()) p.bexp.assign(z, std::vector<int>(z, 0));
  if (p.lambda.empty()) p.lambda.assign(z, std::vector<Scalar>(z, Scalar::zero(p.field)));
}

}  // namespace

std::optional<std::string> taft_product_violation(const TaftProductParams& in) {
  TaftProductParams p = in;
  fill_defaults(p);
  const auto z = p.factors.size();
  if (z == 0) return "at least one factor is required";
  if (p.bexp.size() != z || p.lambda.size() != z) return "b and lambda must be z x z matrices";
  for (std::size_t i = 0; i < z; ++i) {
    if (p.bexp[i].size() != z || p.lambda[i].size() != z) return "b and lambda must be z x z matrices";
  }
  for (const auto& f : p.factors) {
    if (f.n < 2) return "n_i >= 2 is required";
    if (f.a.is_zero()) return "a_i must be nonzero";
    if (f.a.field() != p.field || f.b.field() != p.field) return "parameters must lie in the declared field";
  }
  const int n = product_order(p.factors);
  if (!(p.field.is_cyclotomic() && p.field.order % n == 0) && n > 2) {
    return "the field must contain a primitive " + std::to_string(n) + "-th root of unity";
  }
  const auto is_one = [&](std::int64_t e) { return mod_floor(e, n) == 0; };
  for (std::size_t i = 0; i < z; ++i) {
    const auto& fi = p.factors[i];
    if (n / gcd_int(fi.c, n) != fi.n) return "zeta^{c_" + std::to_string(i + 1) + "} must be a primitive n_i-th root of unity";
  }
  const Scalar zeta = primitive_root(p.field, n);
  const TaftProductParams q = completed(p, zeta, n);
  for (std::size_t i = 0; i < z; ++i) {
    const std::string si = std::to_string(i + 1);
    if (!is_one(p.bexp[i][i])) return "zeta^{b_" + si + si + "} = 1 is required";
    if (!q.lambda[i][i].is_zero()) return "lambda_" + si + si + " = 0 is required";
    for (std::size_t j = 0; j < z; ++j) {
      if (i == j) continue;
      const std::string sij = si + std::to_string(j + 1);
      const std::string sji = std::to_string(j + 1) + si;
      if (!is_one(static_cast<std::int64_t>(p.bexp[i][j]) * p.factors[i].n)) {
        return "zeta^{b_" + sij + "} must be an n_" + si + "-th root of unity";
      }
      if (!is_one(static_cast<std::int64_t>(p.bexp[i][j]) + p.bexp[j][i])) return "zeta^{b_" + sij + " + b_" + sji + "} = 1 is required";
      if (q.lambda[i][j].is_zero() != q.lambda[j][i].is_zero() ||
          q.lambda[j][i] != -zeta.pow(mod_int(p.bexp[i][j], n)) * q.lambda[i][j]) {
        return "lambda_" + sji + " = -zeta^{b_" + sij + "} lambda_" + sij + " is required";
      }
      if (!q.lambda[i][j].is_zero()) {
        const std::string ci = std::to_string(i + 1), cj = std::to_string(j + 1);
        if (!is_one(static_cast<std::int64_t>(p.bexp[i][j]) - p.factors[j].c) ||
            !is_one(static_cast<std::int64_t>(p.bexp[i][j]) + p.factors[i].c)) {
          return "lambda_" + sij + " != 0 requires b_" + sij + " = -c_" + ci + " = c_" + cj + " (mod n)";
        }
        for (std::size_t k = 0; k < z; ++k) {
          if (k == i || k == j) continue;
          if (!is_one(static_cast<std::int64_t>(p.bexp[i][k]) + p.bexp[j][k])) {
            return "lambda_" + sij + " != 0 requires b_" + si + std::to_string(k + 1) + " + b_" + std::to_string(j + 1) +
                   std::to_string(k + 1) + " = 0 (mod n)";
          }
        }
      }
    }
  }
  return std::nullopt;
}

TaftAlgebra build_taft_product(const TaftProductParams& in) {
  TaftProductParams p = in;
  fill_defaults(p);
  if (auto bad = taft_product_violation(p)) throw Error(ErrorCode::ParamInvalid, *bad);
  const int n = product_order(p.factors);
  const Scalar zeta = primitive_root(p.field, n);
  p = completed(p, zeta, n);
  const ScalarField& field = p.field;
  const int z = static_cast<int>(p.factors.size());
  const bool single = z == 1;

  TaftEngine w(p, n, zeta);
  const std::size_t dim = w.dim();
  const int d = static_cast<int>(dim);

  // H = tensor product of the H_i: same shape with a = 1, b = 0, commuting factors.
  TaftProductParams hp = p;
  for (auto& f : hp.factors) {
    f.a = Scalar::one(field);
    f.b = Scalar::zero(field);
  }
  for (auto& row : hp.bexp) std::fill(row.begin(), row.end(), 0);
  for (auto& row : hp.lambda) std::fill(row.begin(), row.end(), Scalar::zero(field));
  TaftEngine h(hp, n, zeta);

  std::vector<std::vector<Sparse>> wt(dim, std::vector<Sparse>(dim));
  std::vector<std::vector<Sparse>> ht(dim, std::vector<Sparse>(dim));
  Tensor m(TensorType{1, 2}, d, field);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      wt[a][b] = w.product(a, b);
      ht[a][b] = h.product(a, b);
      for (const auto& [k, v] : wt[a][b]) m.at({static_cast<int>(k)}, {static_cast<int>(a), static_cast<int>(b)}) = v;
    }
  }
  if (associativity_violation(m)) throw Error(ErrorCode::InternalCheckFailed, "Taft product is not associative");

  // Coaction into W (x) H, pairs keyed by w_index * dim + h_index.
  const auto mul_wh = [&](const Sparse& x, const Sparse& y) {
    Sparse out;
    for (const auto& [kx, vx] : x) {
      for (const auto& [ky, vy] : y) {
        const auto& pw = wt[kx / dim][ky / dim];
        const auto& ph = ht[kx % dim][ky % dim];
        for (const auto& [a, va] : pw) {
          for (const auto& [b, vb] : ph) add_to(out, a * dim + b, vx * vy * va * vb);
        }
      }
    }
    return out;
  };
  std::vector<Sparse> rho_letter(static_cast<std::size_t>(2 * z));
  for (int i = 0; i < z; ++i) {
    const int ni = p.factors[static_cast<std::size_t>(i)].n;
    std::vector<int> e(static_cast<std::size_t>(2 * z), 0);
    e[static_cast<std::size_t>(i)] = 1;
    const std::size_t gi = w.index_of(e);
    rho_letter[static_cast<std::size_t>(i)] = Sparse{{gi * dim + gi, Scalar::one(field)}};
    std::vector<int> et(static_cast<std::size_t>(2 * z), 0), eg(static_cast<std::size_t>(2 * z), 0), egx(static_cast<std::size_t>(2 * z), 0);
    et[static_cast<std::size_t>(z + i)] = 1;
    eg[static_cast<std::size_t>(i)] = ni - 1;
    egx[static_cast<std::size_t>(i)] = ni - 1;
    egx[static_cast<std::size_t>(z + i)] = 1;
    Sparse rt;
    add_to(rt, w.index_of(et) * dim + h.index_of(eg), Scalar::one(field));
    add_to(rt, 0 * dim + h.index_of(egx), Scalar::one(field));
    rho_letter[static_cast<std::size_t>(z + i)] = rt;
  }
  std::vector<Sparse> rho(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    Sparse acc{{0, Scalar::one(field)}};
    for (int letter : w.word_of(a)) acc = mul_wh(acc, rho_letter[static_cast<std::size_t>(letter)]);
    rho[a] = acc;
  }
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      Sparse lhs;
      for (const auto& [k, v] : wt[a][b]) {
        for (const auto& [kk, vv] : rho[k]) add_to(lhs, kk, v * vv);
      }
      if (lhs != mul_wh(rho[a], rho[b])) throw Error(ErrorCode::InternalCheckFailed, "coaction is not multiplicative");
    }
  }

  Structure s(d, field);
  s.add("m", m);
  s.add("unit", unit_tensor(basis_vec(dim, 0, field), d, field));
  const Scalar zero = Scalar::zero(field);
  for (int i = 0; i < z; ++i) {
    const auto& fi = p.factors[static_cast<std::size_t>(i)];
    const Scalar zi = zeta.pow(mod_int(fi.c, n));
    const auto functional = [&](std::size_t hidx, bool is_gamma) {
      const auto e = h.exponents(hidx);
      for (int k = 0; k < z; ++k) {
        const int f = e[static_cast<std::size_t>(z + k)];
        if (k == i && !is_gamma) {
          if (f != 1) return zero;
        } else if (f != 0) {
          return zero;
        }
      }
      return is_gamma ? zi.pow(e[static_cast<std::size_t>(i)]) : Scalar::one(field);
    };
    Matrix<Scalar> tg(dim, dim, zero), tx(dim, dim, zero);
    for (std::size_t a = 0; a < dim; ++a) {
      for (const auto& [k, v] : rho[a]) {
        tg(k / dim, a) += v * functional(k % dim, true);
        tx(k / dim, a) += v * functional(k % dim, false);
      }
    }
    for (int e = 1; e < fi.n; ++e) {
      if (is_identity(mat_pow(tg, e))) throw Error(ErrorCode::InternalCheckFailed, "gamma has order below n");
    }
    if (!is_identity(mat_pow(tg, fi.n))) throw Error(ErrorCode::InternalCheckFailed, "gamma^n is not the identity");
    if (!is_zero_matrix(mat_pow(tx, fi.n))) throw Error(ErrorCode::InternalCheckFailed, "xi^n is not zero");
    if (tg * tx != scale(zi, tx * tg)) throw Error(ErrorCode::InternalCheckFailed, "gamma xi gamma^-1 differs from zeta^c xi");
    for (int e = 0; e < fi.n; ++e) {
      const auto eig = joint_kernel({shifted(tg, zi.pow(e))}, dim, field);
      if (eig.size() != dim / static_cast<std::size_t>(fi.n)) {
        throw Error(ErrorCode::InternalCheckFailed, "gamma eigenspace has dimension " + std::to_string(eig.size()));
      }
    }
    s.add(operator_name("gamma", i, single), operator_tensor(tg, d, field));
    s.add(operator_name("xi", i, single), operator_tensor(tx, d, field));
  }
  return TaftAlgebra{p, n, zeta, std::move(s)};
}

TaftAlgebra build_taft(const TaftParams& p) {
  if (p.n < 2) throw Error(ErrorCode::ParamInvalid, "n >= 2 is required");
  if (p.a.is_zero()) throw Error(ErrorCode::ParamInvalid, "a must be nonzero");
  TaftProductParams q;
  q.field = p.field;
  q.factors = {TaftFactor{p.n, 1, p.a, p.b}};
  return build_taft_product(q);
}

TaftInvariants extract_taft_invariants(const Structure& s) {
  for (const char* name : {"m", "gamma", "xi"}) {
    if (!s.has(name)) throw Error(ErrorCode::NotTaftShaped, std::string("missing tensor ") + name);
  }
  const ScalarField& field = s.field();
  const auto dim = static_cast<std::size_t>(s.dim());
  int n = 1;
  while (static_cast<std::size_t>(n * n) < dim) ++n;
  if (static_cast<std::size_t>(n * n) != dim || n < 2) throw Error(ErrorCode::NotTaftShaped, "dimension is not n^2");
  const Scalar zeta = primitive_root(field, n);
  const Tensor& m = s.get("m");
  const Matrix<Scalar> tg = as_map(s.get("gamma")), tx = as_map(s.get("xi"));
  const auto unit = find_unit(s);
  if (!unit) throw Error(ErrorCode::NotTaftShaped, "no unit");

  for (int i = 0; i < n; ++i) {
    const auto wi = joint_kernel({shifted(tg, zeta.pow(i))}, dim, field);
    if (wi.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::NotTaftShaped, "dim W_" + std::to_string(i) + " = " + std::to_string(wi.size()) + ", expected " +
                                                std::to_string(n));
    }
  }
  const auto line = joint_kernel({shifted(tg, zeta), tx}, dim, field);
  if (line.size() != 1) {
    throw Error(ErrorCode::NotTaftShaped, "dim(W_1 cap ker T_xi) = " + std::to_string(line.size()) + ", expected 1");
  }
  const Vec<Scalar> u = normalized(line[0]);
  const auto a = ratio(power_of(m, u, n, *unit), *unit);
  if (!a || a->is_zero()) throw Error(ErrorCode::NotTaftShaped, "u^n is not a nonzero multiple of 1");

  TaftInvariants out;
  out.a = *a;
  const Matrix<Scalar> lu = left_mult(m, u), ru = right_mult(m, u);
  out.wij_dims.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto wij = joint_kernel({shifted(tg, zeta.pow(i)), lu - scale(zeta.pow(j), ru)}, dim, field);
      out.wij_dims[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>(wij.size());
      if (wij.size() != 1) {
        throw Error(ErrorCode::NotTaftShaped, "dim W_{" + std::to_string(i) + "," + std::to_string(j) + "} = " +
                                                  std::to_string(wij.size()) + ", expected 1");
      }
    }
  }
  const auto tline = joint_kernel({shifted(tg, zeta.pow(n - 1)), lu - scale(zeta, ru)}, dim, field);
  const auto xi_t = ratio(tx * tline[0], *unit);
  if (!xi_t || xi_t->is_zero()) throw Error(ErrorCode::NotTaftShaped, "T_xi does not map W_{-1,1} onto the unit line");
  Vec<Scalar> t = tline[0];
  for (auto& x : t) x /= *xi_t;
  const auto b = ratio(power_of(m, t, n, *unit), *unit);
  if (!b) throw Error(ErrorCode::NotTaftShaped, "t^n is not a multiple of 1");
  out.b = *b;
  out.note = "a is determined only up to n-th powers; the representative depends on the choice of u";
  return out;
}

TaftProductInvariants extract_product_invariants(const Structure& s, const std::vector<TaftFactor>& shape) {
  const int z = static_cast<int>(shape.size());
  if (z == 0) throw Error(ErrorCode::ParamInvalid, "empty factor shape");
  const bool single = z == 1;
  const ScalarField& field = s.field();
  const auto dim = static_cast<std::size_t>(s.dim());
  const int n = product_order(shape);
  const Scalar zeta = primitive_root(field, n);
  const Tensor& m = s.get("m");
  const auto unit = find_unit(s);
  if (!unit) throw Error(ErrorCode::NotTaftShaped, "no unit");
  std::vector<Matrix<Scalar>> tg, tx;
  for (int i = 0; i < z; ++i) {
    const auto g = operator_name("gamma", i, single), x = operator_name("xi", i, single);
    if (!s.has(g) || !s.has(x)) throw Error(ErrorCode::NotTaftShaped, "missing " + g + " or " + x);
    tg.push_back(as_map(s.get(g)));
    tx.push_back(as_map(s.get(x)));
  }
  const Scalar one = Scalar::one(field);
  const auto zc = [&](int i, int sign) { return zeta.pow(mod_int(static_cast<std::int64_t>(sign) * shape[static_cast<std::size_t>(i)].c, n)); };

  std::vector<Vec<Scalar>> u(static_cast<std::size_t>(z)), uinv(static_cast<std::size_t>(z)), t(static_cast<std::size_t>(z));
  for (int i = 0; i < z; ++i) {
    std::vector<Matrix<Scalar>> conds(tx.begin(), tx.end());
    for (int k = 0; k < z; ++k) conds.push_back(shifted(tg[static_cast<std::size_t>(k)], k == i ? zc(i, 1) : one));
    const auto line = joint_kernel(conds, dim, field);
    if (line.size() != 1) {
      throw Error(ErrorCode::NotTaftShaped, "group-like line for factor " + std::to_string(i + 1) + " has dimension " +
                                                std::to_string(line.size()));
    }
    u[static_cast<std::size_t>(i)] = normalized(line[0]);
    const auto a = ratio(power_of(m, u[static_cast<std::size_t>(i)], shape[static_cast<std::size_t>(i)].n, *unit), *unit);
    if (!a || a->is_zero()) throw Error(ErrorCode::NotTaftShaped, "u^n is not a nonzero multiple of 1");
    uinv[static_cast<std::size_t>(i)] = power_of(m, u[static_cast<std::size_t>(i)], shape[static_cast<std::size_t>(i)].n - 1, *unit);
    for (auto& x : uinv[static_cast<std::size_t>(i)]) x /= *a;
  }
  for (int i = 0; i < z; ++i) {
    std::vector<Matrix<Scalar>> conds;
    for (int k = 0; k < z; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      conds.push_back(shifted(tg[ks], k == i ? zc(i, -1) : one));
      const Matrix<Scalar> lu = left_mult(m, u[ks]), ru = right_mult(m, u[ks]);
      conds.push_back(lu - scale(k == i ? zc(i, 1) : one, ru));
      if (k != i) conds.push_back(tx[ks]);
    }
    const auto line = joint_kernel(conds, dim, field);
    if (line.size() != 1) {
      throw Error(ErrorCode::NotTaftShaped, "skew-primitive line for factor " + std::to_string(i + 1) + " has dimension " +
                                                std::to_string(line.size()));
    }
    const auto xi_t = ratio(tx[static_cast<std::size_t>(i)] * line[0], *unit);
    if (!xi_t || xi_t->is_zero()) throw Error(ErrorCode::NotTaftShaped, "T_xi does not map t onto the unit line");
    t[static_cast<std::size_t>(i)] = line[0];
    for (auto& x : t[static_cast<std::size_t>(i)]) x /= *xi_t;
  }

  TaftProductInvariants out;
  out.zeta_bij.assign(static_cast<std::size_t>(z), std::vector<Scalar>(static_cast<std::size_t>(z), one));
  for (int i = 0; i < z; ++i) {
    const auto is = static_cast<std::size_t>(i);
    const auto b = ratio(power_of(m, t[is], shape[is].n, *unit), *unit);
    if (!b) throw Error(ErrorCode::NotTaftShaped, "t_" + std::to_string(i + 1) + "^n is not a multiple of 1");
    out.b.push_back(*b);
    for (int j = 0; j < z; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const auto r = ratio(multiply(m, u[is], u[js]), multiply(m, u[js], u[is]));
      if (!r) throw Error(ErrorCode::NotTaftShaped, "group-like elements do not skew-commute");
      out.zeta_bij[is][js] = *r;
    }
  }
  std::map<std::pair<int, int>, Scalar> lam;
  for (int i = 0; i < z; ++i) {
    for (int j = 0; j < z; ++j) {
      if (i == j) continue;
      const auto is = static_cast<std::size_t>(i), js = static_cast<std::size_t>(j);
      Vec<Scalar> comm = multiply(m, t[is], t[js]);
      const Vec<Scalar> rev = multiply(m, t[js], t[is]);
      for (std::size_t k = 0; k < dim; ++k) comm[k] -= rev[k];
      if (is_zero_vector(comm)) continue;
      const auto l = ratio(comm, multiply(m, uinv[is], uinv[js]));
      if (!l) throw Error(ErrorCode::NotTaftShaped, "t_i t_j - t_j t_i is not a multiple of g_i^-1 g_j^-1");
      lam.emplace(std::make_pair(i, j), *l);
      if (i < j) {
        out.lambda.emplace(std::make_pair(i, j), *l);
        const auto big = ratio(power_of(m, comm, shape[is].n, *unit), *unit);
        if (!big) throw Error(ErrorCode::NotTaftShaped, "commutator power is not a multiple of 1");
        out.Lambda.emplace(std::make_pair(i, j), *big);
      }
    }
  }
  // Simple cycles i_1 ~ i_2 ~ ... ~ i_m ~ i_1 (m >= 3), listed once per
  // orientation class: i_1 minimal and i_2 < i_m.
  std::vector<int> path;
  std::function<void(int)> extend = [&](int v) {
    if (path.size() >= 3 && lam.count({v, path.front()}) && path[1] < path.back()) {
      Scalar val = one;
      for (std::size_t k = 0; k < path.size(); ++k) {
        const Scalar& e = lam.at({path[k], path[(k + 1) % path.size()]});
        val *= k % 2 == 0 ? e : e.inverse();
      }
      out.cycles.emplace(path, val);
    }
    for (int w = path.front() + 1; w < z; ++w) {
      if (std::find(path.begin(), path.end(), w) != path.end() || !lam.count({v, w})) continue;
      path.push_back(w);
      extend(w);
      path.pop_back();
    }
  };
  for (int start = 0; start < z; ++start) {
    path = {start};
    extend(start);
  }
  return out;
}

}  // namespace invforge
