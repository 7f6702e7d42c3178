// Acceptance gate. Prints one PASS/FAIL line per criterion; arguments select
// criteria by number (default: all); --seed N reseeds the randomized criteria.
// Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "invforge/autlie.hpp"
#include "invforge/closure.hpp"
#include "invforge/identities.hpp"
#include "invforge/io.hpp"
#include "invforge/morphcalc.hpp"
#include "invforge/structures.hpp"
#include "invforge/traceinv.hpp"
#include "support.hpp"

using namespace invforge;
using namespace testing_support;

namespace {

const std::filesystem::path kData = INVFORGE_DATA_DIR;
const ScalarField kQ = ScalarField::rational();
std::uint64_t g_seed = kSeed;

class Checks {
 public:
  void operator()(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    failed_ += !ok;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream os;
    os << count_ << " checks";
    if (failed_) {
      os << ", " << failed_ << " failed:";
      for (const auto& f : failures_) os << " [" << f << "]";
    }
    return os.str();
  }

 private:
  int count_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

std::string str(const Scalar& s) { return s.to_string(); }

PresentedMap as_map_value(const Value& v) { return std::get<PresentedMap>(v); }
SpacePtr as_space(const Value& v) { return std::get<SpacePtr>(v); }

Matrix<Scalar> unit_matrix(std::size_t n, std::size_t i, std::size_t j) {
  Matrix<Scalar> m(n, n, Scalar::zero(kQ));
  m(i, j) = Scalar::one(kQ);
  return m;
}

int euler_phi_oracle(int n) {
  int c = 0;
  for (int k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
  return c;
}

/// Multiplicative order found by repeated multiplication, capped.
int order_oracle(const Scalar& x, int cap) {
  Scalar p = x;
  for (int k = 1; k <= cap; ++k) {
    if (p.is_one()) return k;
    p = p * x;
  }
  return 0;
}

std::vector<Vec<Scalar>> unit_vectors(std::size_t n, const ScalarField& f) {
  std::vector<Vec<Scalar>> out;
  for (std::size_t i = 0; i < n; ++i) {
    Vec<Scalar> e(n, Scalar::zero(f));
    e[i] = Scalar::one(f);
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion1(Checks& check) {
  const Structure s = parse_structure_file(kData / "nilpotent3.json");
  const Bindings b{{"Q", parse_expression("quotient(space(1,0), image(m))")},
                   {"ind", parse_expression("induced(m, tensor(Q,Q), image(m))")}};
  const Expression tr = parse_expression("trace(compose(invert(gramR(ind)), gramL(ind)))");
  const Scalar t = Scalar::variable(s.field());
  const Scalar v = std::get<Scalar>(eval_expression(tr, s, b));
  check(v == t + Scalar::one(s.field()), "trace over Q(t) is " + str(v));
  for (const char* x : {"2", "3", "-1/2", "7", "-4"}) {
    const Rational r(x);
    const Scalar vx = std::get<Scalar>(eval_expression(tr, s.specialize(r), b));
    check(vx == Scalar(Rational(r + 1)), std::string("t = ") + x + " gives " + str(vx));
  }
}

void criterion2(Checks& check) {
  const Structure s = parse_structure_file(kData / "jordan_zeta8.json");
  const ScalarField f = s.field();
  const Bindings b{{"V", parse_expression("image(add(compose(T,T), scale(\"-2\", id)))")}};
  const auto v = as_space(eval_expression(Expression::ref("V"), s, b));
  check(v->size() == 1, "image of T^2 - 2 has dimension " + std::to_string(v->size()));
  const auto ind = as_map_value(eval_expression(parse_expression("induced(T, V, V)"), s, b));
  const Scalar root2 = Scalar::zeta(f) + Scalar::zeta(f, -1);
  check(root2 * root2 == Scalar::from_int(f, 2), "zeta_8 + zeta_8^-1 squares to 2");
  check(ind.matrix.rows() == 1 && ind.matrix.cols() == 1 && ind.matrix(0, 0) == -root2, "induced action is -sqrt 2");
  const auto st = compute_closure(s, {1, 1, 64});
  const auto rep = invariant_field_report(st);
  check(st.converged, "closure converged");
  check(rep.q_basis.size() == 1 && rep.q_basis[0] == Scalar::one(f), "X^{0,0} = Q");
}

void criterion3(Checks& check) {
  std::mt19937_64 rng(g_seed + 3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cols = static_cast<std::size_t>(small_int(rng, 1, 5));  // dim U
    const auto rows = static_cast<std::size_t>(small_int(rng, 1, 4));  // dim V
    const auto inner = static_cast<std::size_t>(small_int(rng, 0, 4));
    Matrix<Scalar> t(rows, cols, Scalar::zero(kQ));
    if (inner > 0) t = random_matrix(rng, rows, inner, kQ) * random_matrix(rng, inner, cols, kQ);
    std::vector<Vec<Scalar>> trows;
    for (std::size_t i = 0; i < rows; ++i) {
      Vec<Scalar> r;
      for (std::size_t j = 0; j < cols; ++j) r.push_back(t(i, j));
      trows.push_back(r);
    }
    const int rk = static_cast<int>(oracle_rank(to_rational_rows(trows)));
    const auto whole = unit_vectors(cols, kQ);
    for (int k = 1; k <= 6; ++k) {
      const auto img = antisym_image(t, k, kQ);
      const std::string tag = "trial " + std::to_string(trial) + " k " + std::to_string(k);
      if (k < rk) {
        check(same_span(img, whole), tag + ": expected U");
      } else if (k > rk) {
        check(img.empty(), tag + ": expected 0");
      } else {
        // Ker T by the oracle: independent vectors killed by T, as many as cols - rank.
        bool killed = true;
        for (const auto& v : img) {
          for (std::size_t i = 0; i < rows; ++i) {
            Scalar acc = Scalar::zero(kQ);
            for (std::size_t j = 0; j < cols; ++j) acc += t(i, j) * v[j];
            killed = killed && acc.is_zero();
          }
        }
        check(killed && oracle_rank(to_rational_rows(img)) == cols - static_cast<std::size_t>(rk), tag + ": expected Ker T");
      }
    }
  }
}

void criterion4(Checks& check) {
  const Structure m2 = parse_structure_file(kData / "m2.json");
  check(multilinear_identity_space(m2, 2).basis.empty(), "M2 degree 2 is 0");
  check(multilinear_identity_space(m2, 3).basis.empty(), "M2 degree 3 is 0");
  const auto d4 = multilinear_identity_space(m2, 4);
  Vec<Scalar> sign;
  for (const auto& p : d4.perms) sign.push_back(Scalar::from_int(kQ, perm_sign(p)));
  auto with = d4.basis;
  with.push_back(sign);
  check(!d4.basis.empty() && oracle_rank(to_rational_rows(with)) == oracle_rank(to_rational_rows(d4.basis)),
        "sign vector in the degree-4 space");
  // The standard polynomial vanishes on every basis quadruple of M2.
  const auto e = unit_vectors(4, kQ);
  bool vanishes = true;
  for (int a = 0; a < 4 && vanishes; ++a) {
    for (int b = 0; b < 4 && vanishes; ++b) {
      for (int c = 0; c < 4 && vanishes; ++c) {
        for (int d = 0; d < 4 && vanishes; ++d) {
          vanishes = is_zero_vector(evaluate_identity(m2.get("m"), d4.perms, sign, {e[a], e[b], e[c], e[d]}));
        }
      }
    }
  }
  check(vanishes, "s_4 vanishes on M2");

  const Structure s9 = parse_structure_file(kData / "nilpotent3.json");
  check(multilinear_identity_space(s9, 2).basis.empty(), "nilpotent algebra degree 2 is 0");
  check(multilinear_identity_space(s9, 3).basis.size() == 6, "nilpotent algebra degree 3 is 6");

  const Structure c2 = parse_structure_file(kData / "comm2.json");
  const auto sp = multilinear_identity_space(c2, 2);
  check(sp.basis.size() == 1, "commutative degree 2 is 1-dimensional");
  if (sp.basis.size() == 1) {
    // perms are [0,1], [1,0]: X1X2 - X2X1
    check(sp.basis[0] == Vec<Scalar>{Scalar::one(kQ), -Scalar::one(kQ)}, "commutator");
  }
}

void criterion5(Checks& check) {
  const ScalarField f = ScalarField::cyclotomic(3);
  const GroupTable g = GroupTable::cyclic_product({3, 3});
  const auto w = build_twisted_group_algebra(g, bicharacter_cocycle(3, f));
  const int gg = 3, hh = 1;  // g = (1,0), h = (0,1)
  const auto sp = graded_identity_space(w.structure, {gg, hh});
  check(sp.basis.size() == 1, "bidegree (g,h) space is 1-dimensional");
  if (sp.basis.size() != 1) return;
  // X_h X_g - zeta X_g X_h with X1 = X_g, X2 = X_h: coefficients (-zeta, 1) on ([0,1], [1,0]).
  const Scalar zeta = Scalar::zeta(f);
  const Vec<Scalar>& v = sp.basis[0];
  check(v[0] * Scalar::one(f) == -zeta * v[1], "proportional to X_h X_g - zeta X_g X_h");
  const Vec<Scalar> target{-zeta, Scalar::one(f)};
  check(is_zero_vector(evaluate_identity(w.structure.get("m"), sp.perms, target,
                                         {group_element(w, gg), group_element(w, hh)})),
        "vanishes on U_g, U_h");
}

void criterion6(Checks& check) {
  for (int n : {2, 3, 4}) {
    const ScalarField f = ScalarField::cyclotomic(n);
    const GroupTable g = GroupTable::cyclic_product({n, n});
    const Cocycle2 alpha = bicharacter_cocycle(n, f);
    const auto w = build_twisted_group_algebra(g, alpha);
    const auto r = mu_and_generic_form(w);
    const std::string tag = "n = " + std::to_string(n);
    check(order_oracle(r.mu, 4 * n) == n, tag + ": mu is a primitive root");
    const int phi = euler_phi_oracle(n);
    check(r.k0_degree == phi, tag + ": K0 degree");
    check(r.k0 == (phi == 1 ? std::string("Q") : "Q(zeta_" + std::to_string(n) + ")"), tag + ": K0 is " + r.k0);
    // Four-fold product on (coefficient, element) pairs with the cocycle formula.
    for (int x = 0; x < g.order; ++x) {
      for (int y = 0; y < g.order; ++y) {
        const auto mul = [&](std::pair<Scalar, int> a, std::pair<Scalar, int> b) {
          return std::pair<Scalar, int>{a.first * b.first * alpha(a.second, b.second), g.mult(a.second, b.second)};
        };
        const auto inv = [&](int z) {
          return std::pair<Scalar, int>{(alpha(z, g.inv(z)) * alpha(g.identity, g.identity)).inverse(), g.inv(z)};
        };
        const auto o = mul(mul(mul({Scalar::one(f), x}, {Scalar::one(f), y}), inv(x)), inv(y));
        Vec<Scalar> expect(static_cast<std::size_t>(g.order), Scalar::zero(f));
        expect[static_cast<std::size_t>(o.second)] = o.first;
        check(twisted_commutator(w, x, y) == expect, tag + ": w_{" + std::to_string(x) + "," + std::to_string(y) + "}");
      }
    }
  }
}

void criterion7(Checks& check) {
  const int n = 4;
  const ScalarField f = ScalarField::cyclotomic(n);
  const auto w = build_twisted_group_algebra(GroupTable::cyclic_product({n, n}), bicharacter_cocycle(n, f));
  const auto r = mu_and_generic_form(w);
  for (int k : {1, 3}) {
    const auto tw = galois_twist(w, k);
    const auto rk = mu_and_generic_form(tw);
    const std::string tag = "k = " + std::to_string(k);
    check(rk.mu == r.mu.galois(k), tag + ": mu maps to sigma_k(mu)");
    const bool fixes = r.mu.galois(k) == r.mu;
    const bool stabilizer_has = std::find(r.galois_stabilizer.begin(), r.galois_stabilizer.end(), k) != r.galois_stabilizer.end();
    check(fixes == stabilizer_has, tag + ": stabilizer membership");
    const bool preserved = rk.mu == r.mu && rk.text == r.text && rk.powers == r.powers;
    check(preserved == fixes, tag + ": invariants preserved exactly when sigma_k fixes Q(mu)");
  }
  check(r.galois_stabilizer == std::vector<int>{1}, "stabilizer of Q(zeta_4) is {1}");
}

void criterion8(Checks& check) {
  for (int n : {2, 3}) {
    const ScalarField f = ScalarField::cyclotomic(n);
    const Scalar a = Scalar::from_int(f, 3), b = n == 2 ? Scalar::from_int(f, 5) : Scalar::zeta(f) - Scalar::one(f);
    const std::string tag = "n = " + std::to_string(n);
    const auto t = build_taft({f, n, a, b});
    const Tensor& m = t.structure.get("m");
    check(!associativity_violation(m).has_value(), tag + ": associative");
    const Matrix<Scalar> gam = as_map(t.structure.get("gamma")), xi = as_map(t.structure.get("xi"));
    const std::size_t d = gam.rows();
    Matrix<Scalar> gp = gam, xp = xi;
    for (int k = 1; k < n; ++k) {
      gp = gp * gam;
      xp = xp * xi;
    }
    check(gp == Matrix<Scalar>::identity(d, Scalar::zero(f), Scalar::one(f)), tag + ": gamma^n = 1");
    check(is_zero_vector(xp.data()), tag + ": xi^n = 0");
    // gamma is an algebra automorphism.
    const auto basis = unit_vectors(d, f);
    bool mult = true;
    for (const auto& u : basis) {
      for (const auto& v : basis) mult = mult && gam * multiply(m, u, v) == multiply(m, gam * u, gam * v);
    }
    check(mult, tag + ": gamma multiplicative");
    const auto inv = extract_taft_invariants(t.structure);
    bool ones = !inv.wij_dims.empty();
    for (const auto& row : inv.wij_dims) {
      for (int x : row) ones = ones && x == 1;
    }
    check(ones, tag + ": dim W_{i,j} = 1");
    check(inv.b == b, tag + ": b recovered");
    const Scalar x = Scalar::from_int(f, 2) + Scalar::zeta(f);
    const auto inv2 = extract_taft_invariants(build_taft({f, n, x.pow(n) * a, b}).structure);
    check(inv2.b == b, tag + ": b unchanged after rescaling");
  }
}

void criterion9(Checks& check) {
  const ScalarField f = ScalarField::cyclotomic(2);
  const Scalar one = Scalar::one(f), zero = Scalar::zero(f);
  TaftProductParams p;
  p.field = f;
  p.factors = {TaftFactor{2, 1, one, zero}, TaftFactor{2, 1, one, zero}};
  p.bexp = {{0, 1}, {1, 0}};
  p.lambda = {{zero, one}, {zero, zero}};
  const auto t = build_taft_product(p);
  const Tensor& m = t.structure.get("m");
  check(t.structure.dim() == 16, "dimension 16");
  check(!associativity_violation(m).has_value(), "associative on all 16^3 triples");
  // Basis index of g1^e1 g2^e2 t1^f1 t2^f2 is 8 e1 + 4 e2 + 2 f1 + f2.
  const auto e = unit_vectors(16, f);
  const Vec<Scalar>& t1 = e[2];
  const Vec<Scalar>& t2 = e[1];
  Vec<Scalar> d = multiply(m, t1, t2);
  const Vec<Scalar> back = multiply(m, t2, t1);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= back[i];
  const Vec<Scalar> sq = multiply(m, d, d);
  Vec<Scalar> scalar_part(16, zero);
  scalar_part[0] = sq[0];
  check(sq == scalar_part, "(t1 t2 - t2 t1)^2 is a scalar");
  const auto inv = extract_product_invariants(t.structure, p.factors);
  check(inv.Lambda.count({0, 1}) == 1 && inv.Lambda.at({0, 1}) == sq[0], "Lambda_12 matches the expansion");
  check(sq[0] == -one, "Lambda_12 = -1");

  TaftProductParams bad = p;
  bad.bexp = {{0, 0}, {0, 0}};
  const auto v = taft_product_violation(bad);
  check(v.has_value() && v->find("b_12 = -c_1 = c_2") != std::string::npos, "b_12 = 0 rejected");
  bool threw = false;
  try {
    build_taft_product(bad);
  } catch (const Error& err) {
    threw = err.code() == ErrorCode::ParamInvalid && std::string(err.what()).find("b_12 = -c_1 = c_2") != std::string::npos;
  }
  check(threw, "build rejects b_12 = 0 citing the constraint");
}

/// The n = 2 polynomial as its 24 signed terms tr(A) tr(BCD).
Scalar oracle_f2(const std::vector<Matrix<Scalar>>& m) {
  Scalar total = Scalar::zero(kQ);
  for (const auto& p : all_perms(4)) {
    const auto at = [&](int k) { return m[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])]; };
    const Scalar term = trace(at(0)) * trace(at(1) * at(2) * at(3));
    total += perm_sign(p) < 0 ? -term : term;
  }
  return total;
}

void criterion10(Checks& check) {
  std::mt19937_64 rng(g_seed + 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Matrix<Scalar>> ms;
    std::vector<Vec<Scalar>> flat;
    for (int k = 0; k < 4; ++k) {
      ms.push_back(random_matrix(rng, 2, 2, kQ, -2, 2));
      flat.push_back(ms.back().data());
    }
    const Scalar f = formanek_f(ms);
    const std::string tag = "trial " + std::to_string(trial);
    check(f == oracle_f2(ms), tag + ": matches the 24-term expansion");
    check(!f.is_zero() == (oracle_rank(to_rational_rows(flat)) == 4), tag + ": f != 0 iff basis");
    auto rep = ms;
    rep[static_cast<std::size_t>(trial % 3) + 1] = rep[0];
    check(formanek_f(rep).is_zero(), tag + ": vanishes on repetition");
  }
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Matrix<Scalar>> ms;
    for (int k = 0; k < 4; ++k) ms.push_back(random_matrix(rng, 2, 2, kQ, -2, 2));
    Matrix<Scalar> g = random_matrix(rng, 2, 2, kQ, -3, 3);
    while (determinant(g).is_zero()) g = random_matrix(rng, 2, 2, kQ, -3, 3);
    const auto gi = inverse(g);
    std::vector<Matrix<Scalar>> conj;
    for (const auto& m : ms) conj.push_back(g * m * gi);
    check(formanek_f(conj) == formanek_f(ms), "f conjugation invariant");
    for (const CycleInvariantSpec& spec : {CycleInvariantSpec{4, {{0, 2}, {1, 3}}}, CycleInvariantSpec{4, {{3, 1, 0, 2}}},
                                           CycleInvariantSpec{4, {{0}, {1, 2, 3}}}}) {
      check(procesi_T(spec, conj) == procesi_T(spec, ms), "T_sigma conjugation invariant");
    }
  }
}

void criterion11(Checks& check) {
  for (int n : {1, 2, 3}) {
    check(aut_lie_algebra(Structure(n, kQ)).dimension == static_cast<std::size_t>(n * n), "empty structure gives n^2");
  }
  const Structure m2 = parse_structure_file(kData / "m2.json");
  const auto r = aut_lie_algebra(m2);
  check(r.dimension == 3, "M2 gives 3");
  // Brackets of solutions stay in the span.
  std::vector<Vec<Scalar>> span;
  for (const auto& d : r.basis) span.push_back(d.data());
  const auto base = oracle_rank(to_rational_rows(span));
  for (const auto& a : r.basis) {
    for (const auto& b : r.basis) {
      auto with = span;
      with.push_back((a * b - b * a).data());
      check(oracle_rank(to_rational_rows(with)) == base, "bracket in the span");
    }
  }
  const ScalarField f2 = ScalarField::cyclotomic(2);
  const auto w = build_twisted_group_algebra(GroupTable::cyclic_product({2, 2}), bicharacter_cocycle(2, f2));
  check(w.structure.has("e0") && w.structure.has("e3"), "grading projections present");
  check(aut_lie_algebra(w.structure).dimension == 0, "twisted C2 x C2 with projections gives 0");
}

/// Rank of the permutation tensors of S_p acting on W^{(x)p}, dim W = n.
std::size_t permutation_rank(int n, int p) {
  std::vector<Vec<Scalar>> rows;
  const auto nn = static_cast<std::size_t>(n);
  std::size_t size = 1;
  for (int i = 0; i < 2 * p; ++i) size *= nn;
  for (const auto& sigma : all_perms(p)) {
    Vec<Scalar> v(size, Scalar::zero(kQ));
    // entry (i_1..i_p ; j_1..j_p) is 1 when i_{sigma(k)} = j_k for all k
    for (std::size_t flat = 0; flat < size; ++flat) {
      std::vector<std::size_t> idx(static_cast<std::size_t>(2 * p));
      std::size_t rest = flat;
      for (int k = 2 * p - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = rest % nn;
        rest /= nn;
      }
      bool hit = true;
      for (int k = 0; k < p; ++k) hit = hit && idx[static_cast<std::size_t>(sigma[static_cast<std::size_t>(k)])] == idx[static_cast<std::size_t>(p + k)];
      if (hit) v[flat] = Scalar::one(kQ);
    }
    rows.push_back(v);
  }
  return oracle_rank(to_rational_rows(rows));
}

bool contained_in(const ClosureState& a, const ClosureState& b) {
  for (const auto& [t, basis] : a.bases) {
    for (const auto& x : a.basis_tensors(t)) {
      if (!b.contains(x)) return false;
    }
  }
  return true;
}

void criterion12(Checks& check) {
  const ScalarField f8 = ScalarField::cyclotomic(8);
  const auto empty2 = parse_structure_file(kData / "empty2.json");
  const auto st2 = compute_closure(empty2, {2, 2, 64});
  check(st2.dimension({2, 2}) == 2 && permutation_rank(2, 2) == 2, "X^{2,2} = 2 for the empty dim-2 structure");

  const auto st3 = compute_closure(Structure(3, kQ), {3, 3, 64});
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; q <= 3; ++q) {
      const std::size_t want = p == q ? permutation_rank(3, p) : 0;
      check(st3.dimension({p, q}) == want, "empty dim-3 X^{" + std::to_string(p) + "," + std::to_string(q) + "}");
    }
  }

  const auto diag = parse_structure_file(kData / "diag_zeta8.json");
  const auto a = compute_closure(diag, {1, 1, 64});
  const auto b = compute_closure(diag, {2, 1, 64});
  const auto c = compute_closure(diag, {2, 2, 64});
  check(contained_in(a, b) && contained_in(b, c) && contained_in(a, c), "monotone in the bound");
  std::vector<Tensor> seeds;
  for (const auto& [t, basis] : c.bases) {
    for (auto& x : c.basis_tensors(t)) seeds.push_back(std::move(x));
  }
  const auto again = compute_closure_from(diag.dim(), f8, seeds, {2, 2, 64});
  bool same = true;
  for (const auto& [t, basis] : c.bases) same = same && again.bases.at(t) == basis;
  check(same, "idempotent");

  std::mt19937_64 rng(g_seed + 12);
  std::vector<TensorType> types;
  for (const auto& [t, basis] : c.bases) {
    if (basis.dim() > 0) types.push_back(t);
  }
  const auto pick_type = [&] { return types[static_cast<std::size_t>(small_int(rng, 0, static_cast<int>(types.size()) - 1))]; };
  const auto pick = [&](TensorType t) {
    const auto bt = c.basis_tensors(t);
    return bt[static_cast<std::size_t>(small_int(rng, 0, static_cast<int>(bt.size()) - 1))];
  };
  for (int i = 0; i < 100; ++i) {
    const TensorType ta = pick_type(), tb = pick_type();
    const Tensor x = pick(ta);
    if (ta.p + tb.p <= 2 && ta.q + tb.q <= 2) check(c.contains(tensor_product(x, pick(tb))), "closed under products");
    if (ta.p > 0 && ta.q > 0) check(c.contains(contract(x, 0, ta.q - 1)), "closed under contraction");
    if (ta.p == 2) check(c.contains(permute(x, {1, 0}, identity_perm(ta.q))), "closed under permutation");
  }

  const auto rep = invariant_field_report(a);
  check(rep.q_basis.size() == 4 && rep.fixed_field_degree == 4, "X^{0,0} = Q(zeta_8)");
  check(rep.field_closed, "X^{0,0} is a field");
  check(rep.galois_stabilizer == std::vector<int>{1}, "trivial Galois stabilizer");
}

void criterion13(Checks& check) {
  for (int n : {2, 3}) {
    const Structure s = matrix_algebra(n, kQ);
    const Tensor& m = s.get("m");
    const auto nn = static_cast<std::size_t>(n * n);
    const auto basis = unit_vectors(nn, kQ);
    for (int slot : {0, 1}) {
      const Tensor f = contract(m, 0, slot);
      for (std::size_t a = 0; a < nn; ++a) {
        // trace of left (slot 0) or right (slot 1) multiplication by e_a, computed directly
        Scalar tr = Scalar::zero(kQ);
        for (std::size_t i = 0; i < nn; ++i) {
          const auto prod = slot == 0 ? multiply(m, basis[a], basis[i]) : multiply(m, basis[i], basis[a]);
          tr += prod[i];
        }
        const std::size_t r = a / static_cast<std::size_t>(n), c = a % static_cast<std::size_t>(n);
        const Scalar want = Scalar::from_int(kQ, r == c ? n : 0);
        check(f.at({}, {static_cast<int>(a)}) == want && tr == want, "n tr on E_" + std::to_string(a));
      }
    }
  }
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  void (*run)(Checks&);
};

const Criterion kCriteria[] = {
    {1, "Gram trace of the nilpotent algebra is t+1", 1, criterion1},
    {2, "non-semisimple example over Q(zeta_8)", 1, criterion2},
    {3, "antisymmetrizer image lemma", 30, criterion3},
    {4, "polynomial identity spaces", 10, criterion4},
    {5, "graded identity of the twisted C3 x C3", 1, criterion5},
    {6, "twisted group algebra invariants", 5, criterion6},
    {7, "Galois coherence for n = 4", 5, criterion7},
    {8, "Taft algebra round trip", 10, criterion8},
    {9, "Taft product with lambda_12 != 0", 20, criterion9},
    {10, "Formanek criterion at n = 2", 20, criterion10},
    {11, "Lie algebra of the automorphism group", 5, criterion11},
    {12, "closure properties", 60, criterion12},
    {13, "regular representation trace", 1, criterion13},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      g_seed = std::stoull(argv[++i]);
    } else {
      selected.insert(std::atoi(argv[i]));
    }
  }
  std::cout << "seed " << g_seed << std::endl;
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Checks check;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.run(check);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = error.empty() && check.ok() && in_time;
    failures += !pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.limit_s);
    std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  (" << timing << "; " << check.summary();
    if (!error.empty()) std::cout << "; threw " << error;
    if (!in_time) std::cout << "; over the time limit";
    std::cout << ")" << std::endl;
  }
  return failures;
}
