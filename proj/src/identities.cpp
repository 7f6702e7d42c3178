#include "invforge/identities.hpp"

namespace invforge {

namespace {

const Tensor& mult_tensor(const Structure& s) {
  if (!s.has("m")) throw Error(ErrorCode::WrongTensorType, "structure has no multiplication tensor 'm'");
  const Tensor& m = s.get("m");
  if (m.type() != TensorType{1, 2}) throw Error(ErrorCode::WrongTensorType, "'m' must have type (1,2), found " + m.type().to_string());
  return m;
}

void check_budget(int d, std::size_t rows, std::uint64_t budget) {
  long double cost = static_cast<long double>(rows);
  for (int i = 2; i <= d; ++i) cost *= i;
  if (cost > static_cast<long double>(budget)) {
    throw Error(ErrorCode::BudgetExceeded, "identity system of degree " + std::to_string(d) + " exceeds budget " + std::to_string(budget));
  }
}

void normalize(Vec<Scalar>& v) {
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    const Scalar inv = x.inverse();
    for (auto& y : v) y *= inv;
    return;
  }
}

/// Nullspace of the matrix whose column sigma stacks the permuted products
/// over every argument tuple drawn from `choices`.
std::vector<Vec<Scalar>> solve_identities(const Tensor& m, const std::vector<std::vector<Vec<Scalar>>>& choices,
                                          const std::vector<Perm>& perms) {
  const auto d = choices.size();
  const auto n = static_cast<std::size_t>(m.dim());
  const Scalar zero = Scalar::zero(m.field());
  std::size_t tuples = 1;
  for (const auto& c : choices) tuples *= c.size();
  Matrix<Scalar> sys(tuples * n, perms.size(), zero);
  std::vector<std::size_t> pick(d, 0);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rem = t;
    for (std::size_t i = d; i-- > 0;) {
      pick[i] = rem % choices[i].size();
      rem /= choices[i].size();
    }
    for (std::size_t c = 0; c < perms.size(); ++c) {
      std::vector<Vec<Scalar>> args;
      for (std::size_t i = 0; i < d; ++i) {
        const auto src = static_cast<std::size_t>(perms[c][i]);
        args.push_back(choices[src][pick[src]]);
      }
      const auto v = iterated_product(m, args);
      for (std::size_t k = 0; k < n; ++k) sys(t * n + k, c) = v[k];
    }
  }
  auto basis = nullspace(sys, zero);
  for (auto& v : basis) normalize(v);
  return basis;
}

std::vector<Vec<Scalar>> standard_basis(int n, const ScalarField& f) {
  std::vector<Vec<Scalar>> out;
  for (int i = 0; i < n; ++i) {
    Vec<Scalar> e(static_cast<std::size_t>(n), Scalar::zero(f));
    e[static_cast<std::size_t>(i)] = Scalar::one(f);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

Vec<Scalar> iterated_product(const Tensor& m, const std::vector<Vec<Scalar>>& args) {
  Vec<Scalar> acc = args.at(0);
  for (std::size_t i = 1; i < args.size(); ++i) acc = multiply(m, acc, args[i]);
  return acc;
}

Vec<Scalar> evaluate_identity(const Tensor& m, const std::vector<Perm>& perms, const Vec<Scalar>& a,
                              const std::vector<Vec<Scalar>>& args) {
  Vec<Scalar> out(static_cast<std::size_t>(m.dim()), Scalar::zero(m.field()));
  for (std::size_t c = 0; c < perms.size(); ++c) {
    if (a[c].is_zero()) continue;
    std::vector<Vec<Scalar>> permuted;
    for (int i : perms[c]) permuted.push_back(args[static_cast<std::size_t>(i)]);
    const auto v = iterated_product(m, permuted);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += a[c] * v[k];
  }
  return out;
}

IdentitySpace multilinear_identity_space(const Structure& s, int d, std::uint64_t budget) {
  const Tensor& m = mult_tensor(s);
  if (d < 2) throw Error(ErrorCode::ParamInvalid, "identity degree must be at least 2");
  check_budget(d, ipow(static_cast<std::size_t>(s.dim()), d + 1), budget);
  IdentitySpace out;
  out.degree = d;
  out.perms = all_perms(d);
  const std::vector<std::vector<Vec<Scalar>>> choices(static_cast<std::size_t>(d), standard_basis(s.dim(), s.field()));
  out.basis = solve_identities(m, choices, out.perms);
  return out;
}

std::vector<Tensor> grading_projections(const Structure& s) {
  std::vector<Tensor> out;
  for (int g = 0; s.has("e" + std::to_string(g)); ++g) out.push_back(s.get("e" + std::to_string(g)));
  if (out.empty()) throw Error(ErrorCode::NotAGrading, "no projections e0, e1, ... in the structure");
  Tensor sum({1, 1}, s.dim(), s.field());
  for (std::size_t g = 0; g < out.size(); ++g) {
    const Tensor& e = out[g];
    if (e.type() != TensorType{1, 1}) throw Error(ErrorCode::NotAGrading, "e" + std::to_string(g) + " is not an operator");
    if (compose(e, e) != e) throw Error(ErrorCode::NotAGrading, "e" + std::to_string(g) + " is not idempotent");
    sum = sum + e;
  }
  if (sum != Tensor::identity(s.dim(), s.field())) throw Error(ErrorCode::NotAGrading, "projections do not sum to the identity");
  return out;
}

IdentitySpace graded_identity_space(const Structure& s, const std::vector<int>& grades, std::uint64_t budget) {
  const Tensor& m = mult_tensor(s);
  const int d = static_cast<int>(grades.size());
  if (d < 2) throw Error(ErrorCode::ParamInvalid, "identity degree must be at least 2");
  const auto proj = grading_projections(s);
  std::vector<std::vector<Vec<Scalar>>> choices;
  std::size_t tuples = static_cast<std::size_t>(s.dim());
  for (int g : grades) {
    if (g < 0 || static_cast<std::size_t>(g) >= proj.size()) {
      throw Error(ErrorCode::ParamInvalid, "grade " + std::to_string(g) + " has no projection");
    }
    // a basis of the homogeneous component: reduced echelon basis of the columns of e_g
    const auto e = as_map(proj[static_cast<std::size_t>(g)]);
    EchelonBasis<Scalar> comp(static_cast<std::size_t>(s.dim()));
    for (std::size_t j = 0; j < e.cols(); ++j) comp.insert(e.column(j));
    choices.push_back(comp.rows());
    tuples *= std::max<std::size_t>(comp.dim(), 1);
  }
  check_budget(d, tuples, budget);
  IdentitySpace out;
  out.degree = d;
  out.grades = grades;
  out.perms = all_perms(d);
  for (const auto& c : choices) {
    if (c.empty()) {
      // no homogeneous arguments: every relation holds vacuously
      out.basis = standard_basis(static_cast<int>(out.perms.size()), s.field());
      return out;
    }
  }
  out.basis = solve_identities(m, choices, out.perms);
  return out;
}

std::string render_identity(const std::vector<Perm>& perms, const Vec<Scalar>& a) {
  std::string out;
  for (std::size_t c = 0; c < perms.size(); ++c) {
    if (a[c].is_zero()) continue;
    std::string coeff = a[c].to_string();
    bool negative = false;
    const bool compound = coeff.find(" + ") != std::string::npos || coeff.find(" - ") != std::string::npos;
    if (!compound && coeff[0] == '-') {
      negative = true;
      coeff = coeff.substr(1);
    }
    if (compound) coeff = "(" + coeff + ")";
    std::string mono;
    for (std::size_t i = 0; i < perms[c].size(); ++i) mono += (i ? "*X" : "X") + std::to_string(perms[c][i] + 1);
    const std::string term = coeff == "1" ? mono : coeff + "*" + mono;
    if (out.empty()) {
      out = (negative ? "-" : "") + term;
    } else {
      out += (negative ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace invforge
