#include "invforge/closure.hpp"

namespace invforge {

namespace {

bool within(TensorType t, const DegreeBound& b) { return t.p <= b.P && t.q <= b.Q; }

class ClosureEngine {
 public:
  ClosureEngine(int dim, const ScalarField& field, const DegreeBound& b, std::uint64_t budget) : budget_(budget) {
    st_.dim = dim;
    st_.field = field;
    st_.bound = b;
    phi_ = static_cast<std::size_t>(field.q_degree());
    for (int p = 0; p <= b.P; ++p) {
      for (int q = 0; q <= b.Q; ++q) {
        st_.bases.emplace(TensorType{p, q}, EchelonBasis<Rational>(ipow(static_cast<std::size_t>(dim), p + q) * phi_));
        st_.generators[TensorType{p, q}];
      }
    }
  }

  void seed(const Tensor& t) { insert(t); }

  ClosureState run() {
    const DegreeBound& b = st_.bound;
    while (st_.rounds < b.max_rounds) {
      ++st_.rounds;
      const auto frontier = std::move(fresh_);
      fresh_.clear();
      const auto snapshot = st_.generators;
      for (const auto& [ta, list] : frontier) {
        for (const Tensor& a : list) {
          for (const auto& [tb, others] : snapshot) {
            if (!within({ta.p + tb.p, ta.q + tb.q}, b)) continue;
            for (const Tensor& o : others) {
              insert(tensor_product(a, o));
              insert(tensor_product(o, a));
            }
          }
          for (int u = 0; u < ta.p; ++u) {
            for (int d = 0; d < ta.q; ++d) insert(contract(a, u, d));
          }
          for (int i = 0; i + 1 < ta.p; ++i) insert(permute(a, adjacent_transposition(ta.p, i), identity_perm(ta.q)));
          for (int j = 0; j + 1 < ta.q; ++j) insert(permute(a, identity_perm(ta.p), adjacent_transposition(ta.q, j)));
        }
      }
      if (fresh_.empty()) {
        st_.converged = true;
        break;
      }
    }
    return std::move(st_);
  }

 private:
  void insert(const Tensor& t) {
    auto& basis = st_.bases.at(t.type());
    if (!basis.insert(t.q_coords())) return;
    st_.generators[t.type()].push_back(t);
    fresh_[t.type()].push_back(t);
    stored_ += basis.length();
    if (stored_ > budget_) {
      throw Error(ErrorCode::BudgetExceeded, "closure stores more than " + std::to_string(budget_) + " coordinates");
    }
  }

  ClosureState st_;
  std::size_t phi_ = 1;
  std::uint64_t budget_;
  std::uint64_t stored_ = 0;
  std::map<TensorType, std::vector<Tensor>> fresh_;
};

}  // namespace

std::size_t ClosureState::dimension(TensorType t) const {
  auto it = bases.find(t);
  return it == bases.end() ? 0 : it->second.dim();
}

bool ClosureState::contains(const Tensor& x) const {
  auto it = bases.find(x.type());
  if (it == bases.end()) return false;
  if (x.dim() != dim || x.field() != field) return false;
  return it->second.contains(x.q_coords());
}

std::vector<Tensor> ClosureState::basis_tensors(TensorType t) const {
  std::vector<Tensor> out;
  auto it = bases.find(t);
  if (it == bases.end()) return out;
  for (const auto& row : it->second.rows()) out.push_back(Tensor::from_q_coords(t, dim, field, row));
  return out;
}

ClosureState compute_closure_from(int dim, const ScalarField& field, const std::vector<Tensor>& seeds,
                                  const DegreeBound& b, std::uint64_t budget) {
  if (field.is_rational_function()) {
    throw Error(ErrorCode::UnsupportedField, "closure over Q(t) is not supported; use the expression evaluator");
  }
  if (b.P < 1 || b.Q < 1) throw Error(ErrorCode::ParamInvalid, "bound must be at least (1,1)");
  if (b.max_rounds < 1) throw Error(ErrorCode::ParamInvalid, "max_rounds must be at least 1");
  for (const auto& t : seeds) {
    if (!within(t.type(), b)) {
      throw Error(ErrorCode::ParamInvalid, "bound (" + std::to_string(b.P) + "," + std::to_string(b.Q) +
                                               ") is below seed type " + t.type().to_string());
    }
  }
  ClosureEngine engine(dim, field, b, budget);
  engine.seed(Tensor::scalar(Scalar::one(field), dim));
  engine.seed(Tensor::identity(dim, field));
  for (const auto& t : seeds) engine.seed(t);
  return engine.run();
}

ClosureState compute_closure(const Structure& s, const DegreeBound& b, std::uint64_t budget) {
  std::vector<Tensor> seeds;
  for (const auto& [name, t] : s.tensors()) seeds.push_back(t);
  return compute_closure_from(s.dim(), s.field(), seeds, b, budget);
}

InvariantFieldReport invariant_field_report(const std::vector<Scalar>& span, const ScalarField& field) {
  InvariantFieldReport r;
  const auto phi = static_cast<std::size_t>(field.q_degree());
  EchelonBasis<Rational> basis(phi);
  for (const auto& s : span) basis.insert(s.q_coords());
  for (const auto& row : basis.rows()) r.q_basis.push_back(Scalar::from_q_coords(field, row.data()));

  bool closed = basis.contains(Scalar::one(field).q_coords());
  for (std::size_t i = 0; closed && i < r.q_basis.size(); ++i) {
    closed = basis.contains(r.q_basis[i].inverse().q_coords());
    for (std::size_t j = i; closed && j < r.q_basis.size(); ++j) {
      closed = basis.contains((r.q_basis[i] * r.q_basis[j]).q_coords());
    }
  }
  r.field_closed = closed;

  const int n = field.is_cyclotomic() ? field.order : 1;
  for (int k = 1; k <= std::max(n - 1, 1); ++k) {
    if (gcd_int(k, n) != 1) continue;
    bool fixed = true;
    for (const auto& b : r.q_basis) {
      if (b.galois(k) != b) {
        fixed = false;
        break;
      }
    }
    if (fixed) r.galois_stabilizer.push_back(k);
  }
  r.fixed_field_degree = static_cast<int>(phi) / static_cast<int>(r.galois_stabilizer.size());
  return r;
}

InvariantFieldReport invariant_field_report(const ClosureState& st) {
  std::vector<Scalar> span;
  for (const auto& t : st.basis_tensors({0, 0})) span.push_back(t.entries()[0]);
  return invariant_field_report(span, st.field);
}

}  // namespace invforge
