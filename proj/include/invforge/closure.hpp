#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "invforge/linalg.hpp"
#include "invforge/tensor.hpp"

namespace invforge {

struct DegreeBound {
  int P = 2;
  int Q = 2;
  int max_rounds = 64;
};

/// Truncated X^{p,q} for p <= P, q <= Q. Each space is a Q-subspace of W^{p,q}
/// kept in reduced echelon form over flattened Q-coordinates (phi(n)
/// coordinates per entry); `generators` lists the tensors whose insertion
/// grew the space, in insertion order.
struct ClosureState {
  int dim = 1;
  ScalarField field;
  DegreeBound bound;
  std::map<TensorType, EchelonBasis<Rational>> bases;
  std::map<TensorType, std::vector<Tensor>> generators;
  bool converged = false;
  int rounds = 0;

  std::size_t dimension(TensorType t) const;
  bool contains(const Tensor& x) const;
  /// The echelon basis vectors of X^{p,q} as tensors.
  std::vector<Tensor> basis_tensors(TensorType t) const;
};

/// Fixpoint of the closure rules starting from x_i, Id_W and 1.
/// UnsupportedField for Q(t); BudgetExceeded when the stored coordinates
/// exceed `budget` rationals; ParamInvalid when the bound is below a seed type.
ClosureState compute_closure(const Structure& s, const DegreeBound& b, std::uint64_t budget = 50'000'000);

/// Same, from an explicit seed list (Id_W and 1 are always added).
ClosureState compute_closure_from(int dim, const ScalarField& field, const std::vector<Tensor>& seeds,
                                  const DegreeBound& b, std::uint64_t budget = 50'000'000);

struct InvariantFieldReport {
  std::vector<Scalar> q_basis;       // of X^{0,0}
  bool field_closed = false;         // 1 in span, products and inverses in span
  std::vector<int> galois_stabilizer;  // sorted residues k with sigma_k fixing X^{0,0}
  int fixed_field_degree = 1;
};

InvariantFieldReport invariant_field_report(const ClosureState& st);

/// The same report for an explicit list of scalars spanning a Q-subspace.
InvariantFieldReport invariant_field_report(const std::vector<Scalar>& span, const ScalarField& field);

}  // namespace invforge
