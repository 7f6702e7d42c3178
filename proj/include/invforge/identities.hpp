#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invforge/linalg.hpp"
#include "invforge/tensor.hpp"

namespace invforge {

/// Coefficient vectors a over S_d, indexed by all_perms(d) (lexicographic
/// one-line order). The vector a stands for sum_sigma a_sigma X_{sigma(1)}...X_{sigma(d)},
/// products left-normed. Each basis vector has first nonzero coordinate 1.
struct IdentitySpace {
  int degree = 0;
  std::vector<Perm> perms;
  std::vector<Vec<Scalar>> basis;
  std::vector<int> grades;  // group element of each variable; empty when ungraded
};

/// Identities of the (1,2) tensor named "m". BudgetExceeded when
/// d! * n^(d+1) exceeds `budget`.
IdentitySpace multilinear_identity_space(const Structure& s, int d, std::uint64_t budget = 20'000'000);

/// Identities on homogeneous arguments X_i in W_{grades[i]}. The grading is
/// read from the (1,1) projections named e0, e1, ...; NotAGrading when they
/// are not idempotents summing to the identity.
IdentitySpace graded_identity_space(const Structure& s, const std::vector<int>& grades,
                                    std::uint64_t budget = 20'000'000);

/// Left-normed product of the arguments in the order given.
Vec<Scalar> iterated_product(const Tensor& m, const std::vector<Vec<Scalar>>& args);

/// sum_sigma a_sigma (v_{sigma(1)} ... v_{sigma(d)}).
Vec<Scalar> evaluate_identity(const Tensor& m, const std::vector<Perm>& perms, const Vec<Scalar>& a,
                              const std::vector<Vec<Scalar>>& args);

/// e.g. "X1*X2 - X2*X1".
std::string render_identity(const std::vector<Perm>& perms, const Vec<Scalar>& a);

/// The grading projections e0, e1, ... of a structure, validated.
std::vector<Tensor> grading_projections(const Structure& s);

}  // namespace invforge
