#pragma once

#include <vector>

#include "invforge/linalg.hpp"
#include "invforge/tensor.hpp"

namespace invforge {

struct AutLieResult {
  std::size_t dimension = 0;
  std::vector<Matrix<Scalar>> basis;  // n x n matrices D
};

/// rho(D) x: D in every up slot minus D^T in every down slot, summed.
Tensor derivation_action(const Matrix<Scalar>& d, const Tensor& x);

/// Solutions D of rho(D) x_i = 0 for every structure tensor.
AutLieResult aut_lie_algebra(const Structure& s);

}  // namespace invforge
