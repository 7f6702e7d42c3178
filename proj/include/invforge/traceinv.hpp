#pragma once

#include <cstdint>
#include <vector>

#include "invforge/linalg.hpp"
#include "invforge/scalars.hpp"

namespace invforge {

/// sigma in S_t by its cycles; entries are 0-based argument positions.
struct CycleInvariantSpec {
  int t = 1;
  std::vector<std::vector<int>> cycles;
};

/// Product over the cycles of tr(X_{i_1} X_{i_2} ... X_{i_r}).
/// ArityMismatch when the matrix count differs from t; ParamInvalid when the
/// cycles do not partition {0..t-1}.
Scalar procesi_T(const CycleInvariantSpec& spec, const std::vector<Matrix<Scalar>>& xs);

/// sum over S_{n^2} of sign * tr(M_s1) tr(M_s2 M_s3 M_s4) ... with blocks of
/// sizes 1, 3, ..., 2n-1. BudgetExceeded for n >= 4 unless `force`.
Scalar formanek_f(const std::vector<Matrix<Scalar>>& ms, bool force = false);

/// f evaluated on M_{ni+j} = X^i Y^j, 0 <= i, j < n.
Scalar formanek_D(const Matrix<Scalar>& x, const Matrix<Scalar>& y, bool force = false);

}  // namespace invforge
