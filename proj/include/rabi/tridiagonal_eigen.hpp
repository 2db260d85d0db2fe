#pragma once

#include <cstddef>
#include <vector>

#include "rabi/matrix.hpp"

namespace rabi::detail {

/// Lowest eigenpairs of a real symmetric tridiagonal matrix, ascending.
struct TridiagonalEigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // each of length dimension
};

/// Number of eigenvalues of `t` strictly below `x` (Sturm sequence count).
std::size_t sturm_count(const TridiagonalMatrix& t, double x);

/// Bisection for the `count` lowest eigenvalues, then inverse iteration with
/// reorthogonalization inside clusters. The matrix is first split into
/// unreduced blocks at negligible off-diagonal entries, so decoupled
/// degenerate levels come back as localized vectors.
TridiagonalEigenpairs lowest_tridiagonal_eigenpairs(const TridiagonalMatrix& t, std::size_t count);

}  // namespace rabi::detail
