#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rabi/matrix.hpp"

namespace rabi::detail {

/// Cholesky factor L (L L^H = H - shift) of a banded Hermitian matrix, in
/// row-band storage. Construction fails (std::nullopt) when H - shift is not
/// numerically positive definite, which makes it an exact test for
/// shift < lambda_min.
class BandedCholesky {
 public:
  static std::optional<BandedCholesky> factor(const HermitianMatrix& h, double shift);

  /// Solves (H - shift) x = rhs in place.
  void solve(Eigen::Ref<Eigen::VectorXcd> rhs) const;

 private:
  BandedCholesky(std::size_t n, std::size_t b) : n_(n), b_(b), rows_(n * (b + 1)) {}
  Complex& at(std::size_t row, std::size_t lag) { return rows_[row * (b_ + 1) + lag]; }
  const Complex& at(std::size_t row, std::size_t lag) const { return rows_[row * (b_ + 1) + lag]; }

  std::size_t n_;
  std::size_t b_;
  std::vector<Complex> rows_;  // at(i, d) = L(i, i - d)
};

struct LanczosOptions {
  std::size_t block_size = 4;
  std::size_t max_basis = 720;
  double residual_tolerance = 1e-9;
};

struct LanczosResult {
  std::vector<double> values;
  std::vector<Eigen::VectorXcd> vectors;
  double shift = 0.0;
  std::size_t basis_size = 0;
};

/// Lowest `count` eigenpairs of a banded Hermitian matrix by shift-and-invert
/// block Lanczos with full reorthogonalization. The shift is placed just below
/// the spectrum by bisection on Cholesky success. Throws ConvergenceError when
/// the residuals ||H v - lambda v|| do not reach
/// residual_tolerance * max(1, |lambda|) within max_basis vectors.
LanczosResult lowest_banded_eigenpairs(const HermitianMatrix& h, std::size_t count,
                                       const LanczosOptions& options = {});

}  // namespace rabi::detail
