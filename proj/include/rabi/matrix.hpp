#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rabi {

using Complex = std::complex<double>;

/// Real symmetric tridiagonal matrix.
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;  // length diag.size() - 1

  std::size_t dimension() const { return diag.size(); }
  /// True when the lengths are consistent and every entry is finite.
  bool well_formed() const;
  Eigen::MatrixXd to_dense() const;
};

/// Hermitian matrix in lower-band storage.
///
/// Only the diagonal and the `bandwidth` sub-diagonals are stored; the upper
/// triangle is the conjugate mirror, so H(i,j) == conj(H(j,i)) holds exactly
/// for every instance. Diagonal entries are real.
class HermitianMatrix {
 public:
  HermitianMatrix(std::size_t dimension, std::size_t bandwidth);

  std::size_t dimension() const { return dim_; }
  std::size_t bandwidth() const { return bandwidth_; }

  /// Element access; returns 0 outside the band.
  Complex operator()(std::size_t row, std::size_t col) const;

  /// Adds `value` at (row, col) and conj(value) at (col, row). On the diagonal
  /// the imaginary part must be zero.
  void add(std::size_t row, std::size_t col, Complex value);

  /// y = H x
  void apply(std::span<const Complex> x, std::span<Complex> y) const;

  /// True when no stored entry has a nonzero imaginary part.
  bool is_real() const;
  bool all_finite() const;

  Eigen::MatrixXcd to_dense() const;

 private:
  std::size_t dim_;
  std::size_t bandwidth_;
  // bands_[d][i] = H(i + d, i)
  std::vector<std::vector<Complex>> bands_;
};

}  // namespace rabi
