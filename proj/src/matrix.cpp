#include "rabi/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rabi/types.hpp"

namespace rabi {

bool TridiagonalMatrix::well_formed() const {
  if (diag.empty() || offdiag.size() + 1 != diag.size()) return false;
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(diag.begin(), diag.end(), finite) &&
         std::all_of(offdiag.begin(), offdiag.end(), finite);
}

Eigen::MatrixXd TridiagonalMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) dense(i, i) = diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    dense(i + 1, i) = offdiag[i];
    dense(i, i + 1) = offdiag[i];
  }
  return dense;
}

HermitianMatrix::HermitianMatrix(std::size_t dimension, std::size_t bandwidth)
    : dim_(dimension), bandwidth_(std::min(bandwidth, dimension == 0 ? 0 : dimension - 1)) {
  if (dimension == 0) throw SizingError("HermitianMatrix: dimension must be positive");
  bands_.resize(bandwidth_ + 1);
  for (std::size_t d = 0; d <= bandwidth_; ++d) bands_[d].assign(dim_ - d, Complex{});
}

Complex HermitianMatrix::operator()(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_) throw std::out_of_range("HermitianMatrix index");
  if (row >= col) {
    const std::size_t d = row - col;
    return d <= bandwidth_ ? bands_[d][col] : Complex{};
  }
  const std::size_t d = col - row;
  return d <= bandwidth_ ? std::conj(bands_[d][row]) : Complex{};
}

void HermitianMatrix::add(std::size_t row, std::size_t col, Complex value) {
  if (row >= dim_ || col >= dim_) throw std::out_of_range("HermitianMatrix index");
  if (row == col) {
    if (value.imag() != 0.0) throw DomainError("HermitianMatrix: complex diagonal entry");
    bands_[0][row] += value;
    return;
  }
  const std::size_t d = row > col ? row - col : col - row;
  if (d > bandwidth_) throw std::out_of_range("HermitianMatrix: entry outside band");
  if (row > col)
    bands_[d][col] += value;
  else
    bands_[d][row] += std::conj(value);
}

void HermitianMatrix::apply(std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != dim_ || y.size() != dim_) throw SizingError("HermitianMatrix::apply size");
  for (std::size_t i = 0; i < dim_; ++i) y[i] = bands_[0][i] * x[i];
  for (std::size_t d = 1; d <= bandwidth_; ++d) {
    const auto& band = bands_[d];
    for (std::size_t i = 0; i + d < dim_; ++i) {
      y[i + d] += band[i] * x[i];
      y[i] += std::conj(band[i]) * x[i + d];
    }
  }
}

bool HermitianMatrix::is_real() const {
  for (const auto& band : bands_)
    for (const auto& v : band)
      if (v.imag() != 0.0) return false;
  return true;
}

bool HermitianMatrix::all_finite() const {
  for (const auto& band : bands_)
    for (const auto& v : band)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Eigen::MatrixXcd HermitianMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t d = 0; d <= bandwidth_; ++d) {
    for (std::size_t i = 0; i + d < dim_; ++i) {
      const auto r = static_cast<Eigen::Index>(i + d);
      const auto c = static_cast<Eigen::Index>(i);
      dense(r, c) = bands_[d][i];
      dense(c, r) = std::conj(bands_[d][i]);
    }
  }
  return dense;
}

}  // namespace rabi
