#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rabi/matrix.hpp"

// Test-only reference routines, independent of the library's eigensolvers.
namespace rabi::testing {

/// All eigenvalues of a dense Hermitian matrix, ascending (Eigen dense solver).
std::vector<double> dense_eigenvalues(const Eigen::MatrixXcd& m);
std::vector<double> dense_eigenvalues(const HermitianMatrix& h);
std::vector<double> dense_eigenvalues(const TridiagonalMatrix& t);

std::vector<double> head(const std::vector<double>& v, std::size_t n);
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

/// Evenly spaced grid, inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

/// Physicists' Hermite polynomial H_n(x) by the unnormalized recurrence.
double hermite_polynomial(int n, double x);

}  // namespace rabi::testing
