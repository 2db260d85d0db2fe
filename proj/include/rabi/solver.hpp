#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rabi/matrix.hpp"

namespace rabi {

/// How eigenvector amplitudes map onto boson (Fock) indices.
enum class BasisLayout {
  Subspace,       // amplitude m belongs to |q; m>
  QubitTensored,  // amplitude 2n + s belongs to |n> (x) |s>
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXcd vector;  // unit norm
  BasisLayout layout = BasisLayout::Subspace;
  double tail_norm = 0.0;
  bool converged = false;

  /// Number of boson levels the vector spans (M or N).
  std::size_t boson_cutoff() const;
};

struct FilteredSpectrum {
  std::vector<EigenPair> pairs;  // ascending by value
  std::size_t cutoff = 0;
  double tail_fraction = 0.2;
  double tolerance = 1e-6;

  std::size_t converged_count() const;
  std::vector<double> converged_values() const;
};

inline constexpr double kDefaultTailFraction = 0.2;
inline constexpr double kDefaultTailTolerance = 1e-6;
/// Dense reference diagonalization is used below this dimension.
inline constexpr std::size_t kDenseSolveLimit = 2048;

/// Lowest k eigenpairs of a real symmetric tridiagonal matrix.
/// Throws DomainError on non-finite entries, SizingError when k is out of range.
std::vector<EigenPair> solve_tridiagonal(const TridiagonalMatrix& matrix, std::size_t k);

/// Lowest k eigenpairs of a Hermitian matrix: dense below kDenseSolveLimit,
/// shift-invert block Lanczos above. Throws ConvergenceError if the iterative
/// path fails.
std::vector<EigenPair> solve_hermitian(const HermitianMatrix& matrix, std::size_t k,
                                       BasisLayout layout = BasisLayout::QubitTensored);

/// Length of the boson tail inspected by the filter: ceil(fraction * cutoff).
std::size_t tail_length(double tail_fraction, std::size_t cutoff);

/// l2 norm of the amplitudes on the last tail_length(...) boson levels
/// (both qubit components for qubit-tensored vectors).
double tail_norm(const EigenPair& pair, double tail_fraction);

/// Marks each pair converged when its tail norm is below `tolerance`.
/// Exact-degenerate values are ordered by ascending tail norm.
FilteredSpectrum convergence_filter(std::vector<EigenPair> pairs,
                                    double tail_fraction = kDefaultTailFraction,
                                    double tolerance = kDefaultTailTolerance);

struct Alignment {
  double offset = 0.0;          // add to the spectrum's values
  double rms_residual = 0.0;
  double max_deviation = 0.0;
};

/// For each spectrum in `others`, the constant c minimizing the squared
/// distance between its converged values + c and their nearest converged
/// reference values. Values shifted above the top of the reference are left
/// unmatched; at least half of them must match. Equally good offsets resolve
/// to the smallest |c|. Throws DomainError when any spectrum has fewer than
/// three converged values.
std::vector<Alignment> align_spectra(const FilteredSpectrum& reference,
                                     const std::vector<FilteredSpectrum>& others);

/// Same, on bare value lists.
Alignment align_values(const std::vector<double>& reference, const std::vector<double>& values);

/// Rotates the global phase so the first significant amplitude is real positive.
void normalize_phase(Eigen::VectorXcd& v);

}  // namespace rabi
