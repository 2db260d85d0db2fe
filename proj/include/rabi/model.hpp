#pragma once

#include <cstddef>

#include "rabi/matrix.hpp"
#include "rabi/types.hpp"

// Hamiltonian builders for the two-photon quantum Rabi model.
//
// Qubit-tensored matrices use the interleaved ordering
//   index(n, s) = 2 n + s,   s = 0 for |up> (sz = +1), s = 1 for |down>,
// with Fock index n = 0 .. N-1, which keeps every builder within bandwidth 5.

namespace rabi {

inline constexpr std::size_t kMinFockCutoff = 2;
inline constexpr std::size_t kMinSubspaceCutoff = 2;
inline constexpr std::size_t kQubitTensoredBandwidth = 5;

/// Row/column of |n> (x) |s> in qubit-tensored matrices.
constexpr std::size_t tensored_index(std::size_t fock, std::size_t spin) { return 2 * fock + spin; }

/// H = (omega0/2) sz + omega a^dag a + g2 (a^dag^2 + a^2) sx, truncated at n < cutoff.
HermitianMatrix build_full_fock(const ModelParams& params, std::size_t cutoff);

/// H_y = 1/2 (omega + 2 g2 sz) p^2 + 1/2 (omega - 2 g2 sz) q^2 + (omega0/2) sx,
/// with p^2 and q^2 formed as products of the truncated quadrature matrices.
/// Spectrum equals build_full_fock shifted by +omega/2 away from the truncation edge.
HermitianMatrix build_phase_space(const ModelParams& params, std::size_t cutoff);

/// Rotated Hamiltonian: both qubit blocks carry (alpha_+ p^2 + alpha_- q^2)/2 and the
/// qubit coupling is (omega0/2)(R sigma_+ + R^dag sigma_-), where R is the Fock-diagonal
/// quarter-period rotation with entries exp(-i pi (n + 1/2) / 2).
HermitianMatrix build_rotated_fock(const ModelParams& params, std::size_t cutoff);

/// Phase of the n-th diagonal entry of the rotation used by build_rotated_fock.
Complex rotation_phase(std::size_t fock);

/// H_{q,+-} on |q; m>, m = 0 .. cutoff-1:
///   diag[m]    = branch (omega0/2) (-1)^m + 2 omega (q + m)
///   offdiag[m] = -2 g2 sqrt((m + 1)(m + 2q))
TridiagonalMatrix build_subspace_tridiagonal(const SubspaceLabel& label, const ModelParams& params,
                                             std::size_t cutoff);

/// Boson parity (-1)^n on n < cutoff.
HermitianMatrix boson_parity(std::size_t cutoff);

/// op (x) I_2 in the interleaved qubit ordering.
HermitianMatrix tensor_with_qubit_identity(const HermitianMatrix& op);

}  // namespace rabi
