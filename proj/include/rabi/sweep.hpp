#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rabi/solver.hpp"
#include "rabi/types.hpp"

namespace rabi {

/// What to diagonalize at a grid point: one H_{q,+-} block or the full
/// qubit-tensored Hamiltonian.
struct SweepTarget {
  bool full = false;
  SubspaceLabel label;

  static SweepTarget subspace(SubspaceLabel l) { return {false, l}; }
  static SweepTarget full_model() { return {true, {}}; }
  /// "full" or the subspace name ("q14+", ...).
  std::string name() const;
  static SweepTarget parse(const std::string& text);

  bool operator==(const SweepTarget&) const = default;
};

struct FilterSettings {
  std::size_t requested_eigenpairs = 25;
  double tail_fraction = kDefaultTailFraction;
  double tolerance = kDefaultTailTolerance;

  bool operator==(const FilterSettings&) const = default;
};

/// Builds, solves and filters one point. For subspaces `cutoff` counts |q;m>
/// levels; for the full model it counts Fock levels. The requested count is
/// clipped to the matrix dimension.
FilteredSpectrum compute_spectrum(const ModelParams& params, const SweepTarget& target, std::size_t cutoff,
                                  const FilterSettings& filter);

/// Coupling comb: absolute values, or multiples of g_c = omega/2 per slice.
struct CouplingSpec {
  enum class Kind { Absolute, RelativeToCritical };
  Kind kind = Kind::Absolute;
  std::vector<double> values;

  std::vector<double> couplings_for(double omega) const;
  bool operator==(const CouplingSpec&) const = default;
};

/// `count` evenly spaced points from start to stop inclusive.
std::vector<double> homogeneous_grid(double start, double stop, std::size_t count);

inline constexpr std::size_t kMinSweepCutoff = 64;
inline constexpr std::size_t kDefaultSweepCutoff = 1024;
inline constexpr std::size_t kVerificationCutoff = 8192;
inline constexpr std::size_t kRefinedCombPoints = 200;

struct SweepConfig {
  std::vector<double> omega0_grid;
  std::vector<double> omega_grid;
  CouplingSpec coupling;
  std::vector<SweepTarget> targets{SweepTarget::subspace({})};
  std::size_t cutoff = kDefaultSweepCutoff;
  FilterSettings filter;

  /// Throws DomainError / SizingError naming the offending field.
  void validate() const;
  bool operator==(const SweepConfig&) const = default;
};

struct SweepRow {
  ModelParams params;
  SweepTarget target;
  std::size_t cutoff = 0;
  std::size_t converged_count = 0;
  std::vector<double> energies;  // lowest converged values, ascending
  bool collapsed = false;        // converged_count <= 1
  bool exceptional = false;      // converged_count == 1
  bool failed = false;
  std::string failure;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (omega0, omega, target, g2) grid index
  FilterSettings filter;
};

struct SweepOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Evaluates every grid point; per-point failures are recorded on the row.
SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options = {});

struct CollapseEstimate {
  bool found = false;
  double coupling = 0.0;
  double uncertainty = 0.0;  // one-sided, equal to the local comb step
};

/// Smallest coupling in the (omega0, omega, target) slice whose converged
/// count is <= 1. Without a target, the first target present in the slice is
/// used. Throws DomainError if the slice is missing, has fewer than two
/// points, or is not strictly increasing in g2.
CollapseEstimate detect_collapse(const SweepResult& result, double omega0, double omega,
                                 std::optional<SweepTarget> target = std::nullopt);

/// Copy of `config` whose couplings are 200 homogeneous points on [0.98, 1.02] * center.
SweepConfig refine_comb(const SweepConfig& config, double center);

struct ExceptionalState {
  EigenPair pair;
  double reference_coupling = 0.0;  // 0.98 g_c
  double ground_state_overlap = 0.0;
};

/// The single converged pair of an exceptional row, and its overlap magnitude
/// with the ground state of the same block at 0.98 g_c. Throws DomainError
/// unless the row's exceptional flag is set.
ExceptionalState exceptional_state(const SweepRow& row, const FilterSettings& filter);

}  // namespace rabi
