#pragma once

#include <span>
#include <string>

#include "rabi/solver.hpp"
#include "rabi/sweep.hpp"

namespace rabi::cli {

/// Fixed 12-significant-digit formatting with '.' as decimal separator.
std::string format_number(double value);

/// `index,energy,tail_norm,converged`.
std::string spectrum_csv(const FilteredSpectrum& spectrum);

/// `omega0,omega,g2,cutoff,subspace,converged_count,collapsed,e0..e{k-1}` with
/// k = requested eigenpairs. Missing energies are empty; rows whose solve
/// failed carry `failed` in the collapsed column and an empty count.
std::string sweep_csv(const SweepResult& result);

struct ModeSample {
  double x = 0.0;
  Complex analytic;
  Complex numeric;
};

/// `x,analytic_re,analytic_im,numeric_re,numeric_im,absdiff`.
std::string modes_csv(std::span<const ModeSample> samples);

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so a failed run never leaves a partial file. Throws std::runtime_error.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace rabi::cli
