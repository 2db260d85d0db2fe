#include "rabi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rabi/analytic.hpp"
#include "rabi/model.hpp"

namespace rabi {

std::string SweepTarget::name() const { return full ? "full" : label.name(); }

SweepTarget SweepTarget::parse(const std::string& text) {
  if (text == "full") return full_model();
  return subspace(SubspaceLabel::parse(text));
}

FilteredSpectrum compute_spectrum(const ModelParams& params, const SweepTarget& target, std::size_t cutoff,
                                  const FilterSettings& filter) {
  if (filter.requested_eigenpairs < 1) throw SizingError("at least one eigenpair must be requested");
  if (target.full) {
    const HermitianMatrix h = build_full_fock(params, cutoff);
    const std::size_t k = std::min(filter.requested_eigenpairs, h.dimension());
    return convergence_filter(solve_hermitian(h, k, BasisLayout::QubitTensored), filter.tail_fraction,
                              filter.tolerance);
  }
  const TridiagonalMatrix t = build_subspace_tridiagonal(target.label, params, cutoff);
  const std::size_t k = std::min(filter.requested_eigenpairs, t.dimension());
  return convergence_filter(solve_tridiagonal(t, k), filter.tail_fraction, filter.tolerance);
}

std::vector<double> CouplingSpec::couplings_for(double omega) const {
  if (kind == Kind::Absolute) return values;
  const double gc = critical_coupling(omega);
  std::vector<double> out;
  out.reserve(values.size());
  for (double f : values) out.push_back(f * gc);
  return out;
}

std::vector<double> homogeneous_grid(double start, double stop, std::size_t count) {
  if (count == 0) throw SizingError("grid needs at least one point");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw DomainError("grid bounds must be finite");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double span = stop - start;
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + span * (static_cast<double>(i) / last);
  out.back() = stop;
  return out;
}

void SweepConfig::validate() const {
  if (omega0_grid.empty()) throw DomainError("omega0 grid is empty");
  if (omega_grid.empty()) throw DomainError("omega grid is empty");
  if (coupling.values.empty()) throw DomainError("coupling grid is empty");
  if (targets.empty()) throw DomainError("no subspaces selected");
  if (cutoff < kMinSweepCutoff)
    throw SizingError("cutoff must be at least " + std::to_string(kMinSweepCutoff));
  if (filter.requested_eigenpairs < 2) throw SizingError("requested eigenpairs must be at least 2");
  if (!(filter.tail_fraction > 0.0 && filter.tail_fraction < 1.0))
    throw DomainError("tail fraction must lie in (0, 1)");
  if (!(filter.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  for (double w0 : omega0_grid)
    for (double w : omega_grid)
      for (double g : coupling.couplings_for(w > 0.0 ? w : 1.0)) ModelParams{w0, w, g}.validate();
}

namespace {

SweepRow evaluate_point(const ModelParams& params, const SweepTarget& target, std::size_t cutoff,
                        const FilterSettings& filter) {
  SweepRow row;
  row.params = params;
  row.target = target;
  row.cutoff = cutoff;
  try {
    const FilteredSpectrum s = compute_spectrum(params, target, cutoff, filter);
    row.energies = s.converged_values();
    row.converged_count = row.energies.size();
    row.collapsed = row.converged_count <= 1;
    row.exceptional = row.converged_count == 1;
  } catch (const std::exception& e) {
    row.failed = true;
    row.failure = e.what();
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options) {
  config.validate();
  struct Point {
    ModelParams params;
    SweepTarget target;
  };
  std::vector<Point> points;
  for (double w0 : config.omega0_grid)
    for (double w : config.omega_grid)
      for (const auto& target : config.targets)
        for (double g : config.coupling.couplings_for(w)) points.push_back({{w0, w, g}, target});

  SweepResult result;
  result.filter = config.filter;
  result.rows.resize(points.size());

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(points.size(), 1));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++)
      result.rows[i] = evaluate_point(points[i].params, points[i].target, config.cutoff, config.filter);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return result;
}

CollapseEstimate detect_collapse(const SweepResult& result, double omega0, double omega,
                                 std::optional<SweepTarget> target) {
  std::vector<const SweepRow*> slice;
  for (const auto& row : result.rows) {
    if (row.params.omega0 != omega0 || row.params.omega != omega) continue;
    if (!target) target = row.target;
    if (row.target == *target) slice.push_back(&row);
  }
  if (slice.size() < 2) throw DomainError("collapse detection needs a slice with at least two couplings");
  for (std::size_t i = 1; i < slice.size(); ++i)
    if (!(slice[i]->params.g2 > slice[i - 1]->params.g2))
      throw DomainError("coupling comb must be strictly increasing");

  CollapseEstimate est;
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const SweepRow& row = *slice[i];
    if (row.failed || row.converged_count > 1) continue;
    est.found = true;
    est.coupling = row.params.g2;
    est.uncertainty = i > 0 ? row.params.g2 - slice[i - 1]->params.g2 : slice[1]->params.g2 - row.params.g2;
    break;
  }
  return est;
}

SweepConfig refine_comb(const SweepConfig& config, double center) {
  if (!(center > 0.0) || !std::isfinite(center)) throw DomainError("comb center must be positive");
  SweepConfig refined = config;
  refined.coupling.kind = CouplingSpec::Kind::Absolute;
  refined.coupling.values = homogeneous_grid(0.98 * center, 1.02 * center, kRefinedCombPoints);
  return refined;
}

ExceptionalState exceptional_state(const SweepRow& row, const FilterSettings& filter) {
  if (!row.exceptional) throw DomainError("row does not carry a single converged eigenpair");
  const FilteredSpectrum at_point = compute_spectrum(row.params, row.target, row.cutoff, filter);
  ExceptionalState out;
  bool found = false;
  for (const auto& p : at_point.pairs) {
    if (!p.converged) continue;
    if (found) throw DomainError("row is no longer exceptional on recomputation");
    out.pair = p;
    found = true;
  }
  if (!found) throw DomainError("row is no longer exceptional on recomputation");

  ModelParams reference = row.params;
  reference.g2 = 0.98 * critical_coupling(row.params.omega);
  out.reference_coupling = reference.g2;
  FilterSettings one = filter;
  one.requested_eigenpairs = 1;
  const FilteredSpectrum ground = compute_spectrum(reference, row.target, row.cutoff, one);
  out.ground_state_overlap = std::abs(ground.pairs.front().vector.dot(out.pair.vector));
  return out;
}

}  // namespace rabi
