#include "rabi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "rabi/lanczos.hpp"
#include "rabi/tridiagonal_eigen.hpp"
#include "rabi/types.hpp"

namespace rabi {

std::size_t EigenPair::boson_cutoff() const {
  const auto n = static_cast<std::size_t>(vector.size());
  return layout == BasisLayout::QubitTensored ? n / 2 : n;
}

std::size_t FilteredSpectrum::converged_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const EigenPair& p) { return p.converged; }));
}

std::vector<double> FilteredSpectrum::converged_values() const {
  std::vector<double> out;
  for (const auto& p : pairs)
    if (p.converged) out.push_back(p.value);
  return out;
}

void normalize_phase(Eigen::VectorXcd& v) {
  if (v.size() == 0) return;
  const double largest = v.cwiseAbs().maxCoeff();
  if (largest == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8 * largest) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

namespace {

void check_count(std::size_t k, std::size_t dimension) {
  if (k < 1 || k > dimension)
    throw SizingError("requested " + std::to_string(k) + " eigenpairs from a matrix of dimension " +
                      std::to_string(dimension));
}

}  // namespace

std::vector<EigenPair> solve_tridiagonal(const TridiagonalMatrix& matrix, std::size_t k) {
  if (!matrix.well_formed()) throw DomainError("tridiagonal matrix has non-finite or inconsistent entries");
  check_count(k, matrix.dimension());
  auto raw = detail::lowest_tridiagonal_eigenpairs(matrix, k);
  std::vector<EigenPair> out;
  out.reserve(raw.values.size());
  for (std::size_t j = 0; j < raw.values.size(); ++j) {
    EigenPair p;
    p.value = raw.values[j];
    p.layout = BasisLayout::Subspace;
    p.vector = Eigen::Map<const Eigen::VectorXd>(raw.vectors[j].data(),
                                                 static_cast<Eigen::Index>(raw.vectors[j].size()))
                   .cast<Complex>();
    normalize_phase(p.vector);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<EigenPair> solve_hermitian(const HermitianMatrix& matrix, std::size_t k, BasisLayout layout) {
  if (!matrix.all_finite()) throw DomainError("Hermitian matrix has non-finite entries");
  check_count(k, matrix.dimension());
  std::vector<EigenPair> out;
  auto push = [&](double value, Eigen::VectorXcd vec) {
    EigenPair p;
    p.value = value;
    p.layout = layout;
    p.vector = std::move(vec);
    p.vector.normalize();
    normalize_phase(p.vector);
    out.push_back(std::move(p));
  };
  const auto kk = static_cast<Eigen::Index>(k);
  if (matrix.dimension() < kDenseSolveLimit) {
    if (matrix.is_real()) {
      const Eigen::MatrixXd dense = matrix.to_dense().real();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
      if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
      for (Eigen::Index j = 0; j < kk; ++j)
        push(es.eigenvalues()(j), es.eigenvectors().col(j).cast<Complex>());
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix.to_dense());
      if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
      for (Eigen::Index j = 0; j < kk; ++j) push(es.eigenvalues()(j), es.eigenvectors().col(j));
    }
    return out;
  }
  auto result = detail::lowest_banded_eigenpairs(matrix, k);
  for (std::size_t j = 0; j < result.values.size(); ++j) push(result.values[j], std::move(result.vectors[j]));
  return out;
}

std::size_t tail_length(double tail_fraction, std::size_t cutoff) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) throw DomainError("tail fraction must lie in (0, 1)");
  const double exact = tail_fraction * static_cast<double>(cutoff);
  const double nearest = std::round(exact);
  // 0.2 * 15 evaluates to 3.0000000000000004; treat it as 3.
  const double len = std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact) ? nearest : std::ceil(exact);
  return static_cast<std::size_t>(len);
}

double tail_norm(const EigenPair& pair, double tail_fraction) {
  const std::size_t cutoff = pair.boson_cutoff();
  const std::size_t len = tail_length(tail_fraction, cutoff);
  if (len == 0) throw SizingError("convergence tail has zero length");
  const std::size_t per_level = pair.layout == BasisLayout::QubitTensored ? 2 : 1;
  const auto count = static_cast<Eigen::Index>(len * per_level);
  return pair.vector.tail(std::min(count, pair.vector.size())).norm();
}

FilteredSpectrum convergence_filter(std::vector<EigenPair> pairs, double tail_fraction, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("filter tolerance must be positive");
  tail_length(tail_fraction, 1);  // validates the fraction
  FilteredSpectrum spectrum;
  spectrum.tail_fraction = tail_fraction;
  spectrum.tolerance = tolerance;
  if (pairs.empty()) return spectrum;
  spectrum.cutoff = pairs.front().boson_cutoff();
  for (auto& p : pairs) {
    p.tail_norm = tail_norm(p, tail_fraction);
    p.converged = p.tail_norm < tolerance;
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  // Degenerate runs: ascending tail norm.
  std::size_t start = 0;
  for (std::size_t i = 1; i <= pairs.size(); ++i) {
    const bool run_ends = i == pairs.size() || pairs[i].value - pairs[i - 1].value >
                                                  1e-12 * std::max(1.0, std::abs(pairs[i].value));
    if (!run_ends) continue;
    std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(start),
                     pairs.begin() + static_cast<std::ptrdiff_t>(i),
                     [](const EigenPair& a, const EigenPair& b) { return a.tail_norm < b.tail_norm; });
    start = i;
  }
  spectrum.pairs = std::move(pairs);
  return spectrum;
}

namespace {

struct AlignmentFit {
  double offset = 0.0;
  std::size_t matched = 0;
  double sum_sq = 0.0;
  double max_dev = 0.0;
};

// Fixed-point iteration of the nearest-neighbour mean from a starting offset.
// Values landing above the top of the (truncated) reference are unmatched.
AlignmentFit refine_offset(const std::vector<double>& ref, const std::vector<double>& vals, double offset,
                           double ceiling) {
  auto nearest = [&](double x) {
    auto it = std::lower_bound(ref.begin(), ref.end(), x);
    if (it == ref.end()) return ref.back();
    if (it == ref.begin()) return *it;
    return (*it - x) < (x - *(it - 1)) ? *it : *(it - 1);
  };
  AlignmentFit fit;
  for (int iter = 0; iter < 100; ++iter) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : vals) {
      if (v + offset > ceiling) continue;
      sum += nearest(v + offset) - v;
      ++n;
    }
    if (n == 0) break;
    const double next = sum / static_cast<double>(n);
    const bool settled = next == offset;
    offset = next;
    if (settled) break;
  }
  fit.offset = offset;
  for (double v : vals) {
    if (v + offset > ceiling) continue;
    const double dev = v + offset - nearest(v + offset);
    fit.sum_sq += dev * dev;
    fit.max_dev = std::max(fit.max_dev, std::abs(dev));
    ++fit.matched;
  }
  return fit;
}

}  // namespace

Alignment align_values(const std::vector<double>& reference, const std::vector<double>& values) {
  if (reference.size() < 3 || values.size() < 3)
    throw DomainError("alignment needs at least three converged values per spectrum");
  std::vector<double> ref = reference;
  std::sort(ref.begin(), ref.end());
  std::vector<double> vals = values;
  std::sort(vals.begin(), vals.end());

  const double half_spacing = 0.5 * (ref.back() - ref.front()) / static_cast<double>(ref.size() - 1);
  const double ceiling = ref.back() + half_spacing;
  const std::size_t required = std::max<std::size_t>(3, (vals.size() + 1) / 2);

  // Global search: every reference value is tried as the image of the lowest value.
  std::optional<AlignmentFit> best;
  for (double r : ref) {
    const AlignmentFit fit = refine_offset(ref, vals, r - vals.front(), ceiling);
    if (fit.matched < required) continue;
    const double rms = std::sqrt(fit.sum_sq / static_cast<double>(fit.matched));
    if (!best) {
      best = fit;
      continue;
    }
    const double best_rms = std::sqrt(best->sum_sq / static_cast<double>(best->matched));
    const double slack = 1e-12 * std::max(1.0, std::abs(ref.back()));
    if (rms < best_rms - slack || (rms <= best_rms + slack && std::abs(fit.offset) < std::abs(best->offset)))
      best = fit;
  }
  if (!best) throw DomainError("spectrum does not overlap the reference range");
  Alignment a;
  a.offset = best->offset;
  a.rms_residual = std::sqrt(best->sum_sq / static_cast<double>(best->matched));
  a.max_deviation = best->max_dev;
  return a;
}

std::vector<Alignment> align_spectra(const FilteredSpectrum& reference,
                                     const std::vector<FilteredSpectrum>& others) {
  const auto ref = reference.converged_values();
  std::vector<Alignment> out;
  out.reserve(others.size());
  for (const auto& s : others) out.push_back(align_values(ref, s.converged_values()));
  return out;
}

}  // namespace rabi
