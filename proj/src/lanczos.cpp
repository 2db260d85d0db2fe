#include "rabi/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rabi/types.hpp"

namespace rabi::detail {

std::optional<BandedCholesky> BandedCholesky::factor(const HermitianMatrix& h, double shift) {
  const std::size_t n = h.dimension();
  const std::size_t b = h.bandwidth();
  BandedCholesky chol(n, b);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = i >= b ? i - b : 0;
    for (std::size_t j = first; j < i; ++j) {
      Complex s = h(i, j);
      for (std::size_t k = first; k < j; ++k) s -= chol.at(i, i - k) * std::conj(chol.at(j, j - k));
      chol.at(i, i - j) = s / chol.at(j, 0).real();
    }
    double pivot = h(i, i).real() - shift;
    for (std::size_t k = first; k < i; ++k) pivot -= std::norm(chol.at(i, i - k));
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return std::nullopt;
    chol.at(i, 0) = std::sqrt(pivot);
  }
  return chol;
}

void BandedCholesky::solve(Eigen::Ref<Eigen::VectorXcd> rhs) const {
  for (std::size_t i = 0; i < n_; ++i) {
    Complex s = rhs(static_cast<Eigen::Index>(i));
    const std::size_t reach = std::min(i, b_);
    for (std::size_t d = 1; d <= reach; ++d) s -= at(i, d) * rhs(static_cast<Eigen::Index>(i - d));
    rhs(static_cast<Eigen::Index>(i)) = s / at(i, 0).real();
  }
  for (std::size_t i = n_; i-- > 0;) {
    Complex s = rhs(static_cast<Eigen::Index>(i));
    for (std::size_t d = 1; d <= b_ && i + d < n_; ++d)
      s -= std::conj(at(i + d, d)) * rhs(static_cast<Eigen::Index>(i + d));
    rhs(static_cast<Eigen::Index>(i)) = s / at(i, 0).real();
  }
}

namespace {

Eigen::VectorXcd multiply(const HermitianMatrix& h, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y(x.size());
  h.apply(std::span<const Complex>(x.data(), static_cast<std::size_t>(x.size())),
          std::span<Complex>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

// Places the shift below lambda_min: bisection between the Gershgorin lower
// bound (always definite) and the smallest diagonal entry (never above
// lambda_min), then backs off by a margin relative to the bracket.
std::pair<double, BandedCholesky> choose_shift(const HermitianMatrix& h) {
  const std::size_t n = h.dimension();
  const std::size_t b = h.bandwidth();
  double gershgorin = std::numeric_limits<double>::infinity();
  double min_diag = gershgorin;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    const std::size_t lo = i >= b ? i - b : 0;
    const std::size_t hi = std::min(n - 1, i + b);
    for (std::size_t j = lo; j <= hi; ++j)
      if (j != i) radius += std::abs(h(i, j));
    const double d = h(i, i).real();
    gershgorin = std::min(gershgorin, d - radius);
    min_diag = std::min(min_diag, d);
    scale = std::max(scale, std::abs(d) + radius);
  }
  double lo = gershgorin - 1e-8 * std::max(1.0, scale);
  double hi = min_diag;
  for (int iter = 0; iter < 80 && hi - lo > 1e-7 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (BandedCholesky::factor(h, mid))
      lo = mid;
    else
      hi = mid;
  }
  double shift = lo - 1e-2 * std::max(1.0, std::abs(lo));
  for (;;) {
    if (auto chol = BandedCholesky::factor(h, shift)) return {shift, std::move(*chol)};
    shift -= 1e-2 * std::max(1.0, std::abs(shift));
  }
}

class Basis {
 public:
  Basis(Eigen::Index n, Eigen::Index capacity) : v_(n, capacity), rng_(0x1a2c05ULL) {}

  Eigen::Index size() const { return used_; }
  Eigen::Index capacity() const { return v_.cols(); }
  auto columns() const { return v_.leftCols(used_); }
  auto column(Eigen::Index j) const { return v_.col(j); }

  /// Orthonormalizes x against the basis and appends it; a numerically
  /// dependent candidate is replaced by a fresh random direction.
  void append(Eigen::VectorXcd x) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      const double original = x.norm();
      for (int pass = 0; pass < 2 && used_ > 0; ++pass) {
        const Eigen::VectorXcd coeffs = columns().adjoint() * x;
        x.noalias() -= columns() * coeffs;
      }
      const double remaining = x.norm();
      if (remaining > 1e-8 * original && remaining > 0.0) {
        v_.col(used_++) = x / remaining;
        return;
      }
      x = random_vector();
    }
    throw ConvergenceError("Lanczos basis could not be extended");
  }

  Eigen::VectorXcd random_vector() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd x(v_.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = Complex(u(rng_), u(rng_));
    return x;
  }

 private:
  Eigen::MatrixXcd v_;
  Eigen::Index used_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace

LanczosResult lowest_banded_eigenpairs(const HermitianMatrix& h, std::size_t count,
                                       const LanczosOptions& options) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  const auto want = static_cast<Eigen::Index>(count);
  if (want < 1 || want > n) throw SizingError("Lanczos: requested count out of range");
  const Eigen::Index block = std::min<Eigen::Index>(std::max<std::size_t>(options.block_size, 1), n);
  const Eigen::Index capacity =
      std::min<Eigen::Index>(n, std::max<Eigen::Index>(static_cast<Eigen::Index>(options.max_basis),
                                                       want + 2 * block));

  auto [shift, chol] = choose_shift(h);

  Basis basis(n, capacity);
  for (Eigen::Index j = 0; j < block; ++j) basis.append(basis.random_vector());

  Eigen::MatrixXcd op_basis(n, capacity);       // (H - shift)^{-1} applied to each basis column
  Eigen::MatrixXcd projected(capacity, capacity);  // basis^H op_basis
  Eigen::Index applied = 0;
  Eigen::Index blocks_since_check = 0;

  for (;;) {
    const Eigen::Index first_new = applied;
    for (Eigen::Index j = applied; j < basis.size(); ++j) {
      op_basis.col(j) = basis.column(j);
      chol.solve(op_basis.col(j));
    }
    applied = basis.size();
    for (Eigen::Index j = first_new; j < applied; ++j) {
      projected.col(j).head(applied) = basis.columns().adjoint() * op_basis.col(j);
    }
    for (Eigen::Index j = 0; j < first_new; ++j) {
      projected.col(j).segment(first_new, applied - first_new) =
          basis.columns().middleCols(first_new, applied - first_new).adjoint() * op_basis.col(j);
    }
    ++blocks_since_check;

    const bool full = basis.size() >= capacity;
    if (full || (applied >= want + block && blocks_since_check >= 4)) {
      blocks_since_check = 0;
      Eigen::MatrixXcd t = projected.topLeftCorner(applied, applied);
      t = 0.5 * (t + t.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(t);
      LanczosResult result;
      result.shift = shift;
      result.basis_size = static_cast<std::size_t>(applied);
      bool converged = true;
      // Largest Ritz values of the inverse map the lowest eigenvalues of H.
      for (Eigen::Index r = 0; r < want; ++r) {
        const Eigen::Index col = applied - 1 - r;
        Eigen::VectorXcd y = basis.columns() * ritz.eigenvectors().col(col);
        y.normalize();
        const Eigen::VectorXcd hy = multiply(h, y);
        const double lambda = y.dot(hy).real();
        const double residual = (hy - lambda * y).norm();
        if (residual > options.residual_tolerance * std::max(1.0, std::abs(lambda))) converged = false;
        result.values.push_back(lambda);
        result.vectors.push_back(std::move(y));
      }
      if (converged) {
        std::vector<std::size_t> order(result.values.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return result.values[a] < result.values[b]; });
        LanczosResult sorted;
        sorted.shift = result.shift;
        sorted.basis_size = result.basis_size;
        for (auto i : order) {
          sorted.values.push_back(result.values[i]);
          sorted.vectors.push_back(std::move(result.vectors[i]));
        }
        return sorted;
      }
      if (full) throw ConvergenceError("Lanczos did not converge within the basis limit");
    }
    if (full) throw ConvergenceError("Lanczos basis exhausted before convergence check");

    const Eigen::Index room = std::min(block, capacity - basis.size());
    for (Eigen::Index j = 0; j < room; ++j) basis.append(op_basis.col(applied - block + j));
  }
}

}  // namespace rabi::detail
