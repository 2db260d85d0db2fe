#include "rabi/tridiagonal_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace rabi::detail {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

// View of rows [begin, end) of the full matrix.
struct Block {
  const double* diag;
  const double* off;  // off[i] couples i and i+1 inside the block
  std::size_t size;
};

double block_norm(const Block& b) {
  double norm = 0.0;
  for (std::size_t i = 0; i < b.size; ++i) {
    double row = std::abs(b.diag[i]);
    if (i > 0) row += std::abs(b.off[i - 1]);
    if (i + 1 < b.size) row += std::abs(b.off[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

double pivot_floor(const Block& b) {
  double max_off2 = 1.0;
  for (std::size_t i = 0; i + 1 < b.size; ++i) max_off2 = std::max(max_off2, b.off[i] * b.off[i]);
  return kSafeMin * max_off2;
}

std::size_t count_below(const Block& b, double x, double pivmin) {
  std::size_t count = 0;
  double q = b.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < b.size; ++i) {
    q = b.diag[i] - x - b.off[i - 1] * b.off[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> bisect_lowest(const Block& b, std::size_t count) {
  if (b.size == 1) return {b.diag[0]};
  const double norm = block_norm(b);
  const double pivmin = pivot_floor(b);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < b.size; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(b.off[i - 1]);
    if (i + 1 < b.size) radius += std::abs(b.off[i]);
    lo = std::min(lo, b.diag[i] - radius);
    hi = std::max(hi, b.diag[i] + radius);
  }
  const double pad = 2.0 * kEps * norm + 4.0 * pivmin + kSafeMin;
  lo -= pad;
  hi += pad;

  std::vector<double> values(count);
  double floor = lo;
  for (std::size_t j = 0; j < count; ++j) {
    double a = floor;
    double c = hi;
    for (int iter = 0; iter < 256; ++iter) {
      const double tol = 2.0 * kEps * std::max(std::abs(a), std::abs(c)) + 4.0 * pivmin;
      if (c - a <= tol) break;
      const double mid = 0.5 * (a + c);
      if (mid <= a || mid >= c) break;
      if (count_below(b, mid, pivmin) <= j)
        a = mid;
      else
        c = mid;
    }
    values[j] = 0.5 * (a + c);
    floor = a;
  }
  return values;
}

// LU factorization with partial pivoting of (T - shift I) for a tridiagonal T.
// Row i of U holds u0[i] (diagonal), u1[i], u2[i] (first and second superdiagonal).
struct TridiagonalLU {
  std::vector<double> u0, u1, u2, mult;
  std::vector<char> swapped;

  TridiagonalLU(const Block& b, double shift, double tiny) {
    const std::size_t n = b.size;
    u0.assign(n, 0.0);
    u1.assign(n, 0.0);
    u2.assign(n, 0.0);
    mult.assign(n, 0.0);
    swapped.assign(n, 0);
    // Working row i: (diag_i, sup_i, sup2_i); next row: (sub_i, diag_{i+1}, sup_{i+1}).
    double diag = b.diag[0] - shift;
    double sup = n > 1 ? b.off[0] : 0.0;
    double sup2 = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double sub = b.off[i];
      const double next_diag = b.diag[i + 1] - shift;
      const double next_sup = i + 2 < n ? b.off[i + 1] : 0.0;
      if (std::abs(diag) >= std::abs(sub)) {
        if (diag == 0.0) diag = tiny;
        const double l = sub / diag;
        mult[i] = l;
        u0[i] = diag;
        u1[i] = sup;
        u2[i] = sup2;
        diag = next_diag - l * sup;
        sup = next_sup;
        sup2 = 0.0;
      } else {
        const double l = diag / sub;
        mult[i] = l;
        swapped[i] = 1;
        u0[i] = sub;
        u1[i] = next_diag;
        u2[i] = next_sup;
        const double new_diag = sup - l * next_diag;
        const double new_sup = -l * next_sup;
        diag = new_diag;
        sup = new_sup;
        sup2 = 0.0;
      }
    }
    if (std::abs(diag) < tiny) diag = diag < 0.0 ? -tiny : tiny;
    u0[n - 1] = diag;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (std::abs(u0[i]) < tiny) u0[i] = u0[i] < 0.0 ? -tiny : tiny;
  }

  void solve(std::vector<double>& x) const {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= mult[i] * x[i];
    }
    for (std::size_t k = n; k-- > 0;) {
      double s = x[k];
      if (k + 1 < n) s -= u1[k] * x[k + 1];
      if (k + 2 < n) s -= u2[k] * x[k + 2];
      x[k] = s / u0[k];
    }
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

std::vector<std::vector<double>> inverse_iteration(const Block& b, std::vector<double>& values) {
  const std::size_t n = b.size;
  std::vector<std::vector<double>> vectors;
  vectors.reserve(values.size());
  if (n == 1) {
    vectors.push_back({1.0});
    return vectors;
  }
  const double norm = std::max(block_norm(b), kSafeMin);
  const double cluster_gap = 1e-3 * norm;
  const double tiny = kEps * norm;
  std::size_t cluster_start = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j > 0) {
      if (values[j] - values[j - 1] > cluster_gap) cluster_start = j;
      // Coincident shifts would reproduce the same vector.
      const double min_sep = 10.0 * kEps * std::max(std::abs(values[j]), norm * 1e-3);
      if (values[j] - values[j - 1] < min_sep) values[j] = values[j - 1] + min_sep;
    }
    const TridiagonalLU lu(b, values[j], tiny);
    std::mt19937_64 rng(0x5eed0000ULL + j);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = uniform(rng);
    normalize(x);
    for (int iter = 0; iter < 4; ++iter) {
      lu.solve(x);
      for (std::size_t c = cluster_start; c < j; ++c) {
        const double proj = dot(vectors[c], x);
        for (std::size_t i = 0; i < n; ++i) x[i] -= proj * vectors[c][i];
      }
      normalize(x);
    }
    vectors.push_back(std::move(x));
  }
  return vectors;
}

}  // namespace

std::size_t sturm_count(const TridiagonalMatrix& t, double x) {
  const Block b{t.diag.data(), t.offdiag.data(), t.diag.size()};
  return count_below(b, x, pivot_floor(b));
}

TridiagonalEigenpairs lowest_tridiagonal_eigenpairs(const TridiagonalMatrix& t, std::size_t count) {
  const std::size_t n = t.dimension();
  struct Candidate {
    double value;
    std::size_t begin;
    std::vector<double> local;
  };
  std::vector<Candidate> candidates;

  std::size_t begin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool split =
        i + 1 == n || t.offdiag[i] == 0.0 ||
        std::abs(t.offdiag[i]) <= kEps * std::sqrt(std::abs(t.diag[i])) * std::sqrt(std::abs(t.diag[i + 1]));
    if (!split) continue;
    const Block b{t.diag.data() + begin, t.offdiag.data() + begin, i + 1 - begin};
    const std::size_t want = std::min(count, b.size);
    std::vector<double> values = bisect_lowest(b, want);
    std::vector<double> reported = values;
    auto vectors = inverse_iteration(b, values);
    for (std::size_t j = 0; j < want; ++j)
      candidates.push_back({reported[j], begin, std::move(vectors[j])});
    begin = i + 1;
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  candidates.resize(std::min(count, candidates.size()));

  TridiagonalEigenpairs out;
  for (auto& c : candidates) {
    out.values.push_back(c.value);
    std::vector<double> full(n, 0.0);
    std::copy(c.local.begin(), c.local.end(), full.begin() + static_cast<std::ptrdiff_t>(c.begin));
    out.vectors.push_back(std::move(full));
  }
  return out;
}

}  // namespace rabi::detail
