#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rabi/lanczos.hpp"
#include "rabi/model.hpp"
#include "rabi/solver.hpp"
#include "test_support.hpp"

using namespace rabi;
using rabi::testing::dense_eigenvalues;
using rabi::testing::head;

namespace {

// Independent numpy dense diagonalization of the full Fock model at
// (omega0, omega, g2) = (1, 0.5, 0.2), N = 512; agrees with N = 1024 to 2e-14.
const std::vector<double> kFullFockReference{
    -0.5454208440552748, -0.14509937699960587, 0.05150735028141024, 0.25231447851258815,
    0.45712187220417555, 0.6028703295512855,  0.6728194832448169,  0.9386183576313176,
    0.9589713868552019,  1.1949570078609282};

std::vector<double> values_of(const std::vector<EigenPair>& pairs) {
  std::vector<double> out;
  for (const auto& p : pairs) out.push_back(p.value);
  return out;
}

double residual(const HermitianMatrix& h, const EigenPair& p) {
  Eigen::VectorXcd hv(p.vector.size());
  h.apply(std::span<const Complex>(p.vector.data(), p.vector.size()), std::span<Complex>(hv.data(), hv.size()));
  return (hv - p.value * p.vector).norm();
}

double residual(const TridiagonalMatrix& t, const EigenPair& p) {
  return (t.to_dense().cast<Complex>() * p.vector - p.value * p.vector).norm();
}

double orthonormality_defect(const std::vector<EigenPair>& pairs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    worst = std::max(worst, std::abs(pairs[i].vector.norm() - 1.0));
    for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, std::abs(pairs[i].vector.dot(pairs[j].vector)));
  }
  return worst;
}

EigenPair subspace_pair(Eigen::VectorXcd v, double value = 0.0) {
  EigenPair p;
  p.value = value;
  p.vector = std::move(v);
  p.layout = BasisLayout::Subspace;
  return p;
}

FilteredSpectrum spectrum_of(const std::vector<double>& values) {
  FilteredSpectrum s;
  for (double v : values) {
    EigenPair p;
    p.value = v;
    p.converged = true;
    s.pairs.push_back(p);
  }
  return s;
}

}  // namespace

TEST_CASE("dense Hermitian path") {
  SUBCASE("decoupled oscillator and qubit") {
    const auto pairs = solve_hermitian(build_full_fock({1.0, 1.0, 0.0}, 8), 4);
    const std::vector<double> expected{-0.5, 0.5, 0.5, 1.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(pairs[i].value == doctest::Approx(expected[i]).epsilon(1e-14));
    CHECK(orthonormality_defect(pairs) < 1e-12);
  }
  SUBCASE("identity") {
    HermitianMatrix id(5, 0);
    for (std::size_t i = 0; i < 5; ++i) id.add(i, i, 1.0);
    const auto pairs = solve_hermitian(id, 3);
    REQUIRE(pairs.size() == 3);
    for (const auto& p : pairs) CHECK(p.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(orthonormality_defect(pairs) < 1e-14);
  }
  SUBCASE("coupled reference values") {
    const auto h = build_full_fock({1.0, 0.5, 0.2}, 512);
    const auto pairs = solve_hermitian(h, 10);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(std::abs(pairs[i].value - kFullFockReference[i]) < 1e-9);
      CHECK(residual(h, pairs[i]) < 1e-10);
    }
  }
  SUBCASE("complex matrix") {
    const auto h = build_rotated_fock({0.9, 0.6, 0.2}, 64);
    const auto pairs = solve_hermitian(h, 12);
    const auto dense = head(dense_eigenvalues(h), 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(pairs[i].value - dense[i]) < 1e-12);
    for (const auto& p : pairs) CHECK(residual(h, p) < 1e-11);
    CHECK(orthonormality_defect(pairs) < 1e-12);
  }
}

TEST_CASE("iterative Hermitian path") {
  SUBCASE("full Fock model above the dense limit") {
    const auto h = build_full_fock({1.0, 0.5, 0.2}, 1024);
    REQUIRE(h.dimension() >= kDenseSolveLimit);
    const auto pairs = solve_hermitian(h, 10);
    REQUIRE(pairs.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(std::abs(pairs[i].value - kFullFockReference[i]) < 1e-9);
      CHECK(residual(h, pairs[i]) < 1e-8);
    }
    CHECK(orthonormality_defect(pairs) < 1e-10);
  }
  SUBCASE("complex rotated model above the dense limit") {
    const ModelParams p{1.0, 0.5, 0.2};
    const auto h = build_rotated_fock(p, 1024);
    const auto pairs = solve_hermitian(h, 10);
    // unitarily equivalent to the full model shifted by omega/2
    for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(pairs[i].value - (kFullFockReference[i] + 0.25)) < 1e-8);
    for (const auto& pair : pairs) CHECK(residual(h, pair) < 1e-8);
    CHECK(orthonormality_defect(pairs) < 1e-10);
  }
  SUBCASE("exact qubit degeneracy is resolved") {
    // omega0 = 0 makes every level doubly degenerate
    const auto h = build_rotated_fock({0.0, 0.5, 0.1}, 1024);
    const auto pairs = solve_hermitian(h, 8);
    for (std::size_t i = 0; i < 8; i += 2) CHECK(std::abs(pairs[i].value - pairs[i + 1].value) < 1e-9);
    CHECK(orthonormality_defect(pairs) < 1e-10);
    for (const auto& pair : pairs) CHECK(residual(h, pair) < 1e-8);
  }
  SUBCASE("Lanczos core against dense on a small banded matrix") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    HermitianMatrix h(300, 3);
    for (std::size_t i = 0; i < 300; ++i) {
      h.add(i, i, normal(rng));
      for (std::size_t d = 1; d <= 3 && i + d < 300; ++d) h.add(i + d, i, Complex(normal(rng), normal(rng)));
    }
    const auto result = detail::lowest_banded_eigenpairs(h, 6);
    const auto dense = head(dense_eigenvalues(h), 6);
    REQUIRE(result.values.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(result.values[i] - dense[i]) < 1e-9);
    CHECK(result.shift < dense[0]);
  }
  SUBCASE("banded Cholesky detects indefiniteness") {
    const auto h = build_full_fock({1.0, 1.0, 0.0}, 8);
    CHECK(detail::BandedCholesky::factor(h, -0.6).has_value());
    CHECK_FALSE(detail::BandedCholesky::factor(h, -0.4).has_value());
  }
}

TEST_CASE("solver input validation") {
  HermitianMatrix h(3, 1);
  h.add(0, 0, 1.0);
  CHECK_THROWS_AS(solve_hermitian(h, 0), SizingError);
  CHECK_THROWS_AS(solve_hermitian(h, 4), SizingError);
  h.add(1, 1, NAN);
  CHECK_THROWS_AS(solve_hermitian(h, 1), DomainError);
}

TEST_CASE("tail length") {
  CHECK(tail_length(0.2, 15) == 3);
  CHECK(tail_length(0.2, 10) == 2);
  CHECK(tail_length(0.2, 11) == 3);
  CHECK(tail_length(0.2, 1024) == 205);
  CHECK_THROWS_AS(tail_length(0.0, 10), DomainError);
  CHECK_THROWS_AS(tail_length(1.0, 10), DomainError);
}

TEST_CASE("convergence filter") {
  SUBCASE("localized vector has zero tail") {
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(10);
    e0(0) = 1.0;
    const auto s = convergence_filter({subspace_pair(e0)}, 0.2, 1e-6);
    CHECK(s.pairs[0].tail_norm == 0.0);
    CHECK(s.pairs[0].converged);
    CHECK(s.converged_count() == 1);
    CHECK(s.cutoff == 10);
  }
  SUBCASE("uniform vector") {
    const Eigen::VectorXcd u = Eigen::VectorXcd::Constant(10, 1.0 / std::sqrt(10.0));
    const auto s = convergence_filter({subspace_pair(u)}, 0.2, 1e-6);
    CHECK(s.pairs[0].tail_norm == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
    CHECK_FALSE(s.pairs[0].converged);
  }
  SUBCASE("qubit-tensored tail covers both components") {
    EigenPair p;
    p.layout = BasisLayout::QubitTensored;
    p.vector = Eigen::VectorXcd::Zero(20);
    p.vector(19) = 0.6;  // n = 9, lower
    p.vector(16) = 0.8;  // n = 8, upper
    CHECK(tail_norm(p, 0.2) == doctest::Approx(1.0));
    p.vector(16) = 0.0;
    p.vector(15) = 0.8;  // n = 7
    CHECK(tail_norm(p, 0.2) == doctest::Approx(0.6));
  }
  SUBCASE("ordering and degenerate tie-break") {
    Eigen::VectorXcd head_heavy = Eigen::VectorXcd::Zero(10);
    head_heavy(0) = 1.0;
    Eigen::VectorXcd tail_heavy = Eigen::VectorXcd::Zero(10);
    tail_heavy(9) = 1.0;
    const auto s = convergence_filter(
        {subspace_pair(tail_heavy, 1.0), subspace_pair(head_heavy, 1.0), subspace_pair(head_heavy, 0.5)});
    CHECK(s.pairs[0].value == 0.5);
    CHECK(s.pairs[1].tail_norm == 0.0);
    CHECK(s.pairs[2].tail_norm == 1.0);
  }
  SUBCASE("empty input") {
    const auto s = convergence_filter({});
    CHECK(s.pairs.empty());
    CHECK(s.converged_count() == 0);
  }
  SUBCASE("zero-length tail") {
    CHECK_THROWS_AS(convergence_filter({subspace_pair(Eigen::VectorXcd())}), SizingError);
  }
  SUBCASE("bad settings") {
    CHECK_THROWS_AS(convergence_filter({}, 0.2, 0.0), DomainError);
    CHECK_THROWS_AS(convergence_filter({}, 1.5, 1e-6), DomainError);
  }
  SUBCASE("idempotent") {
    const auto t = build_subspace_tridiagonal({Bargmann::QuarterEven, +1}, {1.0, 0.5, 0.24}, 512);
    const auto once = convergence_filter(solve_tridiagonal(t, 25));
    const auto twice = convergence_filter(once.pairs);
    REQUIRE(once.pairs.size() == twice.pairs.size());
    for (std::size_t i = 0; i < once.pairs.size(); ++i) {
      CHECK(once.pairs[i].value == twice.pairs[i].value);
      CHECK(once.pairs[i].converged == twice.pairs[i].converged);
      CHECK(once.pairs[i].tail_norm == twice.pairs[i].tail_norm);
    }
  }
  SUBCASE("tail norm shrinks with larger tail fraction start") {
    const auto t = build_subspace_tridiagonal({Bargmann::QuarterEven, +1}, {1.0, 0.5, 0.2}, 256);
    const auto pairs = solve_tridiagonal(t, 5);
    for (const auto& p : pairs) {
      double previous = 0.0;
      for (double f : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        const double tn = tail_norm(p, f);
        CHECK(tn >= previous);
        previous = tn;
      }
    }
  }
}

TEST_CASE("filter near the critical coupling") {
  const SubspaceLabel label{Bargmann::QuarterEven, +1};
  SUBCASE("ground state converged just below") {
    const auto t = build_subspace_tridiagonal(label, {1.0, 0.5, 0.245}, 8192);
    const auto s = convergence_filter(solve_tridiagonal(t, 25));
    CHECK(s.pairs[0].converged);
    CHECK(s.converged_count() > 1);
  }
  SUBCASE("single bound state at the critical coupling") {
    const auto t = build_subspace_tridiagonal(label, {1.0, 0.5, 0.25}, 8192);
    const auto s = convergence_filter(solve_tridiagonal(t, 25));
    CHECK(s.converged_count() == 1);
  }
}

TEST_CASE("alignment") {
  const std::vector<double> ref{0.0, 1.0, 2.0, 3.0};
  SUBCASE("identical") {
    const auto a = align_values(ref, ref);
    CHECK(a.offset == 0.0);
    CHECK(a.rms_residual == 0.0);
    CHECK(a.max_deviation == 0.0);
  }
  SUBCASE("shifted") {
    const auto a = align_values(ref, {0.25, 1.25, 2.25, 3.25});
    CHECK(a.offset == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(a.rms_residual < 1e-14);
  }
  SUBCASE("subset of the reference") {
    const auto a = align_values(ref, {1.1, 2.1, 3.1});
    CHECK(a.offset == doctest::Approx(-0.1).epsilon(1e-13));
  }
  SUBCASE("spectra wrapper") {
    const auto out = align_spectra(spectrum_of(ref), {spectrum_of({0.5, 1.5, 2.5}), spectrum_of({-1.0, 0.0, 1.0})});
    REQUIRE(out.size() == 2);
    CHECK(std::abs(out[0].offset + 0.5) < 1e-14);
    CHECK(std::abs(out[1].offset - 1.0) < 1e-14);
  }
  SUBCASE("too few values") {
    CHECK_THROWS_AS(align_values(ref, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(align_values({1.0, 2.0}, ref), DomainError);
  }
}

TEST_CASE("four subspaces reproduce the full spectrum") {
  for (double g2 : {0.0, 0.1, 0.2}) {
    CAPTURE(g2);
    const ModelParams p{1.0, 0.5, g2};
    std::vector<FilteredSpectrum> blocks;
    for (const char* name : {"q14+", "q14-", "q34+", "q34-"}) {
      const auto t = build_subspace_tridiagonal(SubspaceLabel::parse(name), p, 128);
      blocks.push_back(convergence_filter(solve_tridiagonal(t, 25)));
    }
    const auto full_spectrum = convergence_filter(solve_hermitian(build_full_fock(p, 256), 120));
    const auto alignments = align_spectra(full_spectrum, blocks);

    std::vector<double> union_values;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      CHECK(alignments[b].max_deviation < 1e-8);
      // offsets are physically omega/2 but only defined modulo the ladder spacing when g2 = 0
      if (g2 > 0.0) CHECK(std::abs(alignments[b].offset + 0.5 * p.omega) < 1e-8);
      for (double v : blocks[b].converged_values()) union_values.push_back(v - 0.5 * p.omega);
    }
    std::sort(union_values.begin(), union_values.end());
    const auto full = full_spectrum.converged_values();
    REQUIRE(union_values.size() >= 40);
    for (std::size_t i = 0; i < 40; ++i) CHECK(std::abs(union_values[i] - full[i]) < 1e-8);
  }
}

TEST_CASE("residuals at random parameter points") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double omega = 0.3 + u(rng);
    const ModelParams p{1.5 * u(rng), omega, 0.45 * omega * u(rng)};
    const auto t = build_subspace_tridiagonal({trial % 2 ? Bargmann::ThreeQuarterOdd : Bargmann::QuarterEven,
                                               trial % 3 ? +1 : -1},
                                              p, 512);
    for (const auto& pair : convergence_filter(solve_tridiagonal(t, 25)).pairs)
      if (pair.converged) CHECK(residual(t, pair) < 1e-8 * (1.0 + std::abs(pair.value)));
    const auto h = build_full_fock(p, 200);
    for (const auto& pair : convergence_filter(solve_hermitian(h, 25)).pairs)
      if (pair.converged) CHECK(residual(h, pair) < 1e-8 * (1.0 + std::abs(pair.value)));
  }
}

TEST_CASE("phase normalization") {
  Eigen::VectorXcd v(3);
  v << Complex(0.0, 0.0), Complex(0.0, -0.6), Complex(0.8, 0.0);
  normalize_phase(v);
  CHECK(std::abs(v(1) - Complex(0.6, 0.0)) < 1e-15);
  CHECK(std::abs(v(2) - Complex(0.0, 0.8)) < 1e-15);
  CHECK(values_of({}).empty());
}
