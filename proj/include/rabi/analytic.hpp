#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rabi/matrix.hpp"
#include "rabi/types.hpp"

// Closed forms for the degenerate-qubit limit omega0 -> 0, where every block
// reduces to H0 = (alpha_+ p^2 + alpha_- q^2) / 2 with alpha_+- = omega +- 2 g2.
//
// Energies are those of H0 itself. Published tables that quote a
// dimensionless lambda = E / omega divide everything below by omega.

namespace rabi {

enum class Regime { Harmonic, FreeParticle, Inverted };

const char* regime_name(Regime r);

struct RegimeData {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  std::optional<double> alpha;  // sqrt(alpha_- / alpha_+), Harmonic only
  std::optional<double> Omega;  // sqrt(omega^2 - 4 g2^2), Harmonic and FreeParticle
  Regime regime = Regime::Harmonic;

  /// Oscillator width beta = (alpha_- / alpha_+)^(1/4); Harmonic only.
  double width() const;
};

/// Regime from the sign of alpha_-; |alpha_-| <= free_particle_epsilon counts as zero.
RegimeData classify_regime(const ModelParams& params, double free_particle_epsilon = 0.0);

/// g_c = omega / 2.
double critical_coupling(double omega);

/// E_m = Omega (2m + 2q), m = 0..count-1, for omega0 = 0 in the Harmonic regime.
/// Throws RegimeError (collapsed) outside the Harmonic regime and DomainError for omega0 != 0.
std::vector<double> degenerate_spectrum(const ModelParams& params, const SubspaceLabel& label,
                                        std::size_t count);

/// Normalized bare oscillator functions phi_0..phi_max_level at y, by the
/// normalized three-term recurrence (no factorials, no overflow).
std::vector<double> oscillator_functions(std::size_t max_level, double y);

/// Unit-L2 oscillator eigenfunction of H0 with width beta:
///   psi_n(x) = sqrt(beta) phi_n(beta x).
std::vector<double> hermite_gauss(std::size_t level, const RegimeData& regime, std::span<const double> x);

/// (2 pi)^(-1/2) exp(+- i sqrt(lambda) x). Throws DomainError for lambda < 0.
std::vector<Complex> plane_wave(double lambda, int sign, std::span<const double> x);

/// Kummer 1F1(a; b; z) by its power series, stopped once terms fall below
/// 1e-14 relative and are shrinking. Negative z goes through Kummer's
/// transformation unless the series terminates. Requires b not a
/// non-positive integer and |z| <= 50 (any z for terminating series).
double kummer_1f1(double a, double b, double z);

enum class GaussianWidth {
  AsDisplayed,  // exp(-alpha x^2/4) 1F1(.; .; alpha x^2/2), alpha = sqrt(alpha_-/alpha_+)
  Standard,     // same with alpha -> 2 alpha, which solves the H0 eigen-equation
};

/// c1 exp(-s x^2/4) 1F1(-nu - 1/4; 1/2; s x^2/2) + c2 x exp(-s x^2/4) 1F1(-nu + 1/4; 3/2; s x^2/2),
/// with s set by `width`. Harmonic regime only.
std::vector<double> general_solution(double nu, const RegimeData& regime, double c1, double c2,
                                     std::span<const double> x,
                                     GaussianWidth width = GaussianWidth::AsDisplayed);

/// nu for which general_solution terminates at energy E of H0: nu = E / (2 Omega) - 1/2.
/// The n-th level E_n = Omega (n + 1/2) maps to nu = n/2 - 1/4.
double scaled_eigenvalue(double energy, const RegimeData& regime);

enum class ModeKind { HermiteGauss, PlaneWave };

struct AnalyticMode {
  ModeKind kind = ModeKind::HermiteGauss;
  std::size_t level = 0;  // HermiteGauss
  double lambda = 0.0;    // PlaneWave
  int sign = +1;          // PlaneWave
};

/// Evaluates a mode, enforcing that HermiteGauss lives in the Harmonic regime
/// and PlaneWave in the FreeParticle regime (RegimeError otherwise).
std::vector<Complex> evaluate_mode(const AnalyticMode& mode, const RegimeData& regime,
                                   std::span<const double> x);

/// Position representation sum_n c_n phi_n(x) of a bare-Fock coefficient
/// vector. With a sector, coefficient m is placed on |2m> (QuarterEven) or
/// |2m+1> (ThreeQuarterOdd) first.
std::vector<Complex> fock_to_position(const Eigen::VectorXcd& coefficients, std::span<const double> x,
                                      std::optional<Bargmann> sector = std::nullopt);

}  // namespace rabi
