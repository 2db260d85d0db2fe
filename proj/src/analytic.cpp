#include "rabi/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rabi {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Harmonic: return "Harmonic";
    case Regime::FreeParticle: return "FreeParticle";
    case Regime::Inverted: return "Inverted";
  }
  return "?";
}

double RegimeData::width() const {
  if (!alpha) throw RegimeError("oscillator width requires the Harmonic regime", true);
  return std::sqrt(*alpha);
}

RegimeData classify_regime(const ModelParams& params, double free_particle_epsilon) {
  if (!(params.omega > 0.0)) throw DomainError("omega must be positive");
  RegimeData r;
  r.alpha_plus = params.omega + 2.0 * params.g2;
  r.alpha_minus = params.omega - 2.0 * params.g2;
  if (std::abs(r.alpha_minus) <= free_particle_epsilon) {
    r.regime = Regime::FreeParticle;
    r.Omega = 0.0;
  } else if (r.alpha_minus > 0.0) {
    r.regime = Regime::Harmonic;
    r.alpha = std::sqrt(r.alpha_minus / r.alpha_plus);
    r.Omega = std::sqrt(params.omega * params.omega - 4.0 * params.g2 * params.g2);
  } else {
    r.regime = Regime::Inverted;
  }
  return r;
}

double critical_coupling(double omega) {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  return 0.5 * omega;
}

std::vector<double> degenerate_spectrum(const ModelParams& params, const SubspaceLabel& label,
                                        std::size_t count) {
  params.validate();
  if (params.omega0 != 0.0) throw DomainError("degenerate spectrum requires omega0 = 0");
  const RegimeData r = classify_regime(params);
  if (r.regime != Regime::Harmonic)
    throw RegimeError(std::string("spectrum has collapsed (") + regime_name(r.regime) + " regime)", true);
  std::vector<double> energies(count);
  for (std::size_t m = 0; m < count; ++m)
    energies[m] = *r.Omega * (2.0 * static_cast<double>(m) + 2.0 * label.q());
  return energies;
}

std::vector<double> oscillator_functions(std::size_t max_level, double y) {
  std::vector<double> phi(max_level + 1);
  phi[0] = std::exp(-0.5 * y * y) / std::sqrt(std::sqrt(std::numbers::pi));
  if (max_level >= 1) phi[1] = std::numbers::sqrt2 * y * phi[0];
  for (std::size_t n = 1; n < max_level; ++n) {
    const double nn = static_cast<double>(n);
    phi[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * y * phi[n] - std::sqrt(nn / (nn + 1.0)) * phi[n - 1];
  }
  return phi;
}

std::vector<double> hermite_gauss(std::size_t level, const RegimeData& regime, std::span<const double> x) {
  if (regime.regime != Regime::Harmonic)
    throw RegimeError("Hermite-Gauss modes exist only in the Harmonic regime", true);
  const double beta = regime.width();
  const double scale = std::sqrt(beta);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * oscillator_functions(level, beta * x[i])[level];
  return out;
}

std::vector<Complex> plane_wave(double lambda, int sign, std::span<const double> x) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("plane wave needs lambda >= 0");
  const double k = (sign >= 0 ? 1.0 : -1.0) * std::sqrt(lambda);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  std::vector<Complex> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::polar(norm, k * x[i]);
  return out;
}

namespace {

bool non_positive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

double kummer_series(double a, double b, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    const double kk = static_cast<double>(k);
    const double ratio = (a + kk) * z / ((b + kk) * (kk + 1.0));
    term *= ratio;
    sum += term;
    if (term == 0.0) break;
    if (std::abs(term) <= 1e-14 * std::abs(sum) && std::abs((a + kk + 1.0) * z / ((b + kk + 1.0) * (kk + 2.0))) < 0.5)
      break;
  }
  return sum;
}

}  // namespace

double kummer_1f1(double a, double b, double z) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) throw DomainError("1F1 arguments must be finite");
  if (non_positive_integer(b)) throw DomainError("1F1 undefined for non-positive integer b");
  const bool terminates = non_positive_integer(a);
  if (!terminates && std::abs(z) > 50.0) throw DomainError("1F1 series restricted to |z| <= 50");
  if (z == 0.0) return 1.0;
  if (z < 0.0 && !terminates) return std::exp(z) * kummer_series(b - a, b, -z);
  return kummer_series(a, b, z);
}

std::vector<double> general_solution(double nu, const RegimeData& regime, double c1, double c2,
                                     std::span<const double> x, GaussianWidth width) {
  if (regime.regime != Regime::Harmonic || !regime.alpha)
    throw RegimeError("general solution requires the Harmonic regime", true);
  const double s = width == GaussianWidth::AsDisplayed ? *regime.alpha : 2.0 * *regime.alpha;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double gauss = std::exp(-0.25 * s * xi * xi);
    const double z = 0.5 * s * xi * xi;
    double value = 0.0;
    if (c1 != 0.0) value += c1 * gauss * kummer_1f1(-nu - 0.25, 0.5, z);
    if (c2 != 0.0) value += c2 * xi * gauss * kummer_1f1(-nu + 0.25, 1.5, z);
    out[i] = value;
  }
  return out;
}

double scaled_eigenvalue(double energy, const RegimeData& regime) {
  if (regime.regime != Regime::Harmonic || !regime.Omega)
    throw RegimeError("scaled eigenvalue diverges outside the Harmonic regime", true);
  return energy / (2.0 * *regime.Omega) - 0.5;
}

std::vector<Complex> evaluate_mode(const AnalyticMode& mode, const RegimeData& regime, std::span<const double> x) {
  if (mode.kind == ModeKind::HermiteGauss) {
    const auto real = hermite_gauss(mode.level, regime, x);
    return {real.begin(), real.end()};
  }
  if (regime.regime != Regime::FreeParticle)
    throw RegimeError("plane-wave modes exist only at the free-particle point",
                      regime.regime == Regime::Inverted);
  return plane_wave(mode.lambda, mode.sign, x);
}

std::vector<Complex> fock_to_position(const Eigen::VectorXcd& coefficients, std::span<const double> x,
                                      std::optional<Bargmann> sector) {
  if (x.empty()) throw DomainError("position grid is empty");
  if (coefficients.size() == 0 || !coefficients.allFinite())
    throw DomainError("coefficients must be non-empty and finite");
  const auto count = static_cast<std::size_t>(coefficients.size());
  std::size_t stride = 1;
  std::size_t offset = 0;
  if (sector) {
    stride = 2;
    offset = *sector == Bargmann::QuarterEven ? 0 : 1;
  }
  const std::size_t max_level = stride * (count - 1) + offset;
  std::vector<Complex> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto phi = oscillator_functions(max_level, x[i]);
    Complex sum{};
    for (std::size_t m = 0; m < count; ++m) sum += coefficients(static_cast<Eigen::Index>(m)) * phi[stride * m + offset];
    out[i] = sum;
  }
  return out;
}

}  // namespace rabi
