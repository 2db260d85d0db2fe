#include "rabi/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <random>

#include "rabi/analytic.hpp"
#include "rabi/cli/config.hpp"
#include "rabi/cli/csv.hpp"
#include "rabi/model.hpp"
#include "rabi/solver.hpp"
#include "rabi/sweep.hpp"

namespace rabi::cli {

namespace {

const char* const kSubspaceNames = "q14+|q14-|q34+|q34-|full";

// Usage-level problems detected after CLI parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t threads_from_environment() {
  const char* raw = std::getenv("RABI_THREADS");
  if (!raw) return 0;
  const std::string text(raw);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
    throw UsageError("RABI_THREADS must be a positive integer, got '" + text + "'");
  return value;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    write_file_atomically(path, content);
}

std::vector<double> grid(double start, double stop, std::size_t count) { return homogeneous_grid(start, stop, count); }

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  double omega0 = 0.0, omega = 0.0, g2 = 0.0;
  std::size_t cutoff = kDefaultSweepCutoff;
  std::string subspace = "q14+";
  std::size_t count = 25;
  double tail_fraction = kDefaultTailFraction;
  double tolerance = kDefaultTailTolerance;
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const ModelParams params{a.omega0, a.omega, a.g2};
  SweepTarget target;
  try {
    params.validate();
    target = SweepTarget::parse(a.subspace);
    if (a.count < 1) throw SizingError("--count must be positive");
    tail_length(a.tail_fraction, 1);
    if (!(a.tolerance > 0.0)) throw DomainError("--tol must be positive");
    if (a.cutoff < (target.full ? kMinFockCutoff : kMinSubspaceCutoff))
      throw SizingError("--cutoff must be at least 2");
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const auto spectrum = compute_spectrum(params, target, a.cutoff, {a.count, a.tail_fraction, a.tolerance});
  emit(a.out, spectrum_csv(spectrum), out);
  if (!a.out.empty() && a.out != "-")
    out << "converged " << spectrum.converged_count() << " of " << spectrum.pairs.size() << " eigenpairs\n";
  return kExitSuccess;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepConfig config;
  try {
    config = load_sweep_config(a.config);
  } catch (const ConfigError& e) {
    throw UsageError(a.config + ": " + e.what());
  }
  const SweepResult result = run_sweep(config, {threads_from_environment()});
  write_file_atomically(a.out, sweep_csv(result));

  std::size_t failures = 0;
  for (const auto& row : result.rows) failures += row.failed ? 1 : 0;
  for (double w0 : config.omega0_grid)
    for (double w : config.omega_grid)
      for (const auto& target : config.targets) {
        out << "omega0=" << format_number(w0) << " omega=" << format_number(w) << " subspace=" << target.name()
            << ": ";
        try {
          const auto est = detect_collapse(result, w0, w, target);
          if (est.found)
            out << "g_c ≈ " << format_number(est.coupling) << " (comb step " << format_number(est.uncertainty)
                << ")\n";
          else
            out << "no collapse in range\n";
        } catch (const std::exception& e) {
          out << "no estimate (" << e.what() << ")\n";
        }
      }
  if (failures) err << failures << " of " << result.rows.size() << " grid points failed; see rows marked 'failed'\n";
  return kExitSuccess;
}

// ---------------------------------------------------------------- modes

struct ModesArgs {
  double omega0 = 0.0, omega = 0.0, g2 = 0.0;
  std::string subspace = "q14+";
  std::size_t level = 0;
  std::size_t cutoff = 2048;
  double xmin = -10.0, xmax = 10.0;
  std::size_t points = 2001;
  std::string out;
};

int cmd_modes(const ModesArgs& a, std::ostream& out, std::ostream& err) {
  const ModelParams params{a.omega0, a.omega, a.g2};
  SubspaceLabel label;
  RegimeData regime;
  try {
    params.validate();
    if (params.omega0 != 0.0) throw DomainError("analytic modes exist only for --omega0 0");
    label = SubspaceLabel::parse(a.subspace);
    if (a.points < 2) throw SizingError("--points must be at least 2");
    if (!(a.xmax > a.xmin)) throw DomainError("--xmax must exceed --xmin");
    if (a.cutoff < kMinSubspaceCutoff || a.level >= a.cutoff) throw SizingError("--level must be below --cutoff");
    regime = classify_regime(params);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (regime.regime == Regime::Inverted) {
    err << "error: regime III closed forms out of scope (omega - 2 g2 < 0)\n";
    return kExitFailure;
  }

  const auto t = build_subspace_tridiagonal(label, params, a.cutoff);
  const auto spectrum = convergence_filter(solve_tridiagonal(t, a.level + 1));
  const EigenPair& pair = spectrum.pairs[a.level];
  const auto x = grid(a.xmin, a.xmax, a.points);
  auto numeric = fock_to_position(pair.vector, x, label.bargmann);

  std::vector<Complex> analytic;
  if (regime.regime == Regime::Harmonic) {
    const std::size_t n = 2 * a.level + (label.bargmann == Bargmann::ThreeQuarterOdd ? 1 : 0);
    analytic = evaluate_mode({ModeKind::HermiteGauss, n, 0.0, +1}, regime, x);
  } else {
    // no normalizable eigenstates: compare against the plane wave at the numeric energy
    const double lambda = std::max(0.0, 2.0 * pair.value / regime.alpha_plus);
    analytic = evaluate_mode({ModeKind::PlaneWave, 0, lambda, +1}, regime, x);
  }
  Complex overlap{};
  for (std::size_t i = 0; i < x.size(); ++i) overlap += std::conj(analytic[i]) * numeric[i];
  if (std::abs(overlap) > 0.0)
    for (auto& v : numeric) v *= std::conj(overlap) / std::abs(overlap);

  std::vector<ModeSample> samples(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    samples[i] = {x[i], analytic[i], numeric[i]};
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]));
  }
  emit(a.out, modes_csv(samples), out);
  if (!a.out.empty() && a.out != "-")
    out << "regime " << regime_name(regime.regime) << ", level " << a.level << ", energy "
        << format_number(pair.value) << (pair.converged ? " (converged)" : " (not converged)")
        << ", max absdiff " << format_number(worst) << "\n";
  return kExitSuccess;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  std::size_t cutoff = kDefaultOracleCutoff;
  std::uint64_t seed = 1;
};

OracleCheck make_check(std::string name, double deviation, double tolerance, std::string detail = {}) {
  OracleCheck c;
  c.name = std::move(name);
  c.deviation = deviation;
  c.tolerance = tolerance;
  c.passed = deviation < tolerance;
  c.detail = std::move(detail);
  return c;
}

// A truncated full model with N Fock levels is unitarily equivalent to the
// four blocks with N/2 levels (offset omega/2), so complete truncated spectra
// are compared and the check holds at any cutoff.
OracleCheck check_alignment(std::size_t cutoff, double tol) {
  double worst = 0.0;
  for (double g2 : {0.0, 0.1, 0.2}) {
    const ModelParams p{1.0, 0.5, g2};
    const auto full_h = build_full_fock(p, cutoff);
    std::vector<double> reference;
    for (const auto& pair : solve_hermitian(full_h, full_h.dimension())) reference.push_back(pair.value);
    std::vector<double> merged;
    for (const char* name : {"q14+", "q14-", "q34+", "q34-"}) {
      const auto t = build_subspace_tridiagonal(SubspaceLabel::parse(name), p, cutoff / 2);
      std::vector<double> block;
      for (const auto& pair : solve_tridiagonal(t, t.dimension())) block.push_back(pair.value);
      const Alignment a = align_values(reference, block);
      worst = std::max(worst, a.max_deviation);
      for (double v : block) merged.push_back(v + a.offset);
    }
    std::sort(merged.begin(), merged.end());
    for (std::size_t i = 0; i < reference.size(); ++i) worst = std::max(worst, std::abs(merged[i] - reference[i]));
  }
  return make_check("subspace-union alignment", worst, tol,
                    "omega0=1 omega=0.5 g2 in {0,0.1,0.2}, N=" + std::to_string(cutoff) +
                        " M=" + std::to_string(cutoff / 2) + ", complete truncated spectra");
}

OracleCheck check_degenerate_spectrum() {
  const std::size_t cutoff = 4096;
  double worst = 0.0;
  for (double g2 : {0.0, 0.1, 0.2}) {
    const ModelParams p{0.0, 0.45, g2};
    for (const char* name : {"q14+", "q14-", "q34+", "q34-"}) {
      const auto label = SubspaceLabel::parse(name);
      const auto values = compute_spectrum(p, SweepTarget::subspace(label), cutoff, {}).converged_values();
      const auto exact = degenerate_spectrum(p, label, 10);
      if (values.size() < 10) return make_check("degenerate analytic spectrum", INFINITY, 1e-8, "too few converged");
      for (std::size_t m = 0; m < 10; ++m) worst = std::max(worst, std::abs(values[m] - exact[m]) / exact[m]);
    }
  }
  return make_check("degenerate analytic spectrum", worst, 1e-8,
                    "omega0=0 omega=0.45 g2 in {0,0.1,0.2}, M=4096, relative");
}

OracleCheck check_hermite_gauss() {
  const ModelParams p{0.0, 0.5, 0.1};
  const SubspaceLabel label{Bargmann::QuarterEven, +1};
  const auto pair = solve_tridiagonal(build_subspace_tridiagonal(label, p, 2048), 1).front();
  const auto x = grid(-10.0, 10.0, 2001);
  const auto numeric = fock_to_position(pair.vector, x, label.bargmann);
  const auto analytic = hermite_gauss(0, classify_regime(p), x);
  const double dx = x[1] - x[0];
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus += std::norm(numeric[i] - analytic[i]) * dx;
    minus += std::norm(numeric[i] + analytic[i]) * dx;
  }
  return make_check("Hermite-Gauss position match", std::sqrt(std::min(plus, minus)), 1e-6,
                    "omega0=0 omega=0.5 g2=0.1, M=2048, L2 on [-10,10]");
}

OracleCheck check_rotation_chain(std::size_t cutoff, std::uint64_t seed, double tol) {
  std::vector<ModelParams> points{{1.0, 0.5, 0.2}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 3; ++i) {
    const double omega = 0.3 + u(rng);
    points.push_back({1.5 * u(rng), omega, 0.6 * critical_coupling(omega) * u(rng)});
  }
  // interior: among the lowest 20 below the top 20% of the spectrum, the levels the filter accepts
  const std::size_t k = std::min<std::size_t>(20, (8 * 2 * cutoff) / 10);
  double worst = 0.0;
  std::size_t compared = 0;
  for (const auto& p : points) {
    const auto a = convergence_filter(solve_hermitian(build_full_fock(p, cutoff), k));
    const auto b = solve_hermitian(build_phase_space(p, cutoff), k);
    const auto c = solve_hermitian(build_rotated_fock(p, cutoff), k);
    for (std::size_t i = 0; i < k; ++i) {
      if (!a.pairs[i].converged) continue;
      ++compared;
      worst = std::max(worst, std::abs(a.pairs[i].value + 0.5 * p.omega - b[i].value));
      worst = std::max(worst, std::abs(b[i].value - c[i].value));
    }
  }
  if (compared == 0) return make_check("rotation chain", INFINITY, tol, "no converged levels to compare");
  return make_check("rotation chain", worst, tol,
                    std::to_string(points.size()) + " points, " + std::to_string(compared) +
                        " converged levels, N=" + std::to_string(cutoff));
}

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  if (a.cutoff < kMinOracleCutoff || a.cutoff % 2 != 0)
    throw UsageError("--cutoff must be even and at least " + std::to_string(kMinOracleCutoff));
  bool ok = true;
  for (const auto& c : run_oracle_suite(a.cutoff, a.seed)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": max deviation " << format_number(c.deviation)
        << " (tolerance " << format_number(c.tolerance) << ")";
    if (!c.detail.empty()) out << " [" << c.detail << "]";
    out << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitSuccess : kExitFailure;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(std::size_t cutoff, std::uint64_t seed) {
  if (cutoff < kMinOracleCutoff || cutoff % 2 != 0)
    throw SizingError("oracle cutoff must be even and at least " + std::to_string(kMinOracleCutoff));
  const double tol = cutoff < 256 ? 1e-6 : 1e-8;
  return {check_alignment(cutoff, tol), check_degenerate_spectrum(), check_hermite_gauss(),
          check_rotation_chain(cutoff, seed, tol)};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral collapse of the two-photon quantum Rabi model", "rabi"};
  app.require_subcommand(1);

  SpectrumArgs spectrum;
  auto* sp = app.add_subcommand("spectrum", "Lowest eigenpairs at one parameter point, as CSV");
  sp->add_option("--omega0", spectrum.omega0, "Qubit frequency")->required();
  sp->add_option("--omega", spectrum.omega, "Boson frequency")->required();
  sp->add_option("--g2", spectrum.g2, "Two-photon coupling")->required();
  sp->add_option("--cutoff", spectrum.cutoff, "Subspace levels, or Fock levels for 'full'")->capture_default_str();
  sp->add_option("--subspace", spectrum.subspace, kSubspaceNames)->capture_default_str();
  sp->add_option("--count", spectrum.count, "Eigenpairs to compute")->capture_default_str();
  sp->add_option("--tail-fraction", spectrum.tail_fraction, "Fraction of levels in the convergence tail")
      ->capture_default_str();
  sp->add_option("--tol", spectrum.tolerance, "Tail-norm tolerance")->capture_default_str();
  sp->add_option("--out", spectrum.out, "Output CSV (default: standard output)");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Parameter survey from a config file, as CSV");
  sw->add_option("config", sweep.config, "Config file")->required();
  sw->add_option("--out", sweep.out, "Output CSV")->required();

  OracleArgs oracle;
  auto* orc = app.add_subcommand("oracle", "Cross-representation and analytic consistency checks");
  orc->add_option("--cutoff", oracle.cutoff, "Fock cutoff of the representation checks")->capture_default_str();
  orc->add_option("--seed", oracle.seed, "Seed for random parameter points")->capture_default_str();

  ModesArgs modes;
  auto* md = app.add_subcommand("modes", "Analytic and numeric eigenfunctions in position space, as CSV");
  md->add_option("--omega0", modes.omega0, "Qubit frequency (must be 0)")->capture_default_str();
  md->add_option("--omega", modes.omega, "Boson frequency")->required();
  md->add_option("--g2", modes.g2, "Two-photon coupling")->required();
  md->add_option("--subspace", modes.subspace, "q14+|q14-|q34+|q34-")->capture_default_str();
  md->add_option("--level", modes.level, "Eigenstate index within the subspace")->capture_default_str();
  md->add_option("--cutoff", modes.cutoff, "Subspace levels")->capture_default_str();
  md->add_option("--xmin", modes.xmin, "Grid start")->capture_default_str();
  md->add_option("--xmax", modes.xmax, "Grid end")->capture_default_str();
  md->add_option("--points", modes.points, "Grid points")->capture_default_str();
  md->add_option("--out", modes.out, "Output CSV (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (sp->parsed()) return cmd_spectrum(spectrum, out);
    if (sw->parsed()) return cmd_sweep(sweep, out, err);
    if (orc->parsed()) return cmd_oracle(oracle, out);
    if (md->parsed()) return cmd_modes(modes, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rabi::cli
