#include "rabi/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rabi {

void ModelParams::validate() const {
  if (!std::isfinite(omega0) || !std::isfinite(omega) || !std::isfinite(g2))
    throw DomainError("model parameters must be finite");
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (omega0 < 0.0) throw DomainError("omega0 must be non-negative");
  if (g2 < 0.0) throw DomainError("g2 must be non-negative");
}

std::string SubspaceLabel::name() const {
  std::string out = bargmann == Bargmann::QuarterEven ? "q14" : "q34";
  out += branch > 0 ? '+' : '-';
  return out;
}

SubspaceLabel SubspaceLabel::parse(const std::string& text) {
  if (text == "q14+") return {Bargmann::QuarterEven, +1};
  if (text == "q14-") return {Bargmann::QuarterEven, -1};
  if (text == "q34+") return {Bargmann::ThreeQuarterOdd, +1};
  if (text == "q34-") return {Bargmann::ThreeQuarterOdd, -1};
  throw DomainError("unknown subspace label '" + text + "'");
}

namespace {

// Matrix assembly is well defined at omega = 0, so builders accept it even
// though ModelParams::validate() (used by the analytic layer) does not.
void check_matrix_params(const ModelParams& p) {
  if (!std::isfinite(p.omega0) || !std::isfinite(p.omega) || !std::isfinite(p.g2))
    throw DomainError("model parameters must be finite");
  if (p.omega < 0.0 || p.omega0 < 0.0 || p.g2 < 0.0) throw DomainError("model parameters must be non-negative");
}

void check_fock_cutoff(std::size_t cutoff) {
  if (cutoff < kMinFockCutoff)
    throw SizingError("Fock cutoff " + std::to_string(cutoff) + " is below the minimum of " +
                      std::to_string(kMinFockCutoff));
}

// Entries of the truncated products q.q and p.p, where q and p are the
// cutoff x cutoff quadrature matrices. Only the last diagonal entry feels the
// truncation (it loses the n -> n+1 -> n path).
double quadrature_square_diag(std::size_t n, std::size_t cutoff) {
  const double up = n + 1 < cutoff ? 0.5 * static_cast<double>(n + 1) : 0.0;
  return 0.5 * static_cast<double>(n) + up;
}

// <n+2| q q |n> = +sqrt((n+1)(n+2))/2, <n+2| p p |n> = -sqrt((n+1)(n+2))/2.
double two_step(std::size_t n) {
  return 0.5 * std::sqrt(static_cast<double>(n + 1) * static_cast<double>(n + 2));
}

// Adds (a p^2 + b q^2)/2 into the `spin` block.
void add_quadratic_block(HermitianMatrix& h, std::size_t cutoff, std::size_t spin, double p_coef,
                         double q_coef) {
  for (std::size_t n = 0; n < cutoff; ++n) {
    const double d = quadrature_square_diag(n, cutoff);
    h.add(tensored_index(n, spin), tensored_index(n, spin), 0.5 * (p_coef + q_coef) * d);
    if (n + 2 < cutoff) {
      const double t = two_step(n);
      h.add(tensored_index(n + 2, spin), tensored_index(n, spin), 0.5 * (q_coef - p_coef) * t);
    }
  }
}

}  // namespace

HermitianMatrix build_full_fock(const ModelParams& params, std::size_t cutoff) {
  check_matrix_params(params);
  check_fock_cutoff(cutoff);
  HermitianMatrix h(2 * cutoff, kQubitTensoredBandwidth);
  const double half_gap = 0.5 * params.omega0;
  for (std::size_t n = 0; n < cutoff; ++n) {
    const double boson = params.omega * static_cast<double>(n);
    h.add(tensored_index(n, 0), tensored_index(n, 0), boson + half_gap);
    h.add(tensored_index(n, 1), tensored_index(n, 1), boson - half_gap);
    if (n + 2 < cutoff && params.g2 != 0.0) {
      // g2 <n+2| a^dag^2 |n> on the sx off-diagonal qubit blocks
      const double pair = params.g2 * 2.0 * two_step(n);
      h.add(tensored_index(n + 2, 0), tensored_index(n, 1), pair);
      h.add(tensored_index(n + 2, 1), tensored_index(n, 0), pair);
    }
  }
  return h;
}

HermitianMatrix build_phase_space(const ModelParams& params, std::size_t cutoff) {
  check_matrix_params(params);
  check_fock_cutoff(cutoff);
  HermitianMatrix h(2 * cutoff, kQubitTensoredBandwidth);
  const double alpha_plus = params.omega + 2.0 * params.g2;
  const double alpha_minus = params.omega - 2.0 * params.g2;
  add_quadratic_block(h, cutoff, 0, alpha_plus, alpha_minus);
  add_quadratic_block(h, cutoff, 1, alpha_minus, alpha_plus);
  for (std::size_t n = 0; n < cutoff; ++n)
    h.add(tensored_index(n, 1), tensored_index(n, 0), 0.5 * params.omega0);
  return h;
}

Complex rotation_phase(std::size_t fock) {
  const double angle = -0.5 * std::numbers::pi * (static_cast<double>(fock) + 0.5);
  return std::polar(1.0, angle);
}

HermitianMatrix build_rotated_fock(const ModelParams& params, std::size_t cutoff) {
  check_matrix_params(params);
  check_fock_cutoff(cutoff);
  HermitianMatrix h(2 * cutoff, kQubitTensoredBandwidth);
  const double alpha_plus = params.omega + 2.0 * params.g2;
  const double alpha_minus = params.omega - 2.0 * params.g2;
  add_quadratic_block(h, cutoff, 0, alpha_plus, alpha_minus);
  add_quadratic_block(h, cutoff, 1, alpha_plus, alpha_minus);
  if (params.omega0 != 0.0) {
    for (std::size_t n = 0; n < cutoff; ++n) {
      // <up, n| H |down, n> = (omega0/2) R_n
      h.add(tensored_index(n, 0), tensored_index(n, 1), 0.5 * params.omega0 * rotation_phase(n));
    }
  }
  return h;
}

TridiagonalMatrix build_subspace_tridiagonal(const SubspaceLabel& label, const ModelParams& params,
                                             std::size_t cutoff) {
  check_matrix_params(params);
  if (label.branch != 1 && label.branch != -1) throw DomainError("branch must be +1 or -1");
  if (cutoff < kMinSubspaceCutoff)
    throw SizingError("subspace cutoff " + std::to_string(cutoff) + " is below the minimum of " +
                      std::to_string(kMinSubspaceCutoff));
  const double q = label.q();
  TridiagonalMatrix t;
  t.diag.resize(cutoff);
  t.offdiag.resize(cutoff - 1);
  for (std::size_t m = 0; m < cutoff; ++m) {
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    t.diag[m] = label.branch * 0.5 * params.omega0 * parity +
                2.0 * params.omega * (q + static_cast<double>(m));
  }
  for (std::size_t m = 0; m + 1 < cutoff; ++m) {
    const double raise = std::sqrt((static_cast<double>(m) + 1.0) * (static_cast<double>(m) + 2.0 * q));
    t.offdiag[m] = -2.0 * params.g2 * raise;
  }
  return t;
}

HermitianMatrix boson_parity(std::size_t cutoff) {
  if (cutoff < 1) throw SizingError("parity cutoff must be positive");
  HermitianMatrix p(cutoff, 0);
  for (std::size_t n = 0; n < cutoff; ++n) p.add(n, n, n % 2 == 0 ? 1.0 : -1.0);
  return p;
}

HermitianMatrix tensor_with_qubit_identity(const HermitianMatrix& op) {
  const std::size_t n = op.dimension();
  HermitianMatrix out(2 * n, 2 * op.bandwidth());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i >= op.bandwidth() ? i - op.bandwidth() : 0; j <= i; ++j) {
      const Complex v = op(i, j);
      if (v == Complex{}) continue;
      for (std::size_t s = 0; s < 2; ++s) out.add(tensored_index(i, s), tensored_index(j, s), v);
    }
  }
  return out;
}

}  // namespace rabi
