#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

/// Raised when a truncation cutoff or requested count is out of range.
class SizingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a closed form is requested outside the regime where it holds.
/// `collapsed()` is true when the requested point sits at or past the
/// critical coupling (continuous spectrum).
class RegimeError : public std::domain_error {
 public:
  RegimeError(const std::string& what, bool collapsed)
      : std::domain_error(what), collapsed_(collapsed) {}
  bool collapsed() const noexcept { return collapsed_; }

 private:
  bool collapsed_;
};

/// Raised by iterative eigensolvers that fail to reach tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters of the two-photon Rabi Hamiltonian
///   H = (omega0/2) sz + omega a^dag a + g2 (a^dag^2 + a^2) sx.
/// All quantities are dimensionless.
struct ModelParams {
  double omega0 = 0.0;
  double omega = 1.0;
  double g2 = 0.0;

  /// Throws DomainError unless omega > 0, omega0 >= 0, g2 >= 0 (all finite).
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Bargmann index of an SU(1,1) boson sector: 1/4 holds |2m>, 3/4 holds |2m+1>.
enum class Bargmann { QuarterEven, ThreeQuarterOdd };

/// One of the four parity-resolved blocks H_{q,+-}.
struct SubspaceLabel {
  Bargmann bargmann = Bargmann::QuarterEven;
  int branch = +1;  // +1 or -1

  double q() const { return bargmann == Bargmann::QuarterEven ? 0.25 : 0.75; }
  /// Fock offset of the sector: |q;m> = |2m + parity_offset()>.
  int parity_offset() const { return bargmann == Bargmann::QuarterEven ? 0 : 1; }

  /// "q14+", "q14-", "q34+", "q34-".
  std::string name() const;
  /// Inverse of name(); throws DomainError on anything else.
  static SubspaceLabel parse(const std::string& text);

  bool operator==(const SubspaceLabel&) const = default;
};

}  // namespace rabi
