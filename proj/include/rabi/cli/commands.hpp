#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rabi::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `rabi` command line (args excludes the program name) and returns
/// the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct OracleCheck {
  std::string name;
  double deviation = 0.0;  // worst observed deviation
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

inline constexpr std::size_t kDefaultOracleCutoff = 256;
inline constexpr std::size_t kMinOracleCutoff = 8;

/// Cross-representation and analytic checks. `cutoff` (even) is the Fock cutoff of
/// the representation checks (subspace blocks use cutoff/2); tolerances
/// loosen from 1e-8 to 1e-6 below cutoff 256. `seed` draws the extra
/// parameter points of the rotation-chain check.
std::vector<OracleCheck> run_oracle_suite(std::size_t cutoff, std::uint64_t seed);

}  // namespace rabi::cli
