#include "rabi/cli/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

namespace rabi::cli {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string spectrum_csv(const FilteredSpectrum& spectrum) {
  std::string out = "index,energy,tail_norm,converged\n";
  for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
    const auto& p = spectrum.pairs[i];
    out += std::to_string(i) + ',' + format_number(p.value) + ',' + format_number(p.tail_norm) + ',' +
           (p.converged ? "1" : "0") + '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  const std::size_t k = result.filter.requested_eigenpairs;
  std::string out = "omega0,omega,g2,cutoff,subspace,converged_count,collapsed";
  for (std::size_t j = 0; j < k; ++j) out += ",e" + std::to_string(j);
  out += '\n';
  for (const auto& row : result.rows) {
    out += format_number(row.params.omega0) + ',' + format_number(row.params.omega) + ',' +
           format_number(row.params.g2) + ',' + std::to_string(row.cutoff) + ',' + row.target.name() + ',';
    if (row.failed)
      out += ",failed";
    else
      out += std::to_string(row.converged_count) + ',' + (row.collapsed ? "1" : "0");
    for (std::size_t j = 0; j < k; ++j) {
      out += ',';
      if (!row.failed && j < row.energies.size()) out += format_number(row.energies[j]);
    }
    out += '\n';
  }
  return out;
}

std::string modes_csv(std::span<const ModeSample> samples) {
  std::string out = "x,analytic_re,analytic_im,numeric_re,numeric_im,absdiff\n";
  for (const auto& s : samples) {
    out += format_number(s.x) + ',' + format_number(s.analytic.real()) + ',' + format_number(s.analytic.imag()) +
           ',' + format_number(s.numeric.real()) + ',' + format_number(s.numeric.imag()) + ',' +
           format_number(std::abs(s.analytic - s.numeric)) + '\n';
  }
  return out;
}

void write_file_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at '" + path + "'");
  }
}

}  // namespace rabi::cli
