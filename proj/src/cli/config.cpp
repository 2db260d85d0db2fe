#include "rabi/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace rabi::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw std::invalid_argument("'" + text + "' is not a finite number");
  return value;
}

std::size_t parse_count(const std::string& raw) {
  const std::string text = trim(raw);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("'" + text + "' is not a non-negative integer");
  return value;
}

// Splits on commas outside parentheses.
std::vector<std::string> split_items(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw std::invalid_argument("unbalanced parentheses");
    if (c == ',' && depth == 0) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (depth != 0) throw std::invalid_argument("unbalanced parentheses");
  items.push_back(trim(current));
  if (items.size() == 1 && items[0].empty()) return {};
  for (const auto& item : items)
    if (item.empty()) throw std::invalid_argument("empty list item");
  return items;
}

std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& values, auto&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out;
}

void require_each(const std::vector<double>& values, bool (*ok)(double), const char* message) {
  for (double v : values)
    if (!ok(v)) throw std::invalid_argument(message);
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_items(text)) {
    if (item.rfind("grid", 0) == 0) {
      const std::string rest = trim(item.substr(4));
      if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
        throw std::invalid_argument("expected grid(start, stop, count)");
      const auto args = split_items(rest.substr(1, rest.size() - 2));
      if (args.size() != 3) throw std::invalid_argument("grid takes exactly three arguments");
      const std::size_t count = parse_count(args[2]);
      if (count == 0) throw std::invalid_argument("grid count must be positive");
      const auto grid = homogeneous_grid(parse_number(args[0]), parse_number(args[1]), count);
      out.insert(out.end(), grid.begin(), grid.end());
    } else {
      out.push_back(parse_number(item));
    }
  }
  return out;
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig config;
  std::map<std::string, std::size_t> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.emplace(key, line_no).second)
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(seen[key]) + ")");
    try {
      if (key == "omega0") {
        config.omega0_grid = parse_value_list(value);
        require_each(config.omega0_grid, [](double v) { return v >= 0.0; }, "omega0 must be non-negative");
      } else if (key == "omega") {
        config.omega_grid = parse_value_list(value);
        require_each(config.omega_grid, [](double v) { return v > 0.0; }, "omega must be positive");
      } else if (key == "g2" || key == "g2_relative") {
        if (seen.count("g2") && seen.count("g2_relative"))
          throw std::invalid_argument("g2 and g2_relative are mutually exclusive");
        config.coupling.kind = key == "g2" ? CouplingSpec::Kind::Absolute : CouplingSpec::Kind::RelativeToCritical;
        config.coupling.values = parse_value_list(value);
        require_each(config.coupling.values, [](double v) { return v >= 0.0; }, "couplings must be non-negative");
      } else if (key == "subspace") {
        config.targets.clear();
        for (const auto& name : split_items(value)) config.targets.push_back(SweepTarget::parse(name));
      } else if (key == "cutoff") {
        config.cutoff = parse_count(value);
        if (config.cutoff < kMinSweepCutoff)
          throw std::invalid_argument("cutoff must be at least " + std::to_string(kMinSweepCutoff));
      } else if (key == "eigenpairs") {
        config.filter.requested_eigenpairs = parse_count(value);
        if (config.filter.requested_eigenpairs < 2) throw std::invalid_argument("eigenpairs must be at least 2");
      } else if (key == "tail_fraction") {
        config.filter.tail_fraction = parse_number(value);
        if (!(config.filter.tail_fraction > 0.0 && config.filter.tail_fraction < 1.0))
          throw std::invalid_argument("tail_fraction must lie in (0, 1)");
      } else if (key == "tolerance") {
        config.filter.tolerance = parse_number(value);
        if (!(config.filter.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(line_no, key + ": " + e.what());
    }
    if ((key == "omega0" || key == "omega" || key == "g2" || key == "g2_relative" || key == "subspace") &&
        value.empty())
      throw ConfigError(line_no, key + ": empty list");
  }
  for (const char* key : {"omega0", "omega"})
    if (!seen.count(key)) throw ConfigError(0, std::string("missing key '") + key + "'");
  if (!seen.count("g2") && !seen.count("g2_relative")) throw ConfigError(0, "missing key 'g2' or 'g2_relative'");
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  return config;
}

SweepConfig parse_sweep_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_sweep_config(in);
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  return parse_sweep_config(in);
}

std::string serialize_sweep_config(const SweepConfig& config) {
  std::ostringstream out;
  out << "omega0 = " << join(config.omega0_grid, format_exact) << '\n';
  out << "omega = " << join(config.omega_grid, format_exact) << '\n';
  out << (config.coupling.kind == CouplingSpec::Kind::Absolute ? "g2" : "g2_relative") << " = "
      << join(config.coupling.values, format_exact) << '\n';
  out << "subspace = " << join(config.targets, [](const SweepTarget& t) { return t.name(); }) << '\n';
  out << "cutoff = " << config.cutoff << '\n';
  out << "eigenpairs = " << config.filter.requested_eigenpairs << '\n';
  out << "tail_fraction = " << format_exact(config.filter.tail_fraction) << '\n';
  out << "tolerance = " << format_exact(config.filter.tolerance) << '\n';
  return out.str();
}

}  // namespace rabi::cli
