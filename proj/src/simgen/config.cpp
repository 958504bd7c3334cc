#include <charconv>
#include <cstdio>
#include <istream>
#include <sstream>

#include "mcar/error.hpp"
#include "mcar/simgen.hpp"

namespace mcar {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& text, const KeyValue& kv) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ParseError("invalid value '" + text + "' for '" + kv.key + "'", kv.line, 1);
  return v;
}

// 1-based "3,5,4" -> 0-based {2, 4, 3}.
std::vector<std::size_t> parse_columns(const std::string& text, const KeyValue& kv) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_number<std::size_t>(trim(item), kv);
    if (v == 0) throw ParseError("column indices are 1-based", kv.line, 1);
    out.push_back(v - 1);
  }
  return out;
}

MechanismSpec parse_mechanism_line(const KeyValue& kv) {
  std::stringstream ss(kv.value);
  std::string kind;
  ss >> kind;
  const auto k = parse_mechanism(kind);
  if (!k) throw ParseError("unknown mechanism '" + kind + "'", kv.line, 1);
  MechanismSpec m;
  m.kind = *k;
  std::string token;
  bool have_rate = false;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + token + "'", kv.line, 1);
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "targets") m.targets = parse_columns(value, kv);
    else if (key == "controls") m.controls = parse_columns(value, kv);
    else if (key == "rate") {
      m.rate = parse_number<double>(value, kv);
      have_rate = true;
    } else if (key == "x") m.x = parse_number<double>(value, kv);
    else throw ParseError("unknown mechanism option '" + key + "'", kv.line, 1);
  }
  if (m.targets.empty()) throw ParseError("mechanism needs targets=", kv.line, 1);
  if (!have_rate) throw ParseError("mechanism needs rate=", kv.line, 1);
  return m;
}

std::string join_columns(const std::vector<std::size_t>& cols) {
  std::string s;
  for (std::size_t k = 0; k < cols.size(); ++k) s += (k ? "," : "") + std::to_string(cols[k] + 1);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::istream& in) {
  std::vector<KeyValue> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno, 1);
    out.push_back({trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno});
  }
  return out;
}

ScenarioSpec parse_scenario(const std::vector<KeyValue>& kvs, bool allow_unknown) {
  ScenarioSpec s;
  bool have_dist = false;
  bool have_dim = false;
  for (const auto& kv : kvs) {
    if (kv.key == "name") s.name = kv.value;
    else if (kv.key == "description") s.description = kv.value;
    else if (kv.key == "distribution") {
      const auto d = parse_distribution(kv.value);
      if (!d) throw ParseError("unknown distribution '" + kv.value + "'", kv.line, 1);
      s.distribution.kind = *d;
      have_dist = true;
    } else if (kv.key == "dim") {
      s.distribution.dim = parse_number<std::size_t>(kv.value, kv);
      have_dim = true;
    } else if (kv.key == "scale_offdiag") s.distribution.scale_offdiag = parse_number<double>(kv.value, kv);
    else if (kv.key == "n") s.n = parse_number<std::size_t>(kv.value, kv);
    else if (kv.key == "seed") s.seed = parse_number<std::uint64_t>(kv.value, kv);
    else if (kv.key == "mechanism") s.mechanisms.push_back(parse_mechanism_line(kv));
    else if (!allow_unknown) throw ParseError("unknown key '" + kv.key + "'", kv.line, 1);
  }
  if (!have_dist) throw ParseError("scenario needs 'distribution'", 0, 1);
  if (!have_dim) throw ParseError("scenario needs 'dim'", 0, 1);
  validate(s);
  return s;
}

ScenarioSpec parse_scenario(std::istream& in) { return parse_scenario(parse_key_values(in)); }

std::string format_scenario(const ScenarioSpec& s) {
  std::ostringstream out;
  if (!s.name.empty()) out << "name = " << s.name << '\n';
  if (!s.description.empty()) out << "description = " << s.description << '\n';
  out << "distribution = " << distribution_name(s.distribution.kind) << '\n';
  out << "dim = " << s.distribution.dim << '\n';
  if (s.distribution.kind == DistributionKind::StudentT2)
    out << "scale_offdiag = " << format_double(s.distribution.scale_offdiag) << '\n';
  out << "n = " << s.n << '\n';
  out << "seed = " << s.seed << '\n';
  for (const auto& m : s.mechanisms) {
    out << "mechanism = " << mechanism_name(m.kind) << " targets=" << join_columns(m.targets);
    if (!m.controls.empty()) out << " controls=" << join_columns(m.controls);
    out << " rate=" << format_double(m.rate);
    if (m.kind == MechanismKind::Mar1ToX) out << " x=" << format_double(m.x);
    out << '\n';
  }
  return out.str();
}

}  // namespace mcar
