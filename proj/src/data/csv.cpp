#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcar/data.hpp"
#include "mcar/error.hpp"

namespace mcar {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

IncompleteMatrix read_csv(std::istream& in, const CsvOptions& opts) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input, header row required", 1, 1);

  std::vector<std::string> names;
  for (auto f : split(line)) names.push_back(unquote(f));
  const std::size_t d = names.size();

  std::vector<std::vector<double>> columns(d);
  std::vector<std::vector<std::uint8_t>> masks(d);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != d) {
      throw ParseError("expected " + std::to_string(d) + " fields, found " +
                           std::to_string(fields.size()),
                       row, std::min(fields.size(), d) + 1);
    }
    for (std::size_t j = 0; j < d; ++j) {
      const auto f = fields[j];
      if (f.empty() || f == opts.na_marker) {
        columns[j].push_back(0.0);
        masks[j].push_back(0);
        continue;
      }
      double v = 0.0;
      const auto* end = f.data() + f.size();
      // from_chars rejects a leading '+', which is otherwise valid input.
      const auto* begin = (f.front() == '+') ? f.data() + 1 : f.data();
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ParseError("non-numeric field '" + std::string(f) + "'", row, j + 1);
      }
      columns[j].push_back(v);
      masks[j].push_back(1);
    }
  }

  const std::size_t n = d == 0 ? 0 : columns[0].size();
  Matrix values(n, d);
  std::vector<std::uint8_t> observed(n * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      values(i, j) = columns[j][i];
      observed[j * n + i] = masks[j][i];
    }
  return IncompleteMatrix(std::move(names), std::move(values), std::move(observed));
}

IncompleteMatrix read_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_csv(in, opts);
}

void write_csv(const IncompleteMatrix& m, std::ostream& out, const CsvOptions& opts) {
  for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m.names()[j];
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      if (m.observed(i, j)) {
        std::snprintf(buf, sizeof buf, "%.17g", m.value(i, j));
        out << buf;
      } else {
        out << opts.na_marker;
      }
    }
    out << '\n';
  }
}

void write_csv(const IncompleteMatrix& m, const std::filesystem::path& path, const CsvOptions& opts) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_csv(m, out, opts);
}

}  // namespace mcar
